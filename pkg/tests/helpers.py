"""测试用的暴力计算：有界枚举的半群成员、格点扫描和纤维图上的极小生成元个数"""
import itertools
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import Matrix

from linalg_utils import dot


def determinant(U: Sequence[Sequence[int]]) -> int:
    return int(Matrix([list(row) for row in U]).det())


def mat_mul(U: Sequence[Sequence[int]], M: Sequence[Sequence[int]]) -> Tuple[Tuple[int, ...], ...]:
    if not M:
        return tuple(() for _ in U)
    n = len(M[0])
    return tuple(tuple(sum(u[k] * M[k][j] for k in range(len(M))) for j in range(n)) for u in U)


def brute_membership(b: Sequence[int], A: Sequence[Sequence[int]], c: Sequence[int]) -> bool:
    """枚举所有满足 n_i ≤ (c·b)/(c·a_i) 的系数"""
    level = dot(c, b)
    if level < 0:
        return False
    bounds = [level // dot(c, a) for a in A]
    for coefficients in itertools.product(*(range(k + 1) for k in bounds)):
        if tuple(sum(x * a[j] for x, a in zip(coefficients, A)) for j in range(len(b))) == tuple(b):
            return True
    return False


def lattice_points(basis: Sequence[Sequence[int]], radius: int) -> List[Tuple[int, ...]]:
    """系数在 [-radius, radius] 内的格点"""
    points = set()
    for coefficients in itertools.product(range(-radius, radius + 1), repeat=len(basis)):
        points.add(tuple(sum(x * b[j] for x, b in zip(coefficients, basis)) for j in range(len(basis[0]))))
    return sorted(points)


def fiber_mu(A: Sequence[Sequence[int]], c: Sequence[int], bound: int) -> int:
    """纤维图给出的极小生成元个数

    对每个次数b（c·b ≤ bound），纤维 {x ∈ N^m : A·x = b} 中两点有公共支撑时连边，μ = Σ (连通分支数 − 1)。
    """
    weights = [dot(c, a) for a in A]
    m = len(A)
    fibers: Dict[Tuple[int, ...], List[Tuple[int, ...]]] = {}

    def enumerate_points(i: int, remaining: int, prefix: List[int]):
        if i == m:
            yield tuple(prefix)
            return
        for k in range(remaining // weights[i] + 1):
            yield from enumerate_points(i + 1, remaining - k * weights[i], prefix + [k])

    for x in enumerate_points(0, bound, []):
        degree = tuple(sum(xi * a[j] for xi, a in zip(x, A)) for j in range(len(A[0])))
        fibers.setdefault(degree, []).append(x)

    mu = 0
    for points in fibers.values():
        parent = list(range(len(points)))

        def find(i: int) -> int:
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for i, j in itertools.combinations(range(len(points)), 2):
            if any(p > 0 and q > 0 for p, q in zip(points[i], points[j])):
                parent[find(i)] = find(j)
        mu += len({find(i) for i in range(len(points))}) - 1
    return mu


def solves(coefficients: Optional[Sequence[int]], vectors: Sequence[Sequence[int]], target: Sequence[int]) -> bool:
    if coefficients is None:
        return False
    return tuple(sum(x * v[j] for x, v in zip(coefficients, vectors)) for j in range(len(target))) == tuple(target)
