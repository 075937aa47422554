"""
精确整数/有理数线性代数工具

包括行式Hermite标准形、整数核、格的交、有理子空间的交、格内求解以及精确的线性可行性判定。
所有整数都是Python的无界整数，有理数使用fractions.Fraction（总是最简、分母为正）。

约定：矩阵的每一行是一个向量，关系总是用左核 {x : x·M = 0} 表示。
"""
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Tuple

from ci_errors import AmbientMismatch, ZeroVector

IntVector = Tuple[int, ...]
IntMatrix = Tuple[IntVector, ...]
RationalVector = Tuple[Fraction, ...]


@dataclass(frozen=True)
class LatticeBasis:
    """Z^n 中子格的一组基（行向量Z-线性无关，保存为HNF形式）

    rank为0时basis为空元组，ambient记录环境维数n。
    """
    basis: IntMatrix
    ambient: int

    @property
    def rank(self) -> int:
        return len(self.basis)


def as_matrix(rows: Iterable[Sequence[int]]) -> IntMatrix:
    return tuple(tuple(int(x) for x in row) for row in rows)


def column_count(M: Sequence[Sequence[int]], ncols: Optional[int] = None) -> int:
    """矩阵的列数；空矩阵必须显式给出ncols"""
    if M:
        n = len(M[0])
        if any(len(row) != n for row in M):
            raise AmbientMismatch("矩阵各行长度不一致")
        if ncols is not None and ncols != n:
            raise AmbientMismatch(f"矩阵列数为{n}，期望{ncols}")
        return n
    if ncols is None:
        raise AmbientMismatch("空矩阵需要显式给出列数")
    return ncols


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def _row_sub(target: list, source: list, q: int) -> None:
    for k, value in enumerate(source):
        target[k] -= q * value


def hnf(M: Sequence[Sequence[int]], ncols: Optional[int] = None) -> Tuple[IntMatrix, IntMatrix]:
    """行式Hermite标准形

    Args:
        M: m×n 整数矩阵
        ncols: M为空时的列数

    Returns:
        (H, U): H = U·M，U幺模（行列式±1）；H为阶梯形，主元为正，
        主元上方的元素约化到 [0, 主元) 之间，零行排在最后。
    """
    n = column_count(M, ncols)
    m = len(M)
    H = [list(int(x) for x in row) for row in M]
    U = [[1 if i == j else 0 for j in range(m)] for i in range(m)]

    r = 0
    for j in range(n):
        if r == m:
            break
        # 在第j列上对r..m-1行做欧几里得消元
        has_pivot = False
        while True:
            nonzero = [i for i in range(r, m) if H[i][j] != 0]
            if not nonzero:
                break
            has_pivot = True
            piv = min(nonzero, key=lambda i: (abs(H[i][j]), i))
            H[r], H[piv] = H[piv], H[r]
            U[r], U[piv] = U[piv], U[r]
            cleared = True
            for i in range(r + 1, m):
                if H[i][j] != 0:
                    q = H[i][j] // H[r][j]
                    _row_sub(H[i], H[r], q)
                    _row_sub(U[i], U[r], q)
                    if H[i][j] != 0:
                        cleared = False
            if cleared:
                break
        if not has_pivot:
            continue

        if H[r][j] < 0:
            H[r] = [-x for x in H[r]]
            U[r] = [-x for x in U[r]]
        for i in range(r):
            q = H[i][j] // H[r][j]
            if q:
                _row_sub(H[i], H[r], q)
                _row_sub(U[i], U[r], q)
        r += 1

    return as_matrix(H), as_matrix(U)


def rank(M: Sequence[Sequence[int]], ncols: Optional[int] = None) -> int:
    """有理数域上的秩（等于HNF中非零行的个数）"""
    if not M:
        return 0
    H, _ = hnf(M, ncols)
    return sum(1 for row in H if any(row))


def row_lattice(M: Sequence[Sequence[int]], ncols: Optional[int] = None) -> LatticeBasis:
    """M的行生成的格，返回HNF基"""
    n = column_count(M, ncols)
    if not M:
        return LatticeBasis(basis=(), ambient=n)
    H, _ = hnf(M, n)
    return LatticeBasis(basis=tuple(row for row in H if any(row)), ambient=n)


def kernel_lattice(M: Sequence[Sequence[int]], ncols: Optional[int] = None) -> LatticeBasis:
    """整数左核 {x ∈ Z^m : x·M = 0} 的基

    U中对应H零行的那些行构成左核的一组基；U幺模，因此该格是饱和的。
    """
    column_count(M, ncols)
    m = len(M)
    if m == 0:
        return LatticeBasis(basis=(), ambient=0)
    H, U = hnf(M, ncols)
    kernel_rows = [U[i] for i, row in enumerate(H) if not any(row)]
    return row_lattice(kernel_rows, m)


def lattice_intersection(B1: LatticeBasis, B2: LatticeBasis) -> LatticeBasis:
    """两个格的交 L1 ∩ L2

    取堆叠矩阵 [B1; -B2] 的左核 (x, y)，交格为 {x·B1}。
    """
    if B1.ambient != B2.ambient:
        raise AmbientMismatch(f"环境维数不一致: {B1.ambient} != {B2.ambient}")
    n = B1.ambient
    if B1.rank == 0 or B2.rank == 0:
        return LatticeBasis(basis=(), ambient=n)

    stacked = list(B1.basis) + [tuple(-x for x in row) for row in B2.basis]
    K = kernel_lattice(stacked, n)
    r1 = B1.rank
    images = []
    for row in K.basis:
        x = row[:r1]
        images.append(tuple(dot(x, [b[k] for b in B1.basis]) for k in range(n)))
    return row_lattice(images, n)


def saturation(M: Sequence[Sequence[int]], ncols: Optional[int] = None) -> LatticeBasis:
    """span_Q(M) ∩ Z^n 的基（饱和格），基向量都是本原向量"""
    n = column_count(M, ncols)
    if rank(M, n) == 0:
        return LatticeBasis(basis=(), ambient=n)
    # 先求正交补 {y : M·y = 0}，再取它的正交补
    transposed = [tuple(row[k] for row in M) for k in range(n)]
    perp = kernel_lattice(transposed, len(M))
    if perp.rank == 0:
        return row_lattice([tuple(1 if i == k else 0 for i in range(n)) for k in range(n)], n)
    perp_transposed = [tuple(row[k] for row in perp.basis) for k in range(n)]
    return kernel_lattice(perp_transposed, perp.rank)


def span_intersection(M1: Sequence[Sequence[int]], M2: Sequence[Sequence[int]], ncols: Optional[int] = None) -> LatticeBasis:
    """有理子空间 span_Q(M1) ∩ span_Q(M2) 的整数基（本原行，秩等于交空间的维数）"""
    n1 = column_count(M1, ncols)
    n2 = column_count(M2, ncols)
    if n1 != n2:
        raise AmbientMismatch(f"环境维数不一致: {n1} != {n2}")
    n = n1
    if not M1 or not M2:
        return LatticeBasis(basis=(), ambient=n)

    stacked = [tuple(row) for row in M1] + [tuple(-x for x in row) for row in M2]
    K = kernel_lattice(stacked, n)
    r1 = len(M1)
    images = []
    for row in K.basis:
        x = row[:r1]
        images.append(tuple(dot(x, [b[k] for b in M1]) for k in range(n)))
    images = [v for v in images if any(v)]
    if not images:
        return LatticeBasis(basis=(), ambient=n)
    return saturation(images, n)


def solve_in_lattice(v: Sequence[int], B: LatticeBasis) -> Optional[IntVector]:
    """求整数系数x使 x·B = v；v不在格中时返回None"""
    if len(v) != B.ambient:
        raise AmbientMismatch(f"向量长度{len(v)}与格的环境维数{B.ambient}不一致")
    if B.rank == 0:
        return () if not any(v) else None

    H, U = hnf(B.basis, B.ambient)
    residual = [int(x) for x in v]
    y = []
    for row in H:
        p = next(k for k, x in enumerate(row) if x != 0)
        if residual[p] % row[p] != 0:
            return None
        q = residual[p] // row[p]
        y.append(q)
        if q:
            _row_sub(residual, list(row), q)
    if any(residual):
        return None
    return tuple(dot(y, [u[k] for u in U]) for k in range(B.rank))


def primitive(v: Sequence[int]) -> Tuple[IntVector, int]:
    """返回 (v/g, g)，g为坐标绝对值的最大公约数；保留符号"""
    g = math.gcd(*(int(x) for x in v))
    if g == 0:
        raise ZeroVector("零向量没有本原方向")
    return tuple(int(x) // g for x in v), g


def primitive_direction(v: Sequence) -> IntVector:
    """有理向量所在射线上的本原整数向量"""
    values = [Fraction(x) for x in v]
    denominator = math.lcm(*(x.denominator for x in values))
    scaled = [int(x * denominator) for x in values]
    return primitive(scaled)[0]


class _PhaseOneTableau:
    """一阶段单纯形表（精确有理数，Bland规则保证终止）

    求解 C·z = b, z ≥ 0 的可行解。C为p×N，每个约束配一个人工变量。
    """

    def __init__(self, C: Sequence[Sequence[int]], b: Sequence[int], N: int):
        self.p = len(C)
        self.N = N
        self.rows = []
        for i in range(self.p):
            sign = -1 if b[i] < 0 else 1
            row = [Fraction(sign * x) for x in C[i]]
            row += [Fraction(1 if k == i else 0) for k in range(self.p)]
            row.append(Fraction(sign * b[i]))
            self.rows.append(row)
        self.basis = [self.N + i for i in range(self.p)]
        width = self.N + self.p + 1
        # 目标行：简约费用，最后一项为 -(当前目标值)
        self.cost = [Fraction(0)] * width
        for j in range(self.N):
            self.cost[j] = -sum((row[j] for row in self.rows), Fraction(0))
        self.cost[-1] = -sum((row[-1] for row in self.rows), Fraction(0))

    def _pivot(self, i: int, j: int) -> None:
        pivot_row = self.rows[i]
        piv = pivot_row[j]
        self.rows[i] = pivot_row = [x / piv for x in pivot_row]
        for k, row in enumerate(self.rows):
            if k != i and row[j] != 0:
                factor = row[j]
                self.rows[k] = [x - factor * y for x, y in zip(row, pivot_row)]
        if self.cost[j] != 0:
            factor = self.cost[j]
            self.cost = [x - factor * y for x, y in zip(self.cost, pivot_row)]
        self.basis[i] = j

    def solve(self) -> Optional[RationalVector]:
        while True:
            entering = next((j for j in range(self.N + self.p) if self.cost[j] < 0), None)
            if entering is None:
                break
            best = None
            for i, row in enumerate(self.rows):
                if row[entering] > 0:
                    key = (row[-1] / row[entering], self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            # 一阶段目标有下界0，不会无界
            self._pivot(best[1], entering)

        if self.cost[-1] != 0:
            return None
        z = [Fraction(0)] * self.N
        for i, var in enumerate(self.basis):
            if var < self.N:
                z[var] = self.rows[i][-1]
        return tuple(z)


def _nonnegative_solution(eq: Sequence[Sequence[int]], rhs: Sequence[int]) -> Optional[RationalVector]:
    """求 λ ≥ 0 使 λ·eq = rhs"""
    n = len(rhs)
    C = [[row[c] for row in eq] for c in range(n)]
    return _PhaseOneTableau(C, rhs, len(eq)).solve()


def lp_feasible(eq: Sequence[Sequence[int]], rhs: Sequence[int], strict: Iterable[int] = ()) -> Optional[RationalVector]:
    """精确线性可行性判定

    Args:
        eq: k×n 整数矩阵，每行对应一个变量
        rhs: 长度n的右端向量
        strict: 要求严格为正的变量下标

    Returns:
        满足 λ ≥ 0、λ·eq = rhs 且 λ_j > 0 (j ∈ strict) 的有理向量 λ；不存在时返回None。
        相同输入总是返回相同的解。
    """
    eq = as_matrix(eq)
    rhs = tuple(int(x) for x in rhs)
    k = len(eq)
    n = len(rhs)
    if any(len(row) != n for row in eq):
        raise AmbientMismatch("约束矩阵的列数与右端向量长度不一致")
    strict = sorted(set(strict))
    if any(j < 0 or j >= k for j in strict):
        raise IndexError(f"严格正变量下标越界: {strict}")
    if k == 0:
        return () if not any(rhs) else None

    if not strict:
        solution = _nonnegative_solution(eq, rhs)
    else:
        # 齐次化：λ = μ/t，其中 μ_j ≥ 1 (j ∈ strict)、t ≥ 1；
        # 代入 μ_j = 1 + z_j、t = 1 + τ 后变成标准的非负可行性问题
        shifted_rhs = list(rhs)
        for j in strict:
            for c in range(n):
                shifted_rhs[c] -= eq[j][c]
        extended = list(eq) + [tuple(-x for x in rhs)]
        z = _nonnegative_solution(extended, shifted_rhs)
        if z is None:
            return None
        strict_set = set(strict)
        t = 1 + z[k]
        solution = tuple((z[j] + (1 if j in strict_set else 0)) / t for j in range(k))

    if solution is None:
        return None
    # 精确验算
    for c in range(n):
        if sum((solution[j] * eq[j][c] for j in range(k)), Fraction(0)) != rhs[c]:
            raise ArithmeticError("单纯形返回的解不满足约束")
    return solution
