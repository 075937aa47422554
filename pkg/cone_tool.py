"""
有理多面体锥 pos_Q(A) 工具

维数、强凸性（尖锥）判定、锥成员、相对内部成员、极射线、单纯形锥判定、锥相等，
以及两个锥直和的类型判定。所有判定都通过 linalg_utils.lp_feasible 精确求解。
"""
from enum import Enum
from functools import cached_property, lru_cache
from typing import Optional, Sequence, Tuple

from ci_errors import AmbientMismatch, NotPointed, ZeroVector
from generator_set import GeneratorLike, as_generator_set, check_ambient
from linalg_utils import IntMatrix, IntVector, RationalVector, dot, lp_feasible, primitive, primitive_direction, rank
from logging_config import setup_logger

logger = setup_logger(logger_name="ConeTool")


class SumType(str, Enum):
    """直和的类型"""
    INTERNAL = "internal"
    EXTERNAL = "external"


class ExternalCase(str, Enum):
    """外部型直和的两种情形：a在两个锥中都是极射线，或只在其中一个中是"""
    SHARED_RAY = "shared-ray"
    ABSORBED_RAY = "absorbed-ray"


@lru_cache(maxsize=4096)
def _dim(vectors: IntMatrix) -> int:
    return rank(vectors)


@lru_cache(maxsize=4096)
def _lineality_witness(vectors: IntMatrix) -> Optional[IntVector]:
    """求 λ ≥ 0，Σλ = 1，Σλa = 0；可行时锥包含直线，返回σ∩(−σ)中的一个非零向量"""
    n = len(vectors[0])
    eq = [v + (1,) for v in vectors]
    rhs = (0,) * n + (1,)
    lam = lp_feasible(eq, rhs)
    if lam is None:
        return None
    i = next(j for j, x in enumerate(lam) if x > 0)
    return vectors[i]


@lru_cache(maxsize=4096)
def _positive_functional(vectors: IntMatrix) -> Optional[IntVector]:
    """求c使 c·a_i ≥ 1 对所有生成元成立，c = p − q 拆成两个非负变量"""
    m = len(vectors)
    n = len(vectors[0])
    eq = []
    for k in range(n):
        eq.append(tuple(v[k] for v in vectors))
    for k in range(n):
        eq.append(tuple(-v[k] for v in vectors))
    for i in range(m):
        eq.append(tuple(-1 if j == i else 0 for j in range(m)))
    solution = lp_feasible(eq, (1,) * m)
    if solution is None:
        return None
    c = [solution[k] - solution[n + k] for k in range(n)]
    return primitive_direction(c)


@lru_cache(maxsize=4096)
def _extreme_rays(vectors: IntMatrix) -> Tuple[IntVector, ...]:
    directions = []
    for v in vectors:
        d, _ = primitive(v)
        if d not in directions:
            directions.append(d)
    rays = []
    for i, d in enumerate(directions):
        others = directions[:i] + directions[i + 1:]
        if not others or lp_feasible(others, d) is None:
            rays.append(d)
    logger.debug(f"{len(vectors)}个生成元，{len(directions)}个不同方向，{len(rays)}条极射线")
    return tuple(sorted(rays))


def cone_dim(A: GeneratorLike) -> int:
    """锥的维数（生成元矩阵的秩）"""
    A = as_generator_set(A)
    return _dim(A.vectors)


def is_strongly_convex(A: GeneratorLike) -> Tuple[bool, IntVector]:
    """判断 pos_Q(A) 是否强凸（σ ∩ (−σ) = {0}）

    Args:
        A: 生成元集合

    Returns:
        Tuple[bool, IntVector]: 尖锥时返回 (True, c)，c·a_i > 0 对所有生成元成立；
        否则返回 (False, x)，x是σ∩(−σ)中的非零向量
    """
    A = as_generator_set(A)
    witness = _lineality_witness(A.vectors)
    if witness is not None:
        return False, witness
    return True, _positive_functional(A.vectors)


def positive_functional(A: GeneratorLike) -> IntVector:
    """在所有生成元上严格为正的本原整数函数c

    Raises:
        NotPointed: 锥包含直线
    """
    A = as_generator_set(A)
    c = _positive_functional(A.vectors)
    if c is None:
        raise NotPointed("锥不是强凸的，不存在严格正的线性函数")
    return c


def cone_membership(v: Sequence[int], A: GeneratorLike) -> Optional[RationalVector]:
    """v ∈ pos_Q(A) 时返回非负有理系数λ（Σλ_i a_i = v），否则返回None"""
    A = as_generator_set(A)
    v = check_ambient(v, A)
    return lp_feasible(A.vectors, v)


def relint_membership(v: Sequence[int], A: GeneratorLike) -> bool:
    """v是否在 pos_Q(A) 的相对内部（存在全部严格为正的系数）"""
    A = as_generator_set(A)
    v = check_ambient(v, A)
    return lp_feasible(A.vectors, v, strict=range(A.m)) is not None


def extreme_rays(A: GeneratorLike) -> Tuple[IntVector, ...]:
    """极射线（本原方向，字典序排列）

    先把生成元约化为互不相同的本原方向，方向r是极射线当且仅当r不在其他方向生成的锥中。

    Raises:
        NotPointed: 非尖锥没有定义极射线
    """
    A = as_generator_set(A)
    positive_functional(A)
    return _extreme_rays(A.vectors)


def is_simplex(A: GeneratorLike) -> bool:
    A = as_generator_set(A)
    return len(extreme_rays(A)) == cone_dim(A)


def cones_equal(A: GeneratorLike, B: GeneratorLike) -> bool:
    """两个尖锥是否相等（比较排序后的本原极射线）"""
    A = as_generator_set(A)
    B = as_generator_set(B)
    if A.n != B.n:
        raise AmbientMismatch(f"环境维数不一致: {A.n} != {B.n}")
    return extreme_rays(A) == extreme_rays(B)


def face_functional(r: Sequence[int], A: GeneratorLike) -> Optional[IntVector]:
    """极射线r的支撑函数

    Returns:
        本原整数向量c，满足 c·r = 0 且对不与r同向的生成元 c·a_i > 0；r不是极射线时返回None
    """
    A = as_generator_set(A)
    r = check_ambient(r, A)
    if not any(r):
        raise ZeroVector("零向量不是射线")
    direction, _ = primitive(r)
    if direction not in extreme_rays(A):
        return None

    n = A.n
    others = [v for v in A.vectors if primitive(v)[0] != direction]
    if not others:
        # 锥就是这条射线本身
        return _orthogonal(direction)

    k = len(others)
    # 列：c·r = 0，然后 c·a_i − s_i = 1
    eq = []
    for j in range(n):
        eq.append((direction[j],) + tuple(v[j] for v in others))
    for j in range(n):
        eq.append((-direction[j],) + tuple(-v[j] for v in others))
    for i in range(k):
        eq.append((0,) + tuple(-1 if t == i else 0 for t in range(k)))
    solution = lp_feasible(eq, (0,) + (1,) * k)
    if solution is None:
        return None
    c = primitive_direction([solution[j] - solution[n + j] for j in range(n)])
    assert dot(c, direction) == 0
    return c


def _orthogonal(direction: IntVector) -> IntVector:
    """与direction正交的一个本原整数向量；n=1时只有零函数"""
    n = len(direction)
    if n == 1:
        return (0,)
    j = next(k for k, x in enumerate(direction) if x != 0)
    k = 1 if j == 0 else 0
    c = [0] * n
    c[j], c[k] = direction[k], -direction[j]
    return primitive(c)[0]


def classify_direct_sum(A1: GeneratorLike, A2: GeneratorLike, a: Sequence[int]) -> Tuple[SumType, Optional[ExternalCase]]:
    """沿a的直和类型

    a的方向不是任何一边的极射线时为内部型；同时是两边的极射线为SharedRay，只是一边的为AbsorbedRay。
    """
    d, _ = primitive(a)
    in_first = d in extreme_rays(A1)
    in_second = d in extreme_rays(A2)
    if not in_first and not in_second:
        return SumType.INTERNAL, None
    if in_first and in_second:
        return SumType.EXTERNAL, ExternalCase.SHARED_RAY
    return SumType.EXTERNAL, ExternalCase.ABSORBED_RAY


class Cone:
    """pos_Q(A) 以及缓存的维数、尖锥性和极射线"""

    def __init__(self, generators: GeneratorLike):
        self.generators = as_generator_set(generators)

    @cached_property
    def dim(self) -> int:
        return cone_dim(self.generators)

    @cached_property
    def pointed(self) -> bool:
        return is_strongly_convex(self.generators)[0]

    @cached_property
    def extreme_rays(self) -> Tuple[IntVector, ...]:
        return extreme_rays(self.generators)

    def __contains__(self, v) -> bool:
        return cone_membership(v, self.generators) is not None

    def __repr__(self):
        return f"Cone(dim={self.dim}, generators={list(self.generators.vectors)})"
