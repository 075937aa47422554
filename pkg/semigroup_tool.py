"""
仿射半群 N A 工具

校验（无可逆元）、带证书的精确成员判定、正倍数存在性，以及见证构造用到的倍数扫描。
"""
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence, Tuple

from ci_errors import NoMultipleExists, ScanLimitExceeded, ZeroVector
from cone_tool import cone_membership, is_strongly_convex, positive_functional
from generator_set import GeneratorLike, GeneratorSet, as_generator_set, check_ambient
from linalg_utils import IntMatrix, IntVector, dot, lattice_intersection, row_lattice
from logging_config import setup_logger
from toolkit_config import Config

logger = setup_logger(logger_name="SemigroupTool")

MembershipCertificate = Tuple[int, ...]


@dataclass(frozen=True)
class MultiplesTrace:
    """{t ≥ 1 : t·b ∈ N A} 的扫描结果

    所有成员都是step的倍数；members只列出扫描范围内的成员，complete_from之后step的所有倍数都是成员。
    """
    base: IntVector
    members: Tuple[int, ...]
    complete_from: int
    step: int = 1

    def contains(self, t: int) -> bool:
        if t >= self.complete_from:
            return t % self.step == 0
        return t in self.members

    def iter_members(self):
        """按升序无限枚举成员"""
        yield from (t for t in self.members if t < self.complete_from)
        t = self.complete_from
        while True:
            yield t
            t += self.step


def validate(A: GeneratorLike) -> bool:
    """N A 是否没有非零可逆元（等价于 pos_Q(A) 强凸）"""
    return is_strongly_convex(as_generator_set(A))[0]


@lru_cache(maxsize=16384)
def _search(b: IntVector, vectors: IntMatrix, c: IntVector) -> Optional[MembershipCertificate]:
    m = len(vectors)
    weights = [dot(c, v) for v in vectors]
    failed = set()

    def dfs(i: int, residual: IntVector) -> Optional[MembershipCertificate]:
        if not any(residual):
            return (0,) * (m - i)
        if i == m:
            return None
        if (i, residual) in failed:
            return None
        level = dot(c, residual)
        a = vectors[i]
        # 系数从大到小尝试，得到字典序最大的证书
        for k in range(level // weights[i], -1, -1):
            rest = tuple(r - k * x for r, x in zip(residual, a))
            found = dfs(i + 1, rest)
            if found is not None:
                return (k,) + found
        failed.add((i, residual))
        return None

    return dfs(0, b)


def membership(b: Sequence[int], A: GeneratorLike) -> Optional[MembershipCertificate]:
    """判断 b ∈ N A

    以正线性函数c给出每个系数的上界 n_i ≤ (c·b)/(c·a_i)，按生成元下标深度优先搜索，
    失败的 (下标, 余量) 记入备忘录。

    Args:
        b: 待判定的整数向量
        A: 生成元集合（锥必须强凸）

    Returns:
        Optional[MembershipCertificate]: 非负整数系数 (n_0, ..., n_{m-1})，Σn_i a_i = b；不属于时返回None

    Raises:
        NotPointed: 锥包含直线
    """
    A = as_generator_set(A)
    b = check_ambient(b, A)
    c = positive_functional(A)
    if not any(b):
        return (0,) * A.m
    if dot(c, b) < 0:
        return None
    return _search(b, A.vectors, c)


def exists_positive_multiple(b: Sequence[int], A: GeneratorLike) -> bool:
    """是否存在正整数t使 t·b ∈ N A（等价于 b ∈ pos_Q(A)）"""
    A = as_generator_set(A)
    b = check_ambient(b, A)
    if not any(b):
        raise ZeroVector("b不能是零向量")
    positive_functional(A)
    return cone_membership(b, A) is not None


def smallest_multiple(b: Sequence[int], A: GeneratorLike) -> Optional[int]:
    """最小的正整数t使 t·b ∈ N A；不存在时返回None

    有理锥证书λ的公分母T一定满足 T·b ∈ N A，因此搜索在T处终止。
    """
    A = as_generator_set(A)
    b = check_ambient(b, A)
    if not exists_positive_multiple(b, A):
        return None
    lam = cone_membership(b, A)
    bound = math.lcm(*(x.denominator for x in lam))
    for t in range(1, bound + 1):
        if membership(tuple(t * x for x in b), A) is not None:
            return t
    raise ArithmeticError(f"公分母{bound}应当是一个可行的倍数")


def _face_generators(b: IntVector, A: GeneratorSet) -> Tuple[IntVector, ...]:
    """pos_Q(A) 中包含b的最小面上的生成元：a_i 在该面上当且仅当 -a_i ∈ pos_Q(A ∪ {-b})"""
    extended = list(A.vectors) + [tuple(-x for x in b)]
    return tuple(a for a in A.vectors if cone_membership(tuple(-x for x in a), extended) is not None)


def multiples_step(b: Sequence[int], A: GeneratorLike) -> int:
    """{t ≥ 1 : t·b ∈ N A} 的最大公约数

    t·b 的任何表示只用到包含b的最小面F上的生成元，而F的相对内部足够深处的格点都属于 N(A ∩ F)，
    所以步长就是使 t·b ∈ Z(A ∩ F) 的最小正整数t。

    Raises:
        NoMultipleExists: b不在锥中
    """
    A = as_generator_set(A)
    b = check_ambient(b, A)
    if not exists_positive_multiple(b, A):
        raise NoMultipleExists(f"{b} 不在锥中，没有正倍数属于半群")
    L = lattice_intersection(row_lattice(_face_generators(b, A), A.n), row_lattice([b], A.n))
    k = next(i for i, x in enumerate(b) if x)
    return abs(L.basis[0][k]) // abs(b[k])


def multiples_trace(b: Sequence[int], A: GeneratorLike, scan_limit: Optional[int] = None) -> MultiplesTrace:
    """扫描 t = d, 2d, ... 记录 t·b ∈ N A 的成员，d为multiples_step

    成员集合在加法下封闭且都是d的倍数；一旦观察到 s/d 个连续的d的倍数都是成员（s为最小成员），
    之后d的每个倍数都可以写成该段中的数加上s的倍数，扫描即可停止。

    Raises:
        NoMultipleExists: 没有任何正倍数落在半群中
        ScanLimitExceeded: 扫描到上限仍未观察到完整的尾部
    """
    A = as_generator_set(A)
    b = check_ambient(b, A)
    d = multiples_step(b, A)
    limit = scan_limit if scan_limit is not None else Config().trace_scan_limit

    members = []
    run_start = None
    t = 0
    while True:
        t += d
        if t > limit:
            raise ScanLimitExceeded(f"{b} 的倍数扫描超过上限{limit}，步长{d}，成员: {members[:10]}...")
        if membership(tuple(t * x for x in b), A) is None:
            run_start = None
            continue
        members.append(t)
        if run_start is None:
            run_start = t
        if (t - run_start) // d + 1 >= members[0] // d:
            break

    logger.debug(f"{b} 的倍数扫描到{t}为止，步长{d}，完整尾部从{run_start}开始")
    return MultiplesTrace(base=b, members=tuple(members), complete_from=run_start, step=d)
