"""
锥的直和工具

直和的内部型/外部型判定与射线计数、广义双棱锥（general bipyramidal）的构造与识别、
完全交锥的 2n-2 射线上界检查、由两个完全交部分构造粘合见证，以及随机实例生成。
"""
import math
import random
import time
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple, Union

from ci_errors import (AmbientMismatch, BadDimension, DimensionOne, GenerationFailed, MalformedTree, NoCoprimeMultiples, NoSharedLine, NotCICone, PartNotCI,
                       ToricToolkitError)
from cone_tool import ExternalCase, SumType, classify_direct_sum, cone_dim, cone_membership, cones_equal, extreme_rays, positive_functional
from generator_set import GeneratorLike, GeneratorSet, as_generator_set
from gluing_tool import (DecompositionTree, Mode, Node, check_gluing, check_tree_shape, decompose, is_ci_cone, is_complete_intersection,
                         shared_line)
from linalg_utils import IntVector, lattice_intersection, primitive, rank, row_lattice, span_intersection
from logging_config import setup_logger
from semigroup_tool import exists_positive_multiple, multiples_trace
from toolkit_config import Config

logger = setup_logger(logger_name="DirectSumTool")

DIRECT_SUM_KINDS = ("internal", ExternalCase.SHARED_RAY.value, ExternalCase.ABSORBED_RAY.value)

# 随机生成时倍数扫描的上限，扫描不到完整尾部就换一组随机数重试
GENERATION_SCAN_LIMIT = 256


@dataclass(frozen=True)
class DirectSumResult:
    """σ1 ⊕_a σ2 的计算结果

    a是两个线性包交线上的本原生成元，符号取在两个锥中；predicted_rays是按类型预测的射线数，actual_rays是实际计算的极射线。
    """
    generators: GeneratorSet
    a: IntVector
    sum_type: SumType
    external_case: Optional[ExternalCase]
    dim: int
    summand_dims: Tuple[int, int]
    summand_rays: Tuple[int, int]
    predicted_rays: int
    actual_rays: Tuple[IntVector, ...]


@dataclass(frozen=True)
class RayLeaf:
    """二维单纯形锥（两条射线）"""
    rays: Tuple[IntVector, ...]


@dataclass(frozen=True)
class RayNode:
    left: "RayTree"
    right: "RayTree"
    a: IntVector


RayTree = Union[RayLeaf, RayNode]


@dataclass(frozen=True)
class BoundReport:
    n: int
    k: int
    bound_holds: bool
    equality: bool
    bipyramidal: bool
    violations: Tuple[str, ...] = ()


@dataclass(frozen=True)
class WitnessResult:
    """粘合见证：A_out = τ·A1 ∪ μ·A2 是完全交，tree是它的分解树"""
    mu: int
    tau: int
    g: int
    a: IntVector
    generators: GeneratorSet
    tree: DecompositionTree


def _common_line(A1: GeneratorSet, A2: GeneratorSet) -> Optional[IntVector]:
    """span_Q(σ1) ∩ span_Q(σ2) = Q a 且a同时在两个锥中时返回a，否则返回None"""
    S = span_intersection(A1.vectors, A2.vectors, A1.n)
    if S.rank != 1:
        return None
    a = S.basis[0]
    for candidate in (a, tuple(-x for x in a)):
        if cone_membership(candidate, A1) is not None and cone_membership(candidate, A2) is not None:
            return candidate
    return None


def direct_sum(A1: GeneratorLike, A2: GeneratorLike) -> Optional[DirectSumResult]:
    """两个尖锥沿公共直线的直和

    Args:
        A1: 第一个锥的生成元
        A2: 第二个锥的生成元（与A1在同一个环境空间中）

    Returns:
        Optional[DirectSumResult]: 线性包的交不是一条直线，或直线的两个方向都不同时落在两个锥中时返回None

    Raises:
        NotPointed: 有一个锥不是强凸的
        AmbientMismatch: 环境维数不一致
        ToricToolkitError: 实际的维数或极射线数与按类型预测的不符
    """
    A1 = as_generator_set(A1)
    A2 = as_generator_set(A2)
    if A1.n != A2.n:
        raise AmbientMismatch(f"环境维数不一致: {A1.n} != {A2.n}")
    positive_functional(A1)
    positive_functional(A2)

    a = _common_line(A1, A2)
    if a is None:
        return None

    sum_type, external_case = classify_direct_sum(A1, A2, a)
    k1, k2 = len(extreme_rays(A1)), len(extreme_rays(A2))
    predicted = k1 + k2 if sum_type == SumType.INTERNAL else k1 + k2 - 1
    union = A1.concat(A2)
    actual = extreme_rays(union)
    dim = cone_dim(union)
    summand_dims = (cone_dim(A1), cone_dim(A2))
    if len(actual) != predicted or dim != summand_dims[0] + summand_dims[1] - 1:
        raise ToricToolkitError(f"直和计数不符: 预测{predicted}条射线，实际{len(actual)}条；维数{dim}，两部分{summand_dims}")
    return DirectSumResult(generators=union,
                           a=a,
                           sum_type=sum_type,
                           external_case=external_case,
                           dim=dim,
                           summand_dims=summand_dims,
                           summand_rays=(k1, k2),
                           predicted_rays=predicted,
                           actual_rays=actual)


def verify_sum_with_ray(A1: GeneratorLike, r: Sequence[int]) -> bool:
    """沿一维锥 pos{r} 的直和总是外部型，且结果就是σ1本身"""
    A1 = as_generator_set(A1)
    result = direct_sum(A1, GeneratorSet((tuple(r),)))
    if result is None:
        return False
    return result.sum_type == SumType.EXTERNAL and cones_equal(result.generators, A1)


def bipyramid(n: int) -> GeneratorSet:
    """标准双棱锥 {e_i + e_n, -e_i + e_n : 1 ≤ i ≤ n-1} ⊂ Z^n，有 2n-2 条极射线"""
    if n < 2:
        raise BadDimension(f"双棱锥的维数至少为2: {n}")
    vectors = []
    for i in range(n - 1):
        plus = [0] * n
        plus[i], plus[n - 1] = 1, 1
        minus = [0] * n
        minus[i], minus[n - 1] = -1, 1
        vectors += [tuple(plus), tuple(minus)]
    return GeneratorSet(tuple(vectors), name=f"bipyramid{n}")


def bipyramid_summands(n: int) -> List[GeneratorSet]:
    """bipyramid(n) 的n-1个二维单纯形锥，沿 e_n 逐次做内部型直和即得到bipyramid(n)"""
    B = bipyramid(n)
    return [B.subset((2 * i, 2 * i + 1)) for i in range(n - 1)]


def _bipyramidal_split(rays: Tuple[IntVector, ...], memo: Dict[FrozenSet[IntVector], Optional[RayTree]]) -> Optional[RayTree]:
    key = frozenset(rays)
    if key in memo:
        return memo[key]
    d = rank(rays, len(rays[0]))
    result = None
    if len(rays) == 2 * d - 2:
        if d == 2:
            result = RayLeaf(rays)
        else:
            first, rest = rays[0], rays[1:]
            for mask in range(1 << len(rest)):
                R1 = (first,) + tuple(r for j, r in enumerate(rest) if mask >> j & 1)
                R2 = tuple(r for j, r in enumerate(rest) if not mask >> j & 1)
                if not R2:
                    continue
                S = span_intersection(R1, R2)
                if S.rank != 1:
                    continue
                line = S.basis[0]
                a = next((c for c in (line, tuple(-x for x in line)) if cone_membership(c, R1) is not None and cone_membership(c, R2) is not None), None)
                # 内部型：a不与任何一边的极射线平行
                if a is None or a in R1 or a in R2:
                    continue
                left = _bipyramidal_split(R1, memo)
                if left is None:
                    continue
                right = _bipyramidal_split(R2, memo)
                if right is None:
                    continue
                result = RayNode(left=left, right=right, a=a)
                break
    memo[key] = result
    return result


def is_general_bipyramidal(A: GeneratorLike) -> Tuple[bool, Optional[RayTree]]:
    """锥是否可以由二维单纯形锥逐次做内部型直和得到

    内部型直和的极射线恰好是两部分极射线的不交并，因此只需在极射线集合的划分上递归；
    广义双棱锥的每个子锥都恰有 2·dim-2 条射线，不满足的子集直接剪枝。

    Raises:
        NotPointed: 锥包含直线
    """
    A = as_generator_set(A)
    rays = extreme_rays(A)
    tree = _bipyramidal_split(tuple(rays), {})
    return tree is not None, tree


def check_ray_bound(A: GeneratorLike, max_gens: Optional[int] = None) -> BoundReport:
    """完全交锥的射线上界：k ≤ 2n-2，且等号成立当且仅当锥是广义双棱锥

    Raises:
        NotPointed: 锥包含直线
        DimensionOne: 一维锥不适用
        NotCICone: 锥不是完全交锥
    """
    A = as_generator_set(A)
    rays = extreme_rays(A)
    n = cone_dim(A)
    if n < 2:
        raise DimensionOne("一维锥没有 2n-2 上界")
    verdict, _ = is_ci_cone(A, max_gens=max_gens)
    if not verdict:
        raise NotCICone("上界只对完全交锥成立")

    k = len(rays)
    bipyramidal, _ = is_general_bipyramidal(A)
    bound_holds = k <= 2 * n - 2
    equality = k == 2 * n - 2
    violations = []
    if not bound_holds:
        violations.append("bound")
    if equality and not bipyramidal:
        violations.append("equality-without-bipyramidal")
    if bipyramidal and not equality:
        violations.append("bipyramidal-without-equality")
    if violations:
        logger.warning(f"射线上界检查发现反例: n={n}, k={k}, {violations}")
    return BoundReport(n=n, k=k, bound_holds=bound_holds, equality=equality, bipyramidal=bipyramidal, violations=tuple(violations))


def _witness_line(A1: GeneratorSet, A2: GeneratorSet) -> IntVector:
    """Z A1 ∩ Z A2 = Z a，符号取在两个锥中"""
    L = lattice_intersection(row_lattice(A1.vectors, A1.n), row_lattice(A2.vectors, A2.n))
    if L.rank != 1:
        raise NoSharedLine(f"Z A1 ∩ Z A2 的秩为{L.rank}，不是1")
    line = L.basis[0]
    a = next((c for c in (line, tuple(-x for x in line)) if exists_positive_multiple(c, A1) and exists_positive_multiple(c, A2)), None)
    if a is None:
        raise NoSharedLine(f"a={list(line)} 的两个方向都不同时落在两个锥中")
    return a


def ci_witness(A1: GeneratorLike, A2: GeneratorLike, max_gens: Optional[int] = None, scan_limit: Optional[int] = None) -> WitnessResult:
    """由两个完全交部分构造一个完全交的粘合

    取 Z A1 ∩ Z A2 = Z a，g为a坐标的最大公约数；在两边的倍数扫描中取字典序最小的 (μ, τ)，
    使 μ、τ、g 两两互素，输出 τ·A1 ∪ μ·A2（先A1后A2）及其粘合树。
    扫描的成员可以全是某个d>1的倍数（a落在只含偶数倍的面上等情形），只要步长之间以及与g互素就能取到。

    Raises:
        PartNotCI: 某一部分不是完全交
        NoSharedLine: 格交不是秩1，或生成元不同时落在两个锥中
        NoCoprimeMultiples: 两边的步长与g不满足互素条件
    """
    A1 = as_generator_set(A1)
    A2 = as_generator_set(A2)
    if A1.n != A2.n:
        raise AmbientMismatch(f"环境维数不一致: {A1.n} != {A2.n}")
    for label, part in (("A1", A1), ("A2", A2)):
        if not is_complete_intersection(part, max_gens=max_gens)[0]:
            raise PartNotCI(f"{label} 不是完全交")

    a = _witness_line(A1, A2)
    _, g = primitive(a)
    trace1 = multiples_trace(a, A1, scan_limit)
    trace2 = multiples_trace(a, A2, scan_limit)
    if math.gcd(trace1.step, g * trace2.step) != 1 or math.gcd(trace2.step, g) != 1:
        raise NoCoprimeMultiples(f"步长 {trace1.step}、{trace2.step} 与 g={g} 不互素")
    # τ只能取trace2.step的倍数，μ还必须与该步长互素
    mu = next(t for t in trace1.iter_members() if math.gcd(t, g * trace2.step) == 1)
    tau = next(t for t in trace2.iter_members() if math.gcd(t, mu * g) == 1)

    out = A1.scaled(tau).concat(A2.scaled(mu))
    E1 = tuple(range(A1.m))
    E2 = tuple(range(A1.m, out.m))
    cert = check_gluing(out, E1, E2)
    left = decompose(out, E1, Mode.GLUING)
    right = decompose(out, E2, Mode.GLUING)
    if cert is None or left is None or right is None:
        raise ArithmeticError(f"μ={mu}, τ={tau} 时没有得到粘合")
    sum_type, _ = classify_direct_sum(out.subset(E1), out.subset(E2), cert.a)
    logger.info(f"见证: a={list(a)}, g={g}, μ={mu}, τ={tau}")
    return WitnessResult(mu=mu, tau=tau, g=g, a=a, generators=out, tree=Node(left=left, right=right, cert=cert, sum_type=sum_type))


def verify_decomposition(tree: DecompositionTree, A: GeneratorLike) -> bool:
    """从头复核分解树：叶子线性无关，每个节点的格生成元与成员证书成立，且两部分的锥直和类型与记录一致"""
    A = as_generator_set(A)
    try:
        check_tree_shape(tree, A)
    except MalformedTree as e:
        logger.warning(f"分解树结构不合法: {e}")
        return False

    for node in tree.nodes():
        cert = node.cert
        line = shared_line(A, cert.E1, cert.E2)
        if line is None or cert.a not in (line[0], tuple(-x for x in line[0])):
            logger.warning(f"节点 {list(cert.E1)} | {list(cert.E2)} 的格生成元不正确")
            return False
        target = tuple(cert.t * x for x in cert.a)
        for part, coefficients in ((cert.E1, cert.cert1), (cert.E2, cert.cert2)):
            if len(coefficients) != len(part) or any(x < 0 for x in coefficients):
                return False
            combination = tuple(sum(coefficients[j] * A[i][k] for j, i in enumerate(part)) for k in range(A.n))
            if combination != target:
                logger.warning(f"节点 {list(cert.E1)} | {list(cert.E2)} 的成员证书不能还原 {list(target)}")
                return False
        result = direct_sum(A.subset(cert.E1), A.subset(cert.E2))
        if result is None or result.sum_type != node.sum_type:
            logger.warning(f"节点 {list(cert.E1)} | {list(cert.E2)} 的锥直和不成立或类型不符")
            return False
    return True


def _random_point(rng: random.Random, vectors: Sequence[IntVector]) -> IntVector:
    """生成元的随机非负整数组合（非零）"""
    while True:
        coefficients = [rng.randint(0, 2) for _ in vectors]
        if any(coefficients):
            return tuple(sum(c * v[k] for c, v in zip(coefficients, vectors)) for k in range(len(vectors[0])))


def _random_independent(rng: random.Random, vectors: Sequence[IntVector], ambient: int) -> IntVector:
    """与vectors的线性包无关的随机小整数向量"""
    r = rank(vectors, ambient) if vectors else 0
    while True:
        v = tuple(rng.randint(-2, 3) for _ in range(ambient))
        if any(v) and rank(list(vectors) + [v], ambient) == r + 1:
            return v


def _free_set(rng: random.Random, size: int, ambient: int) -> List[IntVector]:
    """坐标和为正的线性无关向量，保证后续所有生成元落在同一个开半空间中"""
    vectors = []
    while len(vectors) < size:
        v = tuple(rng.randint(0, 4) for _ in range(ambient))
        if any(v) and rank(vectors + [v], ambient) == len(vectors) + 1:
            vectors.append(v)
    return vectors


def _extension(rng: random.Random, current: Sequence[IntVector], ambient: int) -> List[IntVector]:
    """把维数加一的新部分B：{w+v, w-v} 或 {w, v}，w ∈ N C，v与C的线性包无关"""
    w = primitive(_random_point(rng, current))[0]
    v = _random_independent(rng, current, ambient)
    if rng.random() < 0.5 and sum(w) > abs(sum(v)):
        return [tuple(x + y for x, y in zip(w, v)), tuple(x - y for x, y in zip(w, v))]
    if sum(v) <= 0:
        k = (-sum(v)) // sum(w) + 1
        v = tuple(y + k * x for x, y in zip(w, v))
    return [w, v]


def _absorption(rng: random.Random, current: Sequence[IntVector], ambient: int) -> List[IntVector]:
    """不增加维数的新部分B = {k·w}；一维时取随机正整数"""
    if ambient == 1:
        return [(rng.randint(2, 20),)]
    w = primitive(_random_point(rng, current))[0]
    return [tuple(rng.randint(1, 3) * x for x in w)]


def _merge(current: GeneratorSet, part: List[IntVector], mode: Mode) -> GeneratorSet:
    B = GeneratorSet(tuple(part))
    if mode == Mode.GLUING:
        return ci_witness(current, B, scan_limit=GENERATION_SCAN_LIMIT).generators
    return current.concat(B)


def _grow(rng: random.Random, ambient: int, target_dim: int, steps: int, mode: Mode) -> GeneratorSet:
    """从随机自由集合出发，做若干次加维和不加维的合并，得到维数为target_dim的实例"""
    start = max(rng.randint(1, target_dim), target_dim - steps)
    extensions = target_dim - start
    kinds = ["extend"] * extensions + ["absorb"] * (steps - extensions)
    rng.shuffle(kinds)
    current = GeneratorSet(tuple(_free_set(rng, start, ambient)))
    for kind in kinds:
        part = _extension(rng, current.vectors, ambient) if kind == "extend" else _absorption(rng, current.vectors, ambient)
        current = _merge(current, part, mode)
    return current


def _attempts(seed: int):
    limit = Config().generation_retries
    for attempt in range(limit):
        yield attempt, random.Random(f"{seed}:{attempt}")


def random_ci_instance(seed: int, target_dim: int, steps: int, mode: Union[Mode, str] = Mode.GLUING, max_gens: Optional[int] = None) -> GeneratorSet:
    """确定性地（按种子）生成一个完全交（gluing模式）或完全交锥（s-gluing模式）实例

    Args:
        seed: 随机种子，相同种子得到相同实例
        target_dim: 锥的维数，也是环境维数
        steps: 合并的次数（steps=0时得到自由集合）
        mode: gluing 或 s-gluing

    Raises:
        GenerationFailed: 重试上限内没有得到通过复核的实例
    """
    mode = Mode(mode)
    if target_dim < 1 or steps < 0:
        raise BadDimension(f"维数至少为1且步数非负: dim={target_dim}, steps={steps}")

    start_time = time.time()
    for attempt, rng in _attempts(seed):
        try:
            candidate = _grow(rng, target_dim, target_dim, steps, mode)
            decide = is_complete_intersection if mode == Mode.GLUING else is_ci_cone
            if decide(candidate, max_gens=max_gens)[0]:
                logger.info(f"种子{seed}第{attempt + 1}次尝试生成{candidate.m}个生成元，耗时: {time.time() - start_time:.2f}秒")
                return GeneratorSet(candidate.vectors, name=f"random-{mode.value}-{seed}")
            logger.warning(f"种子{seed}第{attempt + 1}次尝试的实例没有通过复核")
        except ToricToolkitError as e:
            logger.debug(f"种子{seed}第{attempt + 1}次尝试失败: {e}")
    raise GenerationFailed(f"种子{seed}在{Config().generation_retries}次尝试内没有生成合格实例")


def random_ci_pair(seed: int, target_dim: int) -> Tuple[GeneratorSet, GeneratorSet]:
    """随机的一对完全交生成元集合，格交为秩1且生成元同时在两个锥中（ci_witness 的输入）"""
    if target_dim < 1:
        raise BadDimension(f"维数至少为1: {target_dim}")
    for _, rng in _attempts(seed):
        try:
            extend = target_dim > 1 and rng.random() < 0.6
            inner_dim = target_dim - 1 if extend else target_dim
            current = _grow(rng, target_dim, inner_dim, rng.randint(0, 2), Mode.GLUING)
            part = _extension(rng, current.vectors, target_dim) if extend else _absorption(rng, current.vectors, target_dim)
            other = GeneratorSet(tuple(part))
            A1, A2 = (other, current) if rng.random() < 0.5 else (current, other)
            # 在较小的扫描上限内能取到互素的μ、τ才返回
            ci_witness(A1, A2, scan_limit=GENERATION_SCAN_LIMIT)
            return A1, A2
        except ToricToolkitError as e:
            logger.debug(f"种子{seed}生成实例对失败: {e}")
    raise GenerationFailed(f"种子{seed}没有生成合格的实例对")


def _unimodular(rng: random.Random, n: int) -> List[List[int]]:
    """若干次初等行变换得到的随机幺模矩阵"""
    U = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for _ in range(n):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i == j:
            continue
        k = rng.choice((-1, 1))
        U[i] = [x + k * y for x, y in zip(U[i], U[j])]
    return U


def _transform(vectors: Sequence[Sequence[int]], U: List[List[int]]) -> Tuple[IntVector, ...]:
    n = len(U)
    return tuple(tuple(sum(v[i] * U[i][k] for i in range(n)) for k in range(n)) for v in vectors)


def _side(rng: random.Random, a: List[int], directions: List[List[int]], a_is_ray: bool) -> List[List[int]]:
    """以a为公共方向的一侧锥的生成元

    a_is_ray为真时a是单纯形的一个顶点方向；否则a是 a±u 的中点，落在锥的相对内部。
    """
    def combine(coefficients):
        return [x + sum(c * u[k] for c, u in zip(coefficients, directions)) for k, x in enumerate(a)]

    if a_is_ray:
        vectors = [list(a)] + [combine([1 if j == i else 0 for j in range(len(directions))]) for i in range(len(directions))]
        for _ in range(rng.randint(0, 2)):
            coefficients = [rng.randint(0, 2) for _ in directions]
            if sum(coefficients) > 1:
                vectors.append(combine(coefficients))
    else:
        vectors = []
        for i in range(len(directions)):
            unit = [1 if j == i else 0 for j in range(len(directions))]
            vectors += [combine(unit), combine([-x for x in unit])]
        for _ in range(rng.randint(0, 2)):
            coefficients = [rng.randint(-1, 1) for _ in directions]
            if any(coefficients):
                vectors.append(combine(coefficients))
    return [[rng.randint(1, 3) * x for x in v] for v in vectors]


def random_direct_sum_pair(seed: int, ambient: int, kind: str) -> Tuple[GeneratorSet, GeneratorSet]:
    """随机构造一对直和存在且类型给定的锥

    Args:
        seed: 随机种子
        ambient: 环境维数（内部型至少为3，外部型至少为2）
        kind: internal、shared-ray 或 absorbed-ray
    """
    if kind not in DIRECT_SUM_KINDS:
        raise ValueError(f"未知的直和类型: {kind}")
    if ambient < (3 if kind == "internal" else 2):
        raise BadDimension(f"{kind} 型直和需要更大的环境维数: {ambient}")

    rng = random.Random(f"{seed}:{kind}:{ambient}")
    # 两侧的维数 n1 + n2 - 1 ≤ ambient；内部型要求两侧维数都至少为2
    low = 2 if kind == "internal" else 1
    n1 = rng.randint(2 if kind == "absorbed-ray" else low, ambient - low + 1)
    n2 = rng.randint(low, ambient - n1 + 1)
    a = [0] * ambient
    a[ambient - 1] = 1
    units = [[1 if j == i else 0 for j in range(ambient)] for i in range(ambient - 1)]
    rng.shuffle(units)
    first_dirs, second_dirs = units[:n1 - 1], units[n1 - 1:n1 + n2 - 2]

    if kind == "internal":
        first, second = _side(rng, a, first_dirs, False), _side(rng, a, second_dirs, False)
    elif kind == "shared-ray":
        first, second = _side(rng, a, first_dirs, True), _side(rng, a, second_dirs, True)
    else:
        # n1 ≥ 2，a在第一个锥的相对内部，在第二个锥中是极射线
        first, second = _side(rng, a, first_dirs, False), _side(rng, a, second_dirs, True)
    if rng.random() < 0.5:
        first, second = second, first

    U = _unimodular(rng, ambient)
    return GeneratorSet(_transform(first, U)), GeneratorSet(_transform(second, U))
