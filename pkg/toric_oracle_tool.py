"""
toric理想 I_A 的独立验证器

流程：整数核的基 → 格基理想的二项式 → 逐变量饱和得到 I_A → 约化Gröbner基 → 贪心去掉冗余生成元得到最小生成元个数μ。
判定准则：I_A 是完全交当且仅当 μ(I_A) = height(I_A) = m - rank(A)。

只处理系数为±1的纯差二项式 x^α - x^β：S多项式与约化都把纯差二项式变成纯差二项式，单项式对二项式的约化仍是单项式，
因此不需要一般的多项式运算。特征为0。
"""
import heapq
import time
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

from ci_errors import BudgetExceeded
from cone_tool import positive_functional
from generator_set import GeneratorLike, GeneratorSet, as_generator_set
from linalg_utils import IntVector, LatticeBasis, dot, kernel_lattice
from logging_config import setup_logger
from toolkit_config import Config

logger = setup_logger(logger_name="ToricOracleTool")

Monomial = Tuple[int, ...]


@dataclass(frozen=True)
class Binomial:
    """x^{uplus} - x^{uminus}"""
    uplus: Monomial
    uminus: Monomial

    def degree(self, weights: Sequence[int]) -> int:
        return dot(weights, self.uplus)

    def as_vector(self) -> IntVector:
        return tuple(p - q for p, q in zip(self.uplus, self.uminus))


@dataclass(frozen=True)
class TermOrder:
    """加权分次反字典序

    权重为正，cheapest指定的变量在反字典序比较中最先被看（它是“最便宜”的变量），默认是最后一个变量。
    """
    weights: Tuple[int, ...]
    cheapest: Optional[int] = None

    def __post_init__(self):
        if any(w <= 0 for w in self.weights):
            raise ValueError(f"项序的权重必须为正: {self.weights}")

    def key(self, alpha: Monomial) -> tuple:
        m = len(self.weights)
        last = m - 1 if self.cheapest is None else self.cheapest
        order = [last] + [j for j in reversed(range(m)) if j != last]
        return (dot(self.weights, alpha), tuple(-alpha[j] for j in order))


class Budget:
    """Gröbner计算的步数预算，超出时抛出 BudgetExceeded"""

    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def spend(self, steps: int = 1) -> None:
        self.used += steps
        if self.used > self.limit:
            raise BudgetExceeded(f"Gröbner计算超出预算{self.limit}步，实例对验证器来说过大")


@dataclass(frozen=True)
class OracleReport:
    markov: Tuple[Binomial, ...]
    minimal: Tuple[Binomial, ...]
    mu: int
    height: int
    is_ci: bool


def _divides(alpha: Monomial, beta: Monomial) -> bool:
    return all(a <= b for a, b in zip(alpha, beta))


def _lcm(alpha: Monomial, beta: Monomial) -> Monomial:
    return tuple(max(a, b) for a, b in zip(alpha, beta))


def _oriented(alpha: Monomial, beta: Monomial, order: TermOrder) -> Optional[Binomial]:
    """首项在前的二项式；两项相同（零多项式）时返回None"""
    if alpha == beta:
        return None
    if order.key(alpha) > order.key(beta):
        return Binomial(alpha, beta)
    return Binomial(beta, alpha)


def normal_form(alpha: Monomial, basis: Sequence[Binomial], budget: Optional[Budget] = None) -> Monomial:
    """单项式x^α对首项在前的二项式组的正规形式（重复用 x^lead → x^trail 替换）"""
    current = alpha
    while True:
        for g in basis:
            if _divides(g.uplus, current):
                current = tuple(c - p + q for c, p, q in zip(current, g.uplus, g.uminus))
                if budget is not None:
                    budget.spend()
                break
        else:
            return current


def lattice_to_binomials(B: LatticeBasis) -> List[Binomial]:
    """格基的每一行b对应二项式 x^{b+} - x^{b-}"""
    binomials = []
    for b in B.basis:
        if not any(b):
            continue
        binomials.append(Binomial(tuple(max(x, 0) for x in b), tuple(max(-x, 0) for x in b)))
    return binomials


def _s_binomial(f: Binomial, g: Binomial) -> Tuple[Monomial, Monomial]:
    L = _lcm(f.uplus, g.uplus)
    return (tuple(l - p + q for l, p, q in zip(L, f.uplus, f.uminus)), tuple(l - p + q for l, p, q in zip(L, g.uplus, g.uminus)))


def _reduce(f: Binomial, basis: Sequence[Binomial], order: TermOrder, budget: Budget) -> Optional[Binomial]:
    return _oriented(normal_form(f.uplus, basis, budget), normal_form(f.uminus, basis, budget), order)


def buchberger(gens: Iterable[Binomial], order: TermOrder, budget: Optional[Budget] = None) -> List[Binomial]:
    """二项式理想的约化Gröbner基

    按S对首项最小公倍数的项序从小到大处理（正规选择策略），首项互素的对直接跳过。

    Args:
        gens: 二项式生成元
        order: 项序
        budget: 步数预算，默认取配置中的 oracle_budget

    Returns:
        List[Binomial]: 约化Gröbner基（首项在前，按首项的项序排列）

    Raises:
        BudgetExceeded: 计算超出预算
    """
    budget = budget if budget is not None else Budget(Config().oracle_budget)
    basis: List[Binomial] = []
    for f in gens:
        g = _oriented(f.uplus, f.uminus, order)
        if g is not None and g not in basis:
            basis.append(g)

    pairs = []

    def push_pairs(j: int) -> None:
        for i in range(j):
            L = _lcm(basis[i].uplus, basis[j].uplus)
            heapq.heappush(pairs, (order.key(L), i, j))

    for j in range(len(basis)):
        push_pairs(j)

    while pairs:
        _, i, j = heapq.heappop(pairs)
        budget.spend()
        f, g = basis[i], basis[j]
        if all(a == 0 or b == 0 for a, b in zip(f.uplus, g.uplus)):
            continue
        alpha, beta = _s_binomial(f, g)
        s = _oriented(alpha, beta, order)
        if s is None:
            continue
        h = _reduce(s, basis, order, budget)
        if h is None:
            continue
        basis.append(h)
        push_pairs(len(basis) - 1)

    # 极小化：去掉首项被其他首项整除的元素
    minimal = []
    for idx, g in enumerate(basis):
        redundant = any(_divides(h.uplus, g.uplus) and (h.uplus != g.uplus or k < idx) for k, h in enumerate(basis) if k != idx)
        if not redundant:
            minimal.append(g)

    # 约化：尾项化为正规形式（首项彼此不整除，保持不变）
    reduced = []
    for g in minimal:
        trail = normal_form(g.uminus, minimal, budget)
        reduced.append(Binomial(g.uplus, trail))
    return sorted(reduced, key=lambda b: (order.key(b.uplus), order.key(b.uminus)))


def saturate(gens: Sequence[Binomial], weights: Sequence[int], budget: Optional[Budget] = None) -> List[Binomial]:
    """格基理想对 x_1⋯x_m 的饱和

    对每个变量x_i，在x_i最便宜的加权反字典序下求Gröbner基，再把每个元素除以能整除它的x_i的最高次幂；
    理想关于这组权重是齐次的，所以得到的是 I : x_i^∞ 的Gröbner基。依次对所有变量做一遍即得到 I : (x_1⋯x_m)^∞。
    """
    current = list(gens)
    if not current:
        return []
    budget = budget if budget is not None else Budget(Config().oracle_budget)
    weights = tuple(weights)
    for i in range(len(weights)):
        order = TermOrder(weights, cheapest=i)
        basis = buchberger(current, order, budget)
        current = []
        for g in basis:
            power = min(g.uplus[i], g.uminus[i])
            if power:
                g = Binomial(tuple(x - power if k == i else x for k, x in enumerate(g.uplus)),
                             tuple(x - power if k == i else x for k, x in enumerate(g.uminus)))
            current.append(g)
    return current


def in_ideal(f: Binomial, gens: Sequence[Binomial], order: TermOrder, budget: Optional[Budget] = None) -> bool:
    """二项式f是否属于gens生成的理想"""
    if not gens:
        return f.uplus == f.uminus
    basis = buchberger(gens, order, budget)
    return normal_form(f.uplus, basis, budget) == normal_form(f.uminus, basis, budget)


def minimal_generator_count(gens: Sequence[Binomial], A: GeneratorLike, budget: Optional[Budget] = None) -> Tuple[int, List[Binomial]]:
    """I_A 的最小生成元个数μ

    按A-次数从高到低（同次数按字典序）逐个检查，属于其余元素生成的理想的就去掉。
    对于尖锥给出的正分次，齐次生成元组的不可约子组大小都相同，所以结果与去除顺序无关。

    Returns:
        Tuple[int, List[Binomial]]: (μ, 保留下来的极小生成元组)
    """
    A = as_generator_set(A)
    c = positive_functional(A)
    weights = tuple(dot(c, a) for a in A.vectors)
    order = TermOrder(weights)
    budget = budget if budget is not None else Budget(Config().oracle_budget)

    current = sorted(set(gens), key=lambda g: (-g.degree(weights), g.uplus, g.uminus))
    kept = list(current)
    for g in current:
        rest = [h for h in kept if h != g]
        if in_ideal(g, rest, order, budget):
            kept = rest
    kept.sort(key=lambda g: (g.degree(weights), g.uplus, g.uminus))
    return len(kept), kept


class ToricOracle:
    """用toric理想的最小生成元个数判定完全交，只适合小规模实例"""

    def __init__(self, budget: Optional[int] = None, max_gens: Optional[int] = None, max_entry: Optional[int] = None):
        """
        初始化验证器，未给出的参数从配置中读取
        Args:
            budget: Gröbner计算的总步数预算
            max_gens: 允许的最大生成元个数
            max_entry: 允许的最大坐标绝对值
        """
        config = Config()
        self.budget = budget if budget is not None else config.oracle_budget
        self.max_gens = max_gens if max_gens is not None else config.oracle_max_gens
        self.max_entry = max_entry if max_entry is not None else config.oracle_max_entry

    def _check_size(self, A: GeneratorSet) -> None:
        if A.m > self.max_gens:
            raise BudgetExceeded(f"生成元个数{A.m}超过验证器上限{self.max_gens}")
        largest = max(abs(x) for v in A.vectors for x in v)
        if largest > self.max_entry:
            raise BudgetExceeded(f"生成元坐标{largest}超过验证器上限{self.max_entry}")

    def check(self, A: GeneratorLike) -> OracleReport:
        """
        由格基理想逐变量饱和得到 I_A，计算μ并与高度比较
        Args:
            A: 生成元集合
        Returns:
            OracleReport: μ、高度与最小生成元
        Raises:
            NotPointed: 锥包含直线
            BudgetExceeded: 实例超出验证器的规模限制或预算
        """
        A = as_generator_set(A)
        c = positive_functional(A)
        self._check_size(A)

        start_time = time.time()
        K = kernel_lattice(A.vectors, A.n)
        height = K.rank
        if height == 0:
            return OracleReport(markov=(), minimal=(), mu=0, height=0, is_ci=True)

        weights = tuple(dot(c, a) for a in A.vectors)
        steps = Budget(self.budget)
        saturated = saturate(lattice_to_binomials(K), weights, steps)
        markov = buchberger(saturated, TermOrder(weights), steps)
        mu, minimal = minimal_generator_count(markov, A, steps)
        logger.info(f"验证器: m={A.m}, height={height}, μ={mu}, 用了{steps.used}步，耗时: {time.time() - start_time:.2f}秒")
        return OracleReport(markov=tuple(markov), minimal=tuple(minimal), mu=mu, height=height, is_ci=mu == height)


def is_ci_oracle(A: GeneratorLike, budget: Optional[int] = None) -> OracleReport:
    """ToricOracle(budget).check(A)，规模上限取配置"""
    return ToricOracle(budget=budget).check(A)
