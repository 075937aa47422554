"""
粘合（gluing）与s-粘合（s-gluing）工具

对生成元下标的一个划分 (E1, E2) 判定是否为粘合/s-粘合，并在此基础上递归判定：
  - 半群 N A 是否为完全交（每一步都是粘合，叶子是线性无关的自由子集）
  - 锥 pos_Q(A) 是否为完全交锥（每一步都是s-粘合）
两个判定都返回分解树作为证书，分解树还可以展开成划分链做射线计数。
"""
import itertools
import math
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple, Union

from ci_errors import BadPartition, MalformedTree, TooManyGenerators
from cone_tool import SumType, classify_direct_sum, cone_dim, extreme_rays, positive_functional
from generator_set import GeneratorLike, GeneratorSet, as_generator_set
from linalg_utils import IntMatrix, IntVector, lattice_intersection, rank, row_lattice
from logging_config import setup_logger
from semigroup_tool import MembershipCertificate, exists_positive_multiple, membership, smallest_multiple
from toolkit_config import Config

logger = setup_logger(logger_name="GluingTool")

IndexSet = Tuple[int, ...]


class Mode(str, Enum):
    """分解方式"""
    GLUING = "gluing"
    S_GLUING = "s-gluing"


@dataclass(frozen=True)
class GluingCertificate:
    """粘合证书：Z a = Z A^{E1} ∩ Z A^{E2}，且a同时属于 N A^{E1} 与 N A^{E2}

    cert1/cert2 的系数按E1/E2中下标的升序排列。
    """
    E1: IndexSet
    E2: IndexSet
    a: IntVector
    cert1: MembershipCertificate
    cert2: MembershipCertificate
    lattice_basis: IntMatrix

    @property
    def t(self) -> int:
        return 1

    @property
    def kind(self) -> Mode:
        return Mode.GLUING


@dataclass(frozen=True)
class SGluingCertificate:
    """s-粘合证书：Z a = Z A^{E1} ∩ Z A^{E2}，且 t·a 同时属于两边的半群"""
    E1: IndexSet
    E2: IndexSet
    a: IntVector
    t: int
    cert1: MembershipCertificate
    cert2: MembershipCertificate
    lattice_basis: IntMatrix

    @property
    def kind(self) -> Mode:
        return Mode.S_GLUING


Certificate = Union[GluingCertificate, SGluingCertificate]


@dataclass(frozen=True)
class Leaf:
    """线性无关的自由子集"""
    indices: IndexSet

    @property
    def all_indices(self) -> IndexSet:
        return self.indices

    def leaves(self) -> List["Leaf"]:
        return [self]

    def nodes(self) -> List["Node"]:
        return []


@dataclass(frozen=True)
class Node:
    left: "DecompositionTree"
    right: "DecompositionTree"
    cert: Certificate
    sum_type: SumType

    @property
    def all_indices(self) -> IndexSet:
        return tuple(sorted(self.left.all_indices + self.right.all_indices))

    def leaves(self) -> List[Leaf]:
        return self.left.leaves() + self.right.leaves()

    def nodes(self) -> List["Node"]:
        """先序遍历的所有内部节点"""
        return [self] + self.left.nodes() + self.right.nodes()


DecompositionTree = Union[Leaf, Node]


@dataclass(frozen=True)
class PartitionChain:
    """分解树展开得到的划分链 J_1 > J_2 > ... > J_L

    J_1 是整个下标集合，每一步恰好拆开一个部分，D(J) = Σ (部分锥的极射线数 − 部分锥的维数)。
    """
    chain: Tuple[Tuple[IndexSet, ...], ...]
    d_values: Tuple[int, ...]
    merge_types: Tuple[SumType, ...]
    internal_merges: int
    external_merges: int
    wide_leaves: int = field(default=0)


def _check_partition(A: GeneratorSet, E1: Sequence[int], E2: Sequence[int], scope: Optional[Sequence[int]] = None) -> Tuple[IndexSet, IndexSet]:
    E1 = tuple(sorted(set(int(i) for i in E1)))
    E2 = tuple(sorted(set(int(i) for i in E2)))
    if not E1 or not E2:
        raise BadPartition("划分的两部分都必须非空")
    if set(E1) & set(E2):
        raise BadPartition(f"划分的两部分相交: {sorted(set(E1) & set(E2))}")
    expected = set(range(A.m)) if scope is None else set(scope)
    if set(E1) | set(E2) != expected:
        raise BadPartition(f"划分 {list(E1)} | {list(E2)} 没有恰好覆盖全部下标")
    return E1, E2


def shared_line(A: GeneratorSet, E1: IndexSet, E2: IndexSet) -> Optional[Tuple[IntVector, IntMatrix]]:
    """Z A^{E1} ∩ Z A^{E2}；秩不为1时返回None，否则返回 (HNF生成元, 交格的基)"""
    L1 = row_lattice([A[i] for i in E1], A.n)
    L2 = row_lattice([A[i] for i in E2], A.n)
    L = lattice_intersection(L1, L2)
    if L.rank != 1:
        return None
    return L.basis[0], L.basis


def _gluing_on(A: GeneratorSet, E1: IndexSet, E2: IndexSet) -> Optional[GluingCertificate]:
    line = shared_line(A, E1, E2)
    if line is None:
        return None
    a, basis = line
    A1, A2 = A.subset(E1), A.subset(E2)
    for candidate in (a, tuple(-x for x in a)):
        cert1 = membership(candidate, A1)
        if cert1 is None:
            continue
        cert2 = membership(candidate, A2)
        if cert2 is None:
            continue
        return GluingCertificate(E1=E1, E2=E2, a=candidate, cert1=cert1, cert2=cert2, lattice_basis=basis)
    return None


def _s_gluing_on(A: GeneratorSet, E1: IndexSet, E2: IndexSet) -> Optional[SGluingCertificate]:
    line = shared_line(A, E1, E2)
    if line is None:
        return None
    a, basis = line
    A1, A2 = A.subset(E1), A.subset(E2)
    for candidate in (a, tuple(-x for x in a)):
        if not exists_positive_multiple(candidate, A1) or not exists_positive_multiple(candidate, A2):
            continue
        t1 = smallest_multiple(candidate, A1)
        t2 = smallest_multiple(candidate, A2)
        # t1与t2的最小公倍数对两边都可行，从两者较大者开始找最小的公共可行倍数
        for t in range(max(t1, t2), math.lcm(t1, t2) + 1):
            scaled = tuple(t * x for x in candidate)
            cert1 = membership(scaled, A1)
            if cert1 is None:
                continue
            cert2 = membership(scaled, A2)
            if cert2 is None:
                continue
            return SGluingCertificate(E1=E1, E2=E2, a=candidate, t=t, cert1=cert1, cert2=cert2, lattice_basis=basis)
    return None


def _check_on(A: GeneratorSet, E1: IndexSet, E2: IndexSet, mode: Mode) -> Optional[Certificate]:
    if mode == Mode.GLUING:
        return _gluing_on(A, E1, E2)
    return _s_gluing_on(A, E1, E2)


def check_gluing(A: GeneratorLike, E1: Sequence[int], E2: Sequence[int]) -> Optional[GluingCertificate]:
    """判断 N A 是否为 N A^{E1} 与 N A^{E2} 的粘合

    Args:
        A: 生成元集合
        E1: 第一部分的下标
        E2: 第二部分的下标，与E1一起恰好覆盖 0..m-1

    Returns:
        Optional[GluingCertificate]: 粘合证书；交格的秩不为1或a（及−a）不同时属于两边时返回None

    Raises:
        BadPartition: 划分不合法
        NotPointed: 锥包含直线
    """
    A = as_generator_set(A)
    E1, E2 = _check_partition(A, E1, E2)
    positive_functional(A)
    return _gluing_on(A, E1, E2)


def check_s_gluing(A: GeneratorLike, E1: Sequence[int], E2: Sequence[int]) -> Optional[SGluingCertificate]:
    """判断 N A 是否为 N A^{E1} 与 N A^{E2} 的s-粘合，证书中的t是两边都可行的最小倍数"""
    A = as_generator_set(A)
    E1, E2 = _check_partition(A, E1, E2)
    positive_functional(A)
    return _s_gluing_on(A, E1, E2)


def _partitions(indices: IndexSet):
    """无序二划分的确定性枚举：E1包含最小下标，按E1大小递增、同样大小按字典序"""
    first, rest = indices[0], indices[1:]
    for size in range(len(rest)):
        for combo in itertools.combinations(rest, size):
            E1 = (first,) + combo
            E2 = tuple(i for i in rest if i not in combo)
            yield E1, E2


def decompose(A: GeneratorLike, indices: Optional[Sequence[int]] = None, mode: Mode = Mode.GLUING, use_memo: bool = True) -> Optional[DecompositionTree]:
    """在下标子集上递归搜索分解树

    自由（线性无关）子集直接作为叶子；否则按确定顺序枚举二划分，第一个通过检查且两边都可分解的划分成为节点。
    备忘录以下标位掩码为键，子集的结论与枚举顺序无关。

    Args:
        A: 生成元集合（锥必须强凸，调用方负责检查）
        indices: 下标子集，默认全部
        mode: 粘合或s-粘合
        use_memo: 为False时不使用备忘录（用于交叉验证）

    Returns:
        Optional[DecompositionTree]: 分解树，不存在时返回None
    """
    A = as_generator_set(A)
    mode = Mode(mode)
    root = tuple(sorted(range(A.m) if indices is None else set(indices)))
    memo: Dict[int, Optional[DecompositionTree]] = {}

    def solve(subset: IndexSet) -> Optional[DecompositionTree]:
        key = sum(1 << i for i in subset)
        if use_memo and key in memo:
            return memo[key]
        result = None
        if rank([A[i] for i in subset], A.n) == len(subset):
            result = Leaf(subset)
        else:
            for E1, E2 in _partitions(subset):
                cert = _check_on(A, E1, E2, mode)
                if cert is None:
                    continue
                logger.debug(f"{mode.value}: {list(E1)} | {list(E2)} 沿 a={list(cert.a)} 成立")
                left = solve(E1)
                if left is None:
                    continue
                right = solve(E2)
                if right is None:
                    continue
                sum_type, _ = classify_direct_sum(A.subset(E1), A.subset(E2), cert.a)
                result = Node(left=left, right=right, cert=cert, sum_type=sum_type)
                break
        if use_memo:
            memo[key] = result
        return result

    return solve(root)


def _decide(A: GeneratorLike, mode: Mode, max_gens: Optional[int]) -> Tuple[bool, Optional[DecompositionTree]]:
    A = as_generator_set(A)
    limit = max_gens if max_gens is not None else Config().max_gens
    if A.m > limit:
        raise TooManyGenerators(f"生成元个数{A.m}超过上限{limit}")
    positive_functional(A)

    start_time = time.time()
    tree = decompose(A, mode=mode)
    logger.info(f"{mode.value} 判定{'成立' if tree else '不成立'}（m={A.m}），耗时: {time.time() - start_time:.2f}秒")
    return tree is not None, tree


def is_complete_intersection(A: GeneratorLike, max_gens: Optional[int] = None) -> Tuple[bool, Optional[DecompositionTree]]:
    """N A 是否为完全交：能否通过逐次粘合从自由半群得到

    Raises:
        NotPointed: 锥包含直线
        TooManyGenerators: 生成元个数超过上限
    """
    return _decide(A, Mode.GLUING, max_gens)


def is_ci_cone(A: GeneratorLike, max_gens: Optional[int] = None) -> Tuple[bool, Optional[DecompositionTree]]:
    """pos_Q(A) 是否为完全交锥：能否通过逐次s-粘合从自由半群得到"""
    return _decide(A, Mode.S_GLUING, max_gens)


def check_tree_shape(tree: DecompositionTree, A: GeneratorSet) -> None:
    covered = sorted(i for leaf in tree.leaves() for i in leaf.indices)
    if covered != list(range(A.m)):
        raise MalformedTree(f"叶子的下标 {covered} 不是 0..{A.m - 1} 的划分")
    for leaf in tree.leaves():
        if rank([A[i] for i in leaf.indices], A.n) != len(leaf.indices):
            raise MalformedTree(f"叶子 {list(leaf.indices)} 不是线性无关的")
    for node in tree.nodes():
        if node.cert.E1 != node.left.all_indices or node.cert.E2 != node.right.all_indices:
            raise MalformedTree(f"节点证书的划分 {list(node.cert.E1)} | {list(node.cert.E2)} 与子树不一致")


def _defect(A: GeneratorSet, part: IndexSet) -> int:
    sub = A.subset(part)
    return len(extreme_rays(sub)) - cone_dim(sub)


def chain_of_partitions(tree: DecompositionTree, A: GeneratorLike) -> PartitionChain:
    """把分解树按先序展开成划分链，并核对射线计数

    核对内容：D(J_1) = k − n，D(J_L) = 0，内部型的拆分使D变化1、外部型不变，
    内部型个数a与外部型个数b满足 a + b = m − n 以及 a ≤ max(t − 1, 0)，t为跨越多条射线的叶子个数。

    Raises:
        MalformedTree: 分解树与生成元不匹配，或计数不成立
    """
    A = as_generator_set(A)
    check_tree_shape(tree, A)

    parts = [tuple(range(A.m))]
    chain = [tuple(parts)]
    merge_types = []
    for node in tree.nodes():
        whole = node.all_indices
        position = parts.index(whole)
        parts = parts[:position] + [node.cert.E1, node.cert.E2] + parts[position + 1:]
        chain.append(tuple(sorted(parts)))
        merge_types.append(node.sum_type)

    d_values = tuple(sum(_defect(A, part) for part in partition) for partition in chain)
    k = len(extreme_rays(A))
    n = cone_dim(A)
    if d_values[0] != k - n:
        raise MalformedTree(f"D(J_1)={d_values[0]}，应为 k-n={k - n}")
    if d_values[-1] != 0:
        raise MalformedTree(f"最细划分的D={d_values[-1]}，应为0")
    for i, sum_type in enumerate(merge_types):
        expected = 1 if sum_type == SumType.INTERNAL else 0
        if d_values[i] - d_values[i + 1] != expected:
            raise MalformedTree(f"第{i + 1}次拆分为{sum_type.value}型，D从{d_values[i]}变为{d_values[i + 1]}")

    internal = sum(1 for s in merge_types if s == SumType.INTERNAL)
    external = len(merge_types) - internal
    wide = sum(1 for leaf in tree.leaves() if len(leaf.indices) > 1)
    if internal + external != A.m - n:
        raise MalformedTree(f"拆分次数{internal + external}不等于 m-n={A.m - n}")
    if internal > max(wide - 1, 0):
        raise MalformedTree(f"内部型拆分{internal}次，超过 max(t-1, 0)={max(wide - 1, 0)}")

    return PartitionChain(chain=tuple(chain),
                          d_values=d_values,
                          merge_types=tuple(merge_types),
                          internal_merges=internal,
                          external_merges=external,
                          wide_leaves=wide)
