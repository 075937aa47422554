"""
实例文件与报告工具

实例文件有两种格式：
  - 文本：每行一个生成元，空白分隔的十进制整数，# 之后是注释，空行忽略
  - JSON：{"name": <可选字符串>, "generators": [[int, ...], ...]}
报告统一序列化为规范JSON：键排序，没有浮点数，超过53位安全范围的整数写成十进制字符串，有理数写成 "p/q"。
"""
import json
import sys
import time
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, TextIO, Union

from pydantic import BaseModel, ConfigDict, Field, StrictInt, StrictStr, ValidationError

from ci_errors import BudgetExceeded, EmptyInput, ParseError, RaggedRows, ZeroRow
from cone_tool import cone_dim, extreme_rays, face_functional, is_strongly_convex
from directsum_tool import BoundReport, DirectSumResult, RayLeaf, RayTree, WitnessResult, check_ray_bound, is_general_bipyramidal
from generator_set import GeneratorSet
from gluing_tool import DecompositionTree, Leaf, PartitionChain, chain_of_partitions, is_ci_cone, is_complete_intersection
from logging_config import setup_logger
from toric_oracle_tool import Binomial, OracleReport, is_ci_oracle

logger = setup_logger(logger_name="InstanceUtils")

SAFE_INTEGER = 2**53 - 1


class InstanceFile(BaseModel):
    """实例文件的内容"""
    model_config = ConfigDict(extra="forbid")

    name: Optional[StrictStr] = None
    generators: List[List[StrictInt]]


class AnalysisReport(BaseModel):
    """analyze 命令的报告；timings不进入规范JSON"""
    name: Optional[str] = None
    m: int
    n: int
    dim: int
    pointed: bool
    lineality_witness: Optional[List[int]] = None
    positive_functional: Optional[List[int]] = None
    extreme_rays: Optional[List[List[int]]] = None
    ray_functionals: Optional[List[List[int]]] = None
    is_ci: Optional[bool] = None
    ci_tree: Optional[Dict[str, Any]] = None
    ci_chain: Optional[Dict[str, Any]] = None
    is_ci_cone: Optional[bool] = None
    ci_cone_tree: Optional[Dict[str, Any]] = None
    ci_cone_chain: Optional[Dict[str, Any]] = None
    bipyramidal: Optional[bool] = None
    bound: Optional[Dict[str, Any]] = None
    oracle: Optional[Dict[str, Any]] = None
    timings: Dict[str, float] = Field(default_factory=dict)

    def canonical(self) -> Dict[str, Any]:
        return to_canonical(self.model_dump(exclude={"timings"}))


class CorpusRow(BaseModel):
    """corpus 命令中每个实例的一行汇总"""
    name: str
    m: Optional[int] = None
    n: Optional[int] = None
    dim: Optional[int] = None
    pointed: Optional[bool] = None
    rays: Optional[int] = None
    is_ci: Optional[bool] = None
    is_ci_cone: Optional[bool] = None
    bipyramidal: Optional[bool] = None
    oracle_is_ci: Optional[bool] = None
    error: Optional[str] = None


def _check_rows(rows: List[List[int]], line_numbers: Optional[List[int]] = None) -> None:
    if not rows:
        raise EmptyInput("实例中没有任何生成元")
    width = len(rows[0])
    for i, row in enumerate(rows):
        where = f"第{line_numbers[i]}行" if line_numbers else f"第{i}个生成元"
        if len(row) != width:
            raise RaggedRows(f"{where}有{len(row)}个整数，第一行有{width}个")
        if not any(row):
            raise ZeroRow(f"{where}是零向量")


def _parse_text(text: str) -> InstanceFile:
    rows = []
    line_numbers = []
    name = None
    for line_no, raw in enumerate(text.splitlines(), start=1):
        content, _, comment = raw.partition("#")
        if name is None and not rows and comment.strip() and not content.strip():
            # 第一个生成元之前的第一条注释作为实例名
            name = comment.strip()
        if not content.strip():
            continue
        row = []
        position = 0
        for token in content.split():
            position = raw.index(token, position)
            try:
                row.append(int(token))
            except ValueError:
                raise ParseError(f"无法解析整数 '{token}'", line_no, position + 1) from None
            position += len(token)
        rows.append(row)
        line_numbers.append(line_no)
    _check_rows(rows, line_numbers)
    return InstanceFile(name=name, generators=rows)


def _parse_json(text: str) -> InstanceFile:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"JSON格式错误: {e.msg}", e.lineno, e.colno) from None
    try:
        instance = InstanceFile.model_validate(data)
    except ValidationError as e:
        raise ParseError(f"实例JSON不符合格式: {e.errors()[0]['msg']} ({e.errors()[0]['loc']})") from None
    _check_rows(instance.generators)
    return instance


def parse_text(text: str) -> InstanceFile:
    """解析实例文本，第一个非空白字符是 { 时按JSON解析"""
    if text.lstrip().startswith("{"):
        return _parse_json(text)
    return _parse_text(text)


def parse_instance(source: Union[str, Path, TextIO]) -> InstanceFile:
    """读取实例文件

    Args:
        source: 文件路径，"-"表示标准输入，也可以是已打开的文本流

    Returns:
        InstanceFile: 校验过的实例（保留重复行和行的顺序）；没有名字时用文件名

    Raises:
        ParseError: 无法解析（带行号与列号）
        ZeroRow: 出现全零行
        RaggedRows: 各行长度不一致
        EmptyInput: 没有生成元
    """
    if hasattr(source, "read"):
        return parse_text(source.read())
    if str(source) == "-":
        return parse_text(sys.stdin.read())
    path = Path(source)
    instance = parse_text(path.read_text(encoding="utf-8"))
    if instance.name is None:
        instance = instance.model_copy(update={"name": path.stem})
    return instance


def to_generator_set(instance: InstanceFile) -> GeneratorSet:
    return GeneratorSet(tuple(tuple(row) for row in instance.generators), name=instance.name)


def format_instance_text(A: GeneratorSet) -> str:
    """文本格式的实例（可以直接作为 analyze 的输入）"""
    lines = [f"# {A.name}"] if A.name else []
    lines += [" ".join(str(x) for x in v) for v in A.vectors]
    return "\n".join(lines) + "\n"


def instance_dict(A: GeneratorSet) -> Dict[str, Any]:
    return {"name": A.name, "generators": [list(v) for v in A.vectors]}


def to_canonical(value: Any) -> Any:
    """转换为规范JSON可以表示的值"""
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, int):
        return value if abs(value) <= SAFE_INTEGER else str(value)
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return to_canonical(value.numerator)
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, dict):
        return {str(k): to_canonical(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_canonical(v) for v in value]
    raise TypeError(f"无法序列化的类型: {type(value).__name__}")


def canonical_json(value: Any) -> str:
    return json.dumps(to_canonical(value), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def tree_to_dict(tree: Optional[DecompositionTree]) -> Optional[Dict[str, Any]]:
    if tree is None:
        return None
    if isinstance(tree, Leaf):
        return {"leaf": list(tree.indices)}
    cert = tree.cert
    return {
        "kind": cert.kind.value,
        "E1": list(cert.E1),
        "E2": list(cert.E2),
        "a": list(cert.a),
        "t": cert.t,
        "cert1": list(cert.cert1),
        "cert2": list(cert.cert2),
        "sum_type": tree.sum_type.value,
        "left": tree_to_dict(tree.left),
        "right": tree_to_dict(tree.right),
    }


def ray_tree_to_dict(tree: Optional[RayTree]) -> Optional[Dict[str, Any]]:
    if tree is None:
        return None
    if isinstance(tree, RayLeaf):
        return {"rays": [list(r) for r in tree.rays]}
    return {"a": list(tree.a), "left": ray_tree_to_dict(tree.left), "right": ray_tree_to_dict(tree.right)}


def chain_to_dict(chain: PartitionChain) -> Dict[str, Any]:
    return {
        "chain": [[list(part) for part in partition] for partition in chain.chain],
        "d_values": list(chain.d_values),
        "merge_types": [t.value for t in chain.merge_types],
        "internal_merges": chain.internal_merges,
        "external_merges": chain.external_merges,
        "wide_leaves": chain.wide_leaves,
    }


def bound_to_dict(report: BoundReport) -> Dict[str, Any]:
    return {
        "n": report.n,
        "k": report.k,
        "bound_holds": report.bound_holds,
        "equality": report.equality,
        "bipyramidal": report.bipyramidal,
        "violations": list(report.violations),
    }


def binomial_to_dict(b: Binomial) -> Dict[str, Any]:
    return {"uplus": list(b.uplus), "uminus": list(b.uminus)}


def oracle_to_dict(report: OracleReport) -> Dict[str, Any]:
    return {
        "mu": report.mu,
        "height": report.height,
        "is_ci": report.is_ci,
        "markov": [binomial_to_dict(b) for b in report.markov],
        "minimal": [binomial_to_dict(b) for b in report.minimal],
    }


def direct_sum_to_dict(result: Optional[DirectSumResult]) -> Dict[str, Any]:
    if result is None:
        return {"exists": False}
    return {
        "exists": True,
        "a": list(result.a),
        "sum_type": result.sum_type.value,
        "external_case": result.external_case.value if result.external_case else None,
        "dim": result.dim,
        "summand_dims": list(result.summand_dims),
        "summand_rays": list(result.summand_rays),
        "predicted_rays": result.predicted_rays,
        "actual_rays": [list(r) for r in result.actual_rays],
        "generators": [list(v) for v in result.generators.vectors],
    }


def witness_to_dict(result: WitnessResult) -> Dict[str, Any]:
    return {
        "mu": result.mu,
        "tau": result.tau,
        "g": result.g,
        "a": list(result.a),
        "generators": [list(v) for v in result.generators.vectors],
        "tree": tree_to_dict(result.tree),
    }


def build_analysis_report(A: GeneratorSet, oracle: bool = False, max_gens: Optional[int] = None, budget: Optional[int] = None) -> AnalysisReport:
    """对一个实例做全部分析

    非尖锥只报告维数和σ∩(−σ)中的见证向量，其余判定都要求尖锥。
    """
    timings = {}
    start_time = time.time()
    pointed, witness = is_strongly_convex(A)
    report = AnalysisReport(name=A.name, m=A.m, n=A.n, dim=cone_dim(A), pointed=pointed)
    if not pointed:
        report.lineality_witness = list(witness)
        logger.warning(f"实例 {A.name} 的锥不是强凸的，跳过其余判定")
        return report

    report.positive_functional = list(witness)
    rays = extreme_rays(A)
    report.extreme_rays = [list(r) for r in rays]
    report.ray_functionals = [list(face_functional(r, A)) for r in rays]
    timings["cone"] = time.time() - start_time

    start_time = time.time()
    report.is_ci, ci_tree = is_complete_intersection(A, max_gens=max_gens)
    report.ci_tree = tree_to_dict(ci_tree)
    if ci_tree is not None:
        report.ci_chain = chain_to_dict(chain_of_partitions(ci_tree, A))
    timings["is_ci"] = time.time() - start_time

    start_time = time.time()
    report.is_ci_cone, cone_tree = is_ci_cone(A, max_gens=max_gens)
    report.ci_cone_tree = tree_to_dict(cone_tree)
    if cone_tree is not None:
        report.ci_cone_chain = chain_to_dict(chain_of_partitions(cone_tree, A))
    timings["is_ci_cone"] = time.time() - start_time

    start_time = time.time()
    report.bipyramidal = is_general_bipyramidal(A)[0]
    if report.is_ci_cone and report.dim >= 2:
        report.bound = bound_to_dict(check_ray_bound(A, max_gens=max_gens))
    timings["bound"] = time.time() - start_time

    if oracle:
        start_time = time.time()
        try:
            report.oracle = oracle_to_dict(is_ci_oracle(A, budget=budget))
        except BudgetExceeded as e:
            logger.warning(f"实例 {A.name} 跳过验证器: {e}")
            report.oracle = {"skipped": str(e)}
        timings["oracle"] = time.time() - start_time

    report.timings = timings
    logger.info(f"实例 {A.name} 分析完成，耗时: {sum(timings.values()):.2f}秒")
    return report
