"""
仿射toric簇完全交判定工具的命令行入口

用法示例：
    python ci_toolkit.py analyze instances/4_6_9.txt --json
    python ci_toolkit.py is-ci instances/3_4_5.txt --check
    python ci_toolkit.py bipyramid --dim 4 | python ci_toolkit.py analyze -
    python ci_toolkit.py corpus instances --jobs 4 --oracle

退出码：0 成功/判定为真，1 判定为假（仅在 --check 时），2 输入或用法错误，3 超出验证器预算。
"""
import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor, as_completed
from glob import glob
from typing import Any, Dict, List, Optional

import pandas as pd
from natsort import natsorted
from tqdm import tqdm

from ci_errors import BudgetExceeded, ToricToolkitError
from cone_tool import cone_dim, extreme_rays, face_functional, is_strongly_convex
from directsum_tool import bipyramid, ci_witness, direct_sum, random_ci_instance
from gluing_tool import Mode, chain_of_partitions, is_ci_cone, is_complete_intersection
from instance_utils import (CorpusRow, build_analysis_report, canonical_json, chain_to_dict, direct_sum_to_dict, format_instance_text, instance_dict,
                            oracle_to_dict, parse_instance, to_canonical, to_generator_set, tree_to_dict, witness_to_dict)
from logging_config import set_level, setup_logger
from toric_oracle_tool import is_ci_oracle

logger = setup_logger(logger_name="CIToolkit")

EXIT_OK = 0
EXIT_FALSE = 1
EXIT_INPUT_ERROR = 2
EXIT_BUDGET = 3


def format_text(report: Dict[str, Any]) -> str:
    """"key: value" 形式的文本报告，键排序，嵌套值用紧凑的JSON表示"""
    lines = []
    for key in sorted(report):
        value = to_canonical(report[key])
        if isinstance(value, str):
            lines.append(f"{key}: {value}")
        else:
            lines.append(f"{key}: {json.dumps(value, sort_keys=True, ensure_ascii=False, separators=(',', ':'))}")
    return "\n".join(lines) + "\n"


def emit(report: Dict[str, Any], as_json: bool) -> None:
    sys.stdout.write(canonical_json(report) if as_json else format_text(report))


def load(path: str):
    return to_generator_set(parse_instance(path))


def verdict_code(verdict: bool, check: bool) -> int:
    if check and not verdict:
        return EXIT_FALSE
    return EXIT_OK


def cmd_analyze(args) -> int:
    A = load(args.file)
    report = build_analysis_report(A, oracle=args.oracle, max_gens=args.max_gens, budget=args.budget)
    emit(report.canonical(), args.json)
    return verdict_code(bool(report.is_ci), args.check)


def _decision(args, decide) -> int:
    A = load(args.file)
    verdict, tree = decide(A, max_gens=args.max_gens)
    report = {"name": A.name, "verdict": verdict, "tree": tree_to_dict(tree)}
    if tree is not None:
        report["chain"] = chain_to_dict(chain_of_partitions(tree, A))
    emit(report, args.json)
    return verdict_code(verdict, args.check)


def cmd_is_ci(args) -> int:
    return _decision(args, is_complete_intersection)


def cmd_is_ci_cone(args) -> int:
    return _decision(args, is_ci_cone)


def cmd_rays(args) -> int:
    A = load(args.file)
    pointed, witness = is_strongly_convex(A)
    report = {"name": A.name, "dim": cone_dim(A), "pointed": pointed}
    if pointed:
        rays = extreme_rays(A)
        report["positive_functional"] = list(witness)
        report["extreme_rays"] = [list(r) for r in rays]
        report["ray_functionals"] = [list(face_functional(r, A)) for r in rays]
    else:
        report["lineality_witness"] = list(witness)
    emit(report, args.json)
    return verdict_code(pointed, args.check)


def cmd_direct_sum(args) -> int:
    A1, A2 = load(args.file1), load(args.file2)
    result = direct_sum(A1, A2)
    emit(direct_sum_to_dict(result), args.json)
    return verdict_code(result is not None, args.check)


def cmd_bipyramid(args) -> int:
    A = bipyramid(args.dim)
    sys.stdout.write(canonical_json(instance_dict(A)) if args.json else format_instance_text(A))
    return EXIT_OK


def cmd_witness(args) -> int:
    A1, A2 = load(args.file1), load(args.file2)
    emit(witness_to_dict(ci_witness(A1, A2, max_gens=args.max_gens)), args.json)
    return EXIT_OK


def cmd_random_ci(args) -> int:
    A = random_ci_instance(args.seed, args.dim, args.steps, Mode(args.mode), max_gens=args.max_gens)
    sys.stdout.write(canonical_json(instance_dict(A)) if args.json else format_instance_text(A))
    return EXIT_OK


def cmd_oracle(args) -> int:
    A = load(args.file)
    report = is_ci_oracle(A, budget=args.budget)
    emit({"name": A.name, **oracle_to_dict(report)}, args.json)
    return verdict_code(report.is_ci, args.check)


class CorpusAnalyzer:
    """批量分析一个目录中的实例文件，汇总为CSV"""

    def __init__(self, max_workers: int = 1, oracle: bool = False, max_gens: Optional[int] = None, budget: Optional[int] = None):
        """
        初始化批量分析器
        Args:
            max_workers: 最大线程数，默认为1
            oracle: 是否同时运行验证器
            max_gens: 判定过程允许的最大生成元个数
            budget: 验证器的步数预算
        """
        self.max_workers = max_workers
        self.oracle = oracle
        self.max_gens = max_gens
        self.budget = budget

    def _analyze_single_file(self, path: str) -> CorpusRow:
        """分析一个实例文件，出错时把错误记录在行里而不是中断整个批次"""
        name = os.path.basename(path)
        try:
            A = load(path)
            report = build_analysis_report(A, oracle=self.oracle, max_gens=self.max_gens, budget=self.budget)
            oracle_is_ci = report.oracle.get("is_ci") if report.oracle else None
            return CorpusRow(name=name,
                             m=report.m,
                             n=report.n,
                             dim=report.dim,
                             pointed=report.pointed,
                             rays=len(report.extreme_rays) if report.extreme_rays is not None else None,
                             is_ci=report.is_ci,
                             is_ci_cone=report.is_ci_cone,
                             bipyramidal=report.bipyramidal,
                             oracle_is_ci=oracle_is_ci)
        except (ToricToolkitError, OSError) as e:
            logger.error(f"实例 {name} 分析失败: {e}")
            return CorpusRow(name=name, error=str(e))

    def batch_analyze_directory(self, directory: str, csv_path: Optional[str] = None) -> List[CorpusRow]:
        """
        分析目录中所有 *.txt 与 *.json 实例（自然排序）
        Args:
            directory: 实例目录
            csv_path: CSV汇总的保存路径，默认保存为目录中的 corpus_report.csv
        Returns:
            List[CorpusRow]: 与文件顺序一致的结果行
        """
        if not os.path.isdir(directory):
            raise ToricToolkitError(f"目录不存在: {directory}")
        files = natsorted(glob(os.path.join(directory, "*.txt")) + glob(os.path.join(directory, "*.json")))
        logger.info(f"共{len(files)}个实例，使用 {self.max_workers} 个线程")

        results: Dict[str, CorpusRow] = {}
        with tqdm(total=len(files), desc="分析实例", ncols=80, file=sys.stderr, disable=not files) as progress_bar:
            with ThreadPoolExecutor(max_workers=self.max_workers) as executor:
                futures = {executor.submit(self._analyze_single_file, path): path for path in files}
                for future in as_completed(futures):
                    results[futures[future]] = future.result()
                    progress_bar.update(1)

        rows = [results[path] for path in files]
        csv_path = csv_path or os.path.join(directory, "corpus_report.csv")
        df = pd.DataFrame([row.model_dump() for row in rows], columns=list(CorpusRow.model_fields))
        df.to_csv(csv_path, index=False)
        logger.info(f"汇总已保存到: {csv_path}")
        return rows


def cmd_corpus(args) -> int:
    analyzer = CorpusAnalyzer(max_workers=args.jobs, oracle=args.oracle, max_gens=args.max_gens, budget=args.budget)
    rows = analyzer.batch_analyze_directory(args.dir, args.csv)
    report = {"instances": [row.model_dump() for row in rows], "count": len(rows), "errors": sum(1 for row in rows if row.error)}
    emit(report, args.json)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="输出规范JSON")
    common.add_argument("--max-gens", type=int, default=None, help="判定过程允许的最大生成元个数（默认16）")
    common.add_argument("--budget", type=int, default=None, help="验证器的Gröbner步数预算")
    common.add_argument("--verbose", action="store_true", help="输出INFO级别日志")

    parser = argparse.ArgumentParser(description="仿射toric簇与完全交锥的判定工具")
    subparsers = parser.add_subparsers(dest="command", required=True)

    def file_command(name: str, handler, help_text: str, files: int = 1, decision: bool = True):
        sub = subparsers.add_parser(name, parents=[common], help=help_text)
        if decision:
            sub.add_argument("--check", action="store_true", help="判定为假时以退出码1结束")
        if files == 1:
            sub.add_argument("file", help="实例文件，- 表示标准输入")
        else:
            sub.add_argument("file1", help="第一个实例文件")
            sub.add_argument("file2", help="第二个实例文件")
        sub.set_defaults(handler=handler)
        return sub

    analyze = file_command("analyze", cmd_analyze, "完整分析一个实例")
    analyze.add_argument("--oracle", action="store_true", help="同时运行toric理想验证器")
    file_command("is-ci", cmd_is_ci, "判定 N A 是否为完全交")
    file_command("is-ci-cone", cmd_is_ci_cone, "判定 pos(A) 是否为完全交锥")
    file_command("rays", cmd_rays, "计算极射线")
    file_command("direct-sum", cmd_direct_sum, "两个锥的直和", files=2)
    file_command("witness", cmd_witness, "由两个完全交部分构造粘合见证", files=2, decision=False)
    file_command("oracle", cmd_oracle, "用toric理想的生成元个数判定完全交")

    bipyramid_parser = subparsers.add_parser("bipyramid", parents=[common], help="输出标准双棱锥的生成元")
    bipyramid_parser.add_argument("--dim", type=int, required=True, help="维数n（至少为2）")
    bipyramid_parser.set_defaults(handler=cmd_bipyramid)

    random_parser = subparsers.add_parser("random-ci", parents=[common], help="生成随机完全交实例")
    random_parser.add_argument("--seed", type=int, required=True)
    random_parser.add_argument("--dim", type=int, required=True)
    random_parser.add_argument("--steps", type=int, required=True)
    random_parser.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.GLUING.value)
    random_parser.set_defaults(handler=cmd_random_ci)

    corpus_parser = subparsers.add_parser("corpus", parents=[common], help="批量分析目录中的实例")
    corpus_parser.add_argument("dir", help="实例目录（*.txt 与 *.json）")
    corpus_parser.add_argument("--jobs", type=int, default=1, help="并行线程数")
    corpus_parser.add_argument("--oracle", action="store_true", help="同时运行验证器")
    corpus_parser.add_argument("--csv", default=None, help="CSV汇总的保存路径，默认保存在实例目录中")
    corpus_parser.set_defaults(handler=cmd_corpus)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_INPUT_ERROR
    if args.verbose:
        set_level("INFO")

    try:
        return args.handler(args)
    except BudgetExceeded as e:
        logger.warning(f"超出验证器预算: {e}")
        print(f"错误: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except (ToricToolkitError, OSError) as e:
        logger.error(f"{args.command} 失败: {e}")
        print(f"错误: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except Exception as e:
        logger.exception(f"{args.command} 出现未预期的错误: {e}")
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
