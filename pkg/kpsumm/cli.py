"""
命令行入口
==========

子命令::

    kpsumm summarize <clusters> [--strategy waterfall] [--distance cosine] ...
    kpsumm evaluate  <clusters> [--report report.tsv] [--shuffle-trials 10] ...
    kpsumm bench     <clusters> [--dataset tac2009] [--strategies ...] ...

``<clusters>`` 为单个簇目录（含 docs/），或包含多个簇目录的父目录。

退出码：0 成功，1 输入/领域错误，2 用法错误。

配置文件（``--config``）为 ``key=value`` 文本，键名即长选项名，``#`` 之后为
注释；命令行选项覆盖配置文件。``--config`` 也接受 ``run_manifest.json``，
读取其中的 ``config`` 字段以重放一次运行。
"""

from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple
import argparse
import json
import logging
import sys

from . import __version__
from .centrality import RankedSummary
from .constants import (
    BENCH_DISTANCES,
    BENCH_STRATEGIES,
    CENTRALITY_STRATEGIES,
    DEFAULT_BUDGET_WORDS,
    DEFAULT_DISTANCE,
    DEFAULT_KEYPHRASES,
    DEFAULT_MMR_LAMBDA,
    DEFAULT_PER_DOC_KEYPHRASES,
    DEFAULT_SEED,
    DEFAULT_STRATEGY,
    MMR,
    PUBLISHED_DATASETS,
    PUBLISHED_SCORES,
    STRATEGY_ALIASES,
    STRATEGY_LABELS,
    ExitCode,
)
from .corpus import Cluster, load_clusters
from .errors import InputError, KpSummError
from .keyphrase import load_stopwords
from .metrics import parse_metric
from .multidoc import StrategyConfig
from .rouge import ReportRow, format_report, mean_row
from .summarizer import Summarizer

#: 运行清单文件名
MANIFEST_NAME = "run_manifest.json"

#: 写入运行清单、可通过 --config 重放的选项
REPLAYABLE_OPTIONS = (
    "strategy",
    "distance",
    "budget_words",
    "keyphrases",
    "per_doc_keyphrases",
    "stopwords",
    "seed",
    "shuffle_trials",
    "mmr_lambda",
    "mmr_sim1",
    "mmr_sim2",
    "use_query",
)

#: bench 报告列
BENCH_COLUMNS = ("strategy", "metric", "R1", "R2", "published_R1", "published_R2")

_TRUE_VALUES = ("1", "true", "yes", "on")


class UsageError(Exception):
    """选项取值不合法（退出码 2）。"""


# ==================== 参数 ====================

def add_common_arguments(parser: argparse.ArgumentParser) -> None:
    """三个子命令共享的选项。"""
    parser.add_argument("clusters", help="簇目录，或包含多个簇目录的父目录")
    parser.add_argument(
        "--strategy",
        choices=list(STRATEGY_ALIASES),
        default=STRATEGY_LABELS[DEFAULT_STRATEGY],
        help="摘要策略（默认 waterfall）",
    )
    parser.add_argument(
        "--distance",
        default=DEFAULT_DISTANCE,
        help="KP-Centrality 距离: cosine | euclidean | manhattan | chebyshev | "
             "frac133 | js | minkowski[:p]（默认 cosine）",
    )
    parser.add_argument("--budget-words", type=int, default=DEFAULT_BUDGET_WORDS, help="摘要字数预算")
    parser.add_argument("--keyphrases", type=int, default=DEFAULT_KEYPHRASES, help="融合后保留的关键短语数 K")
    parser.add_argument(
        "--per-doc-keyphrases",
        type=int,
        default=DEFAULT_PER_DOC_KEYPHRASES,
        help="每篇文档抽取的候选关键短语数",
    )
    parser.add_argument("--stopwords", default=None, help="停用词文件（优先于 KPSUMM_STOPWORDS）")
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED, help="洗牌试验随机种子")
    parser.add_argument("--shuffle-trials", type=int, default=0, help="洗牌试验次数，0 表示按时间顺序")
    parser.add_argument("--mmr-lambda", type=float, default=DEFAULT_MMR_LAMBDA, help="MMR 的 λ")
    parser.add_argument("--mmr-sim1", default=DEFAULT_DISTANCE, help="MMR 段落-查询相似度")
    parser.add_argument("--mmr-sim2", default=DEFAULT_DISTANCE, help="MMR 段落-段落相似度")

    # Python 3.8 没有 BooleanOptionalAction；两个选项共用 dest，后出现者生效
    parser.add_argument("--use-query", dest="use_query", action="store_true", help="把查询作为人工段落（默认）")
    parser.add_argument("--no-query", dest="use_query", action="store_false", help="忽略 query.txt")
    parser.set_defaults(use_query=True)

    parser.add_argument("--jobs", type=int, default=1, help="并行处理的簇数")
    parser.add_argument("--config", default=None, help="key=value 配置文件或 run_manifest.json")
    parser.add_argument(
        "--log-level",
        choices=("DEBUG", "INFO", "WARNING", "ERROR"),
        default="WARNING",
        help="日志级别",
    )


def build_parser() -> argparse.ArgumentParser:
    """构建命令行解析器。"""
    parser = argparse.ArgumentParser(
        prog="kpsumm",
        description="基于关键短语的 KP-Centrality 抽取式多文档摘要",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", metavar="{summarize,evaluate,bench}")
    subparsers.required = True

    summarize = subparsers.add_parser("summarize", help="生成摘要文件")
    add_common_arguments(summarize)
    summarize.add_argument("--output", default="summaries", help="摘要输出目录")
    summarize.set_defaults(handler=cmd_summarize)

    evaluate = subparsers.add_parser("evaluate", help="以 refs/ 中的参考摘要评估 ROUGE-1/2")
    add_common_arguments(evaluate)
    evaluate.add_argument("--report", default=None, help="TSV 报告路径，缺省输出到标准输出")
    evaluate.add_argument("--output", default=None, help="同时写出摘要与运行清单的目录")
    evaluate.set_defaults(handler=cmd_evaluate)

    bench = subparsers.add_parser("bench", help="在策略 × 距离网格上评估")
    add_common_arguments(bench)
    bench.add_argument("--strategies", default=None, help=f"逗号分隔，默认 {','.join(BENCH_STRATEGIES)}")
    bench.add_argument("--distances", default=None, help=f"逗号分隔，默认 {','.join(BENCH_DISTANCES)}")
    bench.add_argument("--dataset", choices=PUBLISHED_DATASETS, default=None, help="并列显示已发表分数")
    bench.add_argument("--report", default=None, help="TSV 报告路径，缺省输出到标准输出")
    bench.set_defaults(handler=cmd_bench)
    return parser


# ==================== 配置文件 ====================

def _is_true(value) -> bool:
    if isinstance(value, bool):
        return value
    return str(value).strip().lower() in _TRUE_VALUES


def config_file_args(path: str) -> List[str]:
    """把配置文件转换为命令行参数。

    Args:
        path: ``key=value`` 文本，或带 ``config`` 字段的 JSON 运行清单

    Returns:
        List[str]: 形如 ``["--budget-words", "100", "--no-query"]`` 的参数

    Raises:
        InputError: 文件不可读或格式错误
    """
    config_path = Path(path)
    try:
        text = config_path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise InputError(f"无法读取配置文件 {config_path.name}: {e}") from e

    if config_path.suffix == ".json":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise InputError(f"配置文件 {config_path.name} 不是合法的 JSON: {e}") from e
        if not isinstance(data, dict):
            raise InputError(f"配置文件 {config_path.name} 应为 JSON 对象")
        items = list(data.get("config", data).items())
    else:
        items = []
        for lineno, line in enumerate(text.splitlines(), start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise InputError(
                    f"配置文件 {config_path.name} 第 {lineno} 行格式错误，应为 key=value: {line!r}"
                )
            items.append((key.strip(), value.strip()))

    args: List[str] = []
    for key, value in items:
        flag = key.replace("_", "-")
        if flag in ("use-query", "no-query"):
            wants_query = _is_true(value) == (flag == "use-query")
            args.append("--use-query" if wants_query else "--no-query")
        elif value is not None:
            args.extend([f"--{flag}", str(value)])
    return args


def _with_config(argv: List[str], args: argparse.Namespace) -> List[str]:
    """把配置文件参数插到子命令名之后，使命令行选项后出现、优先生效。"""
    position = argv.index(args.command) + 1
    return argv[:position] + config_file_args(args.config) + argv[position:]


def strategy_config(
    args: argparse.Namespace,
    strategy: Optional[str] = None,
    distance: Optional[str] = None,
    stopwords=None,
) -> StrategyConfig:
    """由命令行参数构造策略配置。

    Raises:
        UsageError: 取值不合法
    """
    try:
        return StrategyConfig(
            strategy=strategy or args.strategy,
            metric=parse_metric(distance or args.distance),
            budget_words=args.budget_words,
            keyphrase_k=args.keyphrases,
            per_doc_keyphrases=args.per_doc_keyphrases,
            use_query=args.use_query,
            seed=args.seed,
            mmr_lambda=args.mmr_lambda,
            mmr_sim1=parse_metric(args.mmr_sim1),
            mmr_sim2=parse_metric(args.mmr_sim2),
            stopwords=stopwords,
        )
    except KpSummError:
        raise
    except ValueError as e:
        raise UsageError(str(e)) from e


def _check_counts(args: argparse.Namespace) -> None:
    if args.shuffle_trials < 0:
        raise UsageError(f"--shuffle-trials 不能为负数，当前收到: {args.shuffle_trials!r}")
    if args.jobs < 1:
        raise UsageError(f"--jobs 必须 ≥ 1，当前收到: {args.jobs!r}")


# ==================== 运行 ====================

#: (标签, 摘要, 文档排列或 None)
RunItem = Tuple[str, RankedSummary, Optional[Tuple[int, ...]]]


def _map_clusters(fn: Callable, clusters: Sequence[Cluster], jobs: int) -> list:
    """逐簇执行，结果保持簇的顺序。"""
    if jobs <= 1 or len(clusters) <= 1:
        return [fn(cluster) for cluster in clusters]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, clusters))


def _run_cluster(summarizer: Summarizer, cluster: Cluster, trials: int) -> List[RunItem]:
    if not trials:
        return [(cluster.id, summarizer.summarize(cluster), None)]
    return [
        (f"{cluster.id}/trial{k}", trial.summary, trial.permutation)
        for k, trial in enumerate(summarizer.shuffled_trials(cluster, trials), start=1)
    ]


def _summary_path(output: Path, label: str) -> Path:
    return output / f"{label.replace('/', '.')}.summary.txt"


def write_summary(path: Path, summary: RankedSummary) -> None:
    """每行一个段落，UTF-8，以换行结尾。"""
    text = summary.text
    path.write_text(text + "\n" if text else "", encoding="utf-8", newline="\n")


def write_run_manifest(
    output: Path,
    command: str,
    args: argparse.Namespace,
    clusters: Sequence[Cluster],
    outputs: List[Dict],
) -> Path:
    """写出运行清单（不含时间戳，键排序），同一配置与输入重放时字节一致。"""
    manifest = {
        "tool": "kpsumm",
        "version": __version__,
        "command": command,
        "config": {key: getattr(args, key) for key in REPLAYABLE_OPTIONS},
        "clusters": [cluster.id for cluster in clusters],
        "seed": args.seed,
        "outputs": outputs,
    }
    path = output / MANIFEST_NAME
    path.write_text(
        json.dumps(manifest, sort_keys=True, indent=2, ensure_ascii=False) + "\n",
        encoding="utf-8",
        newline="\n",
    )
    return path


def _write_outputs(
    output: Path,
    command: str,
    args: argparse.Namespace,
    clusters: Sequence[Cluster],
    results: Sequence[List[RunItem]],
    scores: Optional[Dict[str, ReportRow]] = None,
) -> None:
    output.mkdir(parents=True, exist_ok=True)
    entries = []
    for cluster, items in zip(clusters, results):
        for label, summary, permutation in items:
            path = _summary_path(output, label)
            write_summary(path, summary)
            print(f"✅ {label}: {summary.total_words} 词 → {path}")
            entry = {
                "cluster": cluster.id,
                "label": label,
                "summary": path.name,
                "words": summary.total_words,
                "passages": [[doc_id, index] for doc_id, index in summary.keys],
            }
            if permutation is not None:
                entry["permutation"] = list(permutation)
            if scores and label in scores:
                entry["R1"] = round(scores[label].r1, 6)
                entry["R2"] = round(scores[label].r2, 6)
            entries.append(entry)
    write_run_manifest(output, command, args, clusters, entries)


def _emit_report(text: str, report: Optional[str]) -> None:
    if report:
        Path(report).write_text(text, encoding="utf-8", newline="\n")
        print(f"✅ 报告已写入 {report}")
    else:
        sys.stdout.write(text)


# ==================== 子命令 ====================

def cmd_summarize(args: argparse.Namespace) -> int:
    """生成摘要文件并打印字数。"""
    config = strategy_config(args)
    clusters = load_clusters(args.clusters)
    summarizer = Summarizer(config, stopwords_path=args.stopwords)
    print(f"⏳ 摘要 {len(clusters)} 个簇: {summarizer!r}")

    results = _map_clusters(
        lambda cluster: _run_cluster(summarizer, cluster, args.shuffle_trials),
        clusters,
        args.jobs,
    )
    _write_outputs(Path(args.output), "summarize", args, clusters, results)
    return ExitCode.OK


def cmd_evaluate(args: argparse.Namespace) -> int:
    """评估 ROUGE-1/2 并输出 TSV 报告。"""
    config = strategy_config(args)
    clusters = load_clusters(args.clusters)
    summarizer = Summarizer(config, stopwords_path=args.stopwords)
    print(f"⏳ 评估 {len(clusters)} 个簇: {summarizer!r}", file=sys.stderr)

    results = _map_clusters(
        lambda cluster: _run_cluster(summarizer, cluster, args.shuffle_trials),
        clusters,
        args.jobs,
    )
    rows = [
        summarizer.report_row(summarizer.score(summary, cluster, label))
        for cluster, items in zip(clusters, results)
        for label, summary, _ in items
    ]
    _emit_report(format_report(rows), args.report)

    if args.output:
        scores = {row.cluster_id: row for row in rows}
        _write_outputs(Path(args.output), "evaluate", args, clusters, results, scores)
    return ExitCode.OK


def _split_list(value: Optional[str], default: Sequence[str]) -> List[str]:
    if not value:
        return list(default)
    return [item.strip() for item in value.split(",") if item.strip()]


def _published(dataset: Optional[str], strategy: str, metric: str, shuffled: bool) -> Tuple[str, str]:
    scores = PUBLISHED_SCORES.get((dataset, strategy, metric, shuffled)) if dataset else None
    if scores is None:
        return "", ""
    return f"{scores[0]:.4f}", f"{scores[1]:.4f}"


def cmd_bench(args: argparse.Namespace) -> int:
    """策略 × 距离网格评估；--dataset 给出时并列显示已发表分数（仅作诊断对照）。"""
    clusters = load_clusters(args.clusters)
    stopwords = load_stopwords(args.stopwords)

    strategies = _split_list(args.strategies, BENCH_STRATEGIES)
    distances = _split_list(args.distances, BENCH_DISTANCES)
    if not args.strategies and not all(cluster.query for cluster in clusters):
        strategies = [s for s in strategies if STRATEGY_ALIASES.get(s) != MMR]
        print("⚠️ 部分簇没有 query.txt，默认网格跳过 mmr", file=sys.stderr)

    lines = ["\t".join(BENCH_COLUMNS)]
    for strategy in strategies:
        uses_distance = STRATEGY_ALIASES.get(strategy) in CENTRALITY_STRATEGIES
        for distance in distances if uses_distance else [args.distance]:
            summarizer = Summarizer(strategy_config(args, strategy, distance, stopwords))
            print(f"⏳ {summarizer!r}", file=sys.stderr)

            orders = [0, args.shuffle_trials] if args.shuffle_trials and uses_distance else [0]
            for trials in orders:
                results = _map_clusters(
                    lambda cluster, n=trials: _run_cluster(summarizer, cluster, n),
                    clusters,
                    args.jobs,
                )
                rows = [
                    summarizer.report_row(summarizer.score(summary, cluster, label))
                    for cluster, items in zip(clusters, results)
                    for label, summary, _ in items
                ]
                mean = mean_row(rows)
                label = summarizer.label + ("+shuffle" if trials else "")
                published = _published(args.dataset, summarizer.label, mean.metric, bool(trials))
                lines.append("\t".join(
                    [label, mean.metric, f"{mean.r1:.4f}", f"{mean.r2:.4f}", *published]
                ))

    _emit_report("\n".join(lines) + "\n", args.report)
    return ExitCode.OK


# ==================== 入口 ====================

def main(argv: Optional[Sequence[str]] = None) -> int:
    """命令行入口。

    Args:
        argv: 命令行参数，默认 ``sys.argv[1:]``

    Returns:
        int: 退出码，见 :class:`kpsumm.constants.ExitCode`
    """
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        if args.config:
            args = parser.parse_args(_with_config(argv, args))
        logging.basicConfig(
            level=getattr(logging, args.log_level),
            format="%(levelname)s %(name)s: %(message)s",
        )
        _check_counts(args)
        return args.handler(args)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        print(f"❌ {e}", file=sys.stderr)
        return ExitCode.USAGE_ERROR
    except KpSummError as e:
        print(f"❌ {e}", file=sys.stderr)
        return ExitCode.INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
