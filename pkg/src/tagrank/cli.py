"""Command-line entry point.

Subcommands: train, rank, eval, synth, extract. Settings come from an
optional JSON config file (--config) overridden by flags; every command
is reproducible given the same inputs and seed.

Exit codes: 0 success, 2 input or validation error, 3 data-consistency
error (posts timestamped after the ranking reference time).
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__, pipeline
from .config import build_config, load_config_file
from .corpus import extract_hashtags
from .errors import FutureTimestampError, ParseError, TagRankError, ValidationError

_CONFIG_KEYS = (
    "news",
    "microblogs",
    "model_dir",
    "output_dir",
    "annotations",
    "hashtag_style",
    "min_group_size",
    "min_df",
    "max_df_ratio",
    "n_topics",
    "alpha",
    "beta",
    "train_iters",
    "infer_iters",
    "svm_lambda",
    "epochs",
    "gamma_days",
    "t_p",
    "top_k",
    "strict_clustering",
    "cluster_cap",
    "workers",
    "seed",
    "n_domains",
    "docs_per_domain",
    "vocab_per_domain",
    "overlap_ratio",
    "doc_len",
    "n_hashtags",
    "posts_per_hashtag",
    "spam_ratio",
    "time_span_days",
)


def _parse_t_p(value: str):
    if value == "now":
        return "now"
    try:
        return int(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError('t_p must be an integer or "now"') from exc


def _config_from_args(args: argparse.Namespace):
    file_values = load_config_file(args.config) if args.config else {}
    overrides = {
        key: value
        for key, value in vars(args).items()
        if key in _CONFIG_KEYS and value is not None
    }
    return build_config(file_values, overrides)


def cmd_train(args: argparse.Namespace) -> int:
    cfg = _config_from_args(args)
    pipeline.run_train(cfg)
    print(f"model written to {cfg.model_dir}")
    return 0


def cmd_rank(args: argparse.Namespace) -> int:
    cfg = _config_from_args(args)
    if not cfg.output_dir:
        raise ValidationError("an output directory is required for ranking")
    outcome = pipeline.run_rank(cfg)
    written = pipeline.write_rank_outputs(outcome, cfg.output_dir, dump_clusters=args.dump_clusters)
    print(f"ranked {len(outcome.classified)} hashtags at t_p={outcome.t_p}")
    for path in written:
        print(f"  {path}")
    if args.table:
        print(pipeline.format_ranking_table(outcome.ranked))
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    cfg = _config_from_args(args)
    report = pipeline.run_eval(cfg)
    report_path = args.report or (
        f"{cfg.output_dir}/{pipeline.REPORT_FILE}" if cfg.output_dir else None
    )
    if report_path:
        with open(report_path, "w", encoding="utf-8", newline="\n") as handle:
            json.dump(report.to_json(), handle, ensure_ascii=False, indent=2)
            handle.write("\n")
    print(report.format_text())
    return 0


def cmd_synth(args: argparse.Namespace) -> int:
    cfg = _config_from_args(args)
    paths = pipeline.run_synth(cfg)
    for kind, path in paths.items():
        print(f"{kind}: {path}")
    return 0


def cmd_extract(args: argparse.Namespace) -> int:
    for tag in extract_hashtags(args.text, style=args.style):
        print(tag)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tagrank",
        description="Classify hashtags into news domains and rank them by hot value.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file; flags override its values")
    common.add_argument("--seed", type=int, help="run seed (default 42)")
    common.add_argument("--workers", type=int, help="worker threads (default: cpu count)")

    train = sub.add_parser("train", parents=[common], help="train the domain classifier")
    train.add_argument("--news", help="news corpus JSONL")
    train.add_argument("--model-dir", dest="model_dir", help="directory for model artifacts")
    train.add_argument("--min-df", dest="min_df", type=int)
    train.add_argument("--max-df-ratio", dest="max_df_ratio", type=float)
    train.add_argument("--n-topics", dest="n_topics", type=int)
    train.add_argument("--alpha", type=float)
    train.add_argument("--beta", type=float)
    train.add_argument("--train-iters", dest="train_iters", type=int)
    train.add_argument("--infer-iters", dest="infer_iters", type=int)
    train.add_argument("--svm-lambda", dest="svm_lambda", type=float)
    train.add_argument("--epochs", type=int)
    train.set_defaults(func=cmd_train)

    rank = sub.add_parser("rank", parents=[common], help="classify and rank hashtags")
    rank.add_argument("--microblogs", help="microblog JSONL")
    rank.add_argument("--model-dir", dest="model_dir")
    rank.add_argument("--output-dir", dest="output_dir")
    rank.add_argument("--hashtag-style", dest="hashtag_style", choices=["weibo", "twitter"])
    rank.add_argument("--min-group-size", dest="min_group_size", type=int)
    rank.add_argument("--gamma-days", dest="gamma_days", type=float)
    rank.add_argument("--t-p", dest="t_p", type=_parse_t_p, help='epoch seconds or "now"')
    rank.add_argument("--top-k", dest="top_k", type=int)
    rank.add_argument(
        "--strict-clustering", dest="strict_clustering", action="store_true", default=None
    )
    rank.add_argument("--cluster-cap", dest="cluster_cap", type=int)
    rank.add_argument("--table", action="store_true", help="print an aligned ranking table")
    rank.add_argument(
        "--dump-clusters", dest="dump_clusters", action="store_true",
        help="write per-hashtag cluster diagnostics",
    )
    rank.set_defaults(func=cmd_rank)

    evaluate = sub.add_parser("eval", parents=[common], help="score rankings against annotations")
    evaluate.add_argument("--output-dir", dest="output_dir", help="directory holding rankings")
    evaluate.add_argument("--annotations", help="annotation JSONL")
    evaluate.add_argument("--top-k", dest="top_k", type=int)
    evaluate.add_argument("--report", help="report JSON path (default: <output-dir>/report.json)")
    evaluate.set_defaults(func=cmd_eval)

    synth = sub.add_parser("synth", parents=[common], help="generate a synthetic dataset")
    synth.add_argument("--output-dir", dest="output_dir")
    synth.add_argument("--n-domains", dest="n_domains", type=int)
    synth.add_argument("--docs-per-domain", dest="docs_per_domain", type=int)
    synth.add_argument("--vocab-per-domain", dest="vocab_per_domain", type=int)
    synth.add_argument("--overlap-ratio", dest="overlap_ratio", type=float)
    synth.add_argument("--doc-len", dest="doc_len", type=int)
    synth.add_argument("--n-hashtags", dest="n_hashtags", type=int)
    synth.add_argument("--posts-per-hashtag", dest="posts_per_hashtag", type=int)
    synth.add_argument("--spam-ratio", dest="spam_ratio", type=float)
    synth.add_argument("--time-span-days", dest="time_span_days", type=float)
    synth.set_defaults(func=cmd_synth)

    extract = sub.add_parser("extract", help="extract hashtags from text (debug)")
    extract.add_argument("text")
    extract.add_argument("--style", choices=["weibo", "twitter"], default="weibo")
    extract.set_defaults(func=cmd_extract)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FutureTimestampError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValidationError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except TagRankError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
