"""End-to-end orchestration used by the CLI.

Per-hashtag classification is pure, so hashtags are fanned out over a
bounded thread pool and collected in input order; results do not depend
on worker count.
"""

from __future__ import annotations

import os
import re
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from . import corpus, evaluation, ranking, semantic, synth
from .classifier import DomainClassifier, load_classifier, save_classifier, train_domain_classifier
from .config import RunConfig
from .errors import FutureTimestampError, ParseError, ValidationError

RANKING_FILE_PREFIX = "ranking_"
CLUSTERS_FILE = "clusters.jsonl"
REPORT_FILE = "report.json"


@dataclass(frozen=True)
class RankOutcome:
    classified: list[tuple[corpus.HashtagGroup, semantic.ClassifiedHashtag]]
    ranked: dict[str, list[ranking.RankedHashtag]]
    clusters: list[semantic.ClusterResult]
    t_p: int


def run_train(cfg: RunConfig) -> DomainClassifier:
    if not cfg.news:
        raise ValidationError("a news path is required for training")
    if not cfg.model_dir:
        raise ValidationError("a model directory is required for training")
    articles = corpus.load_news_corpus(cfg.news)
    clf = train_domain_classifier(
        articles,
        min_df=cfg.min_df,
        max_df_ratio=cfg.max_df_ratio,
        n_topics=cfg.n_topics,
        alpha=cfg.alpha,
        beta=cfg.beta,
        train_iters=cfg.train_iters,
        infer_iters=cfg.infer_iters,
        svm_lambda=cfg.svm_lambda,
        epochs=cfg.epochs,
        seed=cfg.seed,
    )
    save_classifier(clf, cfg.model_dir)
    return clf


def resolve_reference_time(cfg: RunConfig, posts: list[corpus.Microblog]) -> int:
    if cfg.t_p == "now":
        return int(time.time())
    if cfg.t_p is not None:
        return int(cfg.t_p)
    # default: latest post, so reruns over a fixed dump are reproducible
    return max((post.timestamp for post in posts), default=0)


def run_rank(cfg: RunConfig, clf: DomainClassifier | None = None) -> RankOutcome:
    if not cfg.microblogs:
        raise ValidationError("a microblogs path is required for ranking")
    if clf is None:
        if not cfg.model_dir:
            raise ValidationError("a model directory is required for ranking")
        clf = load_classifier(cfg.model_dir)

    posts = corpus.load_microblogs(cfg.microblogs, style=cfg.hashtag_style)
    groups = [
        g for g in corpus.group_by_hashtag(posts) if g.size >= cfg.min_group_size
    ]
    t_p = resolve_reference_time(cfg, posts)
    latest = max((post.timestamp for post in posts), default=0)
    if latest > t_p:
        raise FutureTimestampError(
            f"posts timestamped up to {latest} but reference time t_p is {t_p}"
        )
    params = ranking.DecayParams(gamma=cfg.gamma_days * ranking.SECONDS_PER_DAY, t_p=t_p)

    def job(group: corpus.HashtagGroup):
        result, considered = semantic.cluster_group(
            group,
            clf,
            max_posts=cfg.cluster_cap,
            seed=cfg.seed,
            strict=cfg.strict_clustering,
        )
        chosen = semantic.chosen_posts(result, considered)
        tagged = semantic.classify_semantic_posts(group.tag, chosen, clf, seed=cfg.seed)
        return tagged, result

    workers = cfg.workers or os.cpu_count() or 1
    if workers > 1 and len(groups) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(job, groups))
    else:
        outcomes = [job(group) for group in groups]

    classified = [(group, tagged) for group, (tagged, _) in zip(groups, outcomes)]
    clusters = [result for _, result in outcomes]
    ranked = ranking.rank_domains(classified, params, cfg.top_k, domains=list(clf.labels))
    return RankOutcome(classified=classified, ranked=ranked, clusters=clusters, t_p=t_p)


def _safe_filename(domain: str, taken: set[str]) -> str:
    base = re.sub(r"[^\w.-]", "_", domain) or "domain"
    name = base
    suffix = 1
    while name in taken:
        name = f"{base}_{suffix}"
        suffix += 1
    taken.add(name)
    return name


def write_rank_outputs(outcome: RankOutcome, output_dir, dump_clusters: bool = False) -> list[str]:
    """Write per-domain ranking JSONL files; returns the paths written."""
    os.makedirs(output_dir, exist_ok=True)
    written: list[str] = []
    taken: set[str] = set()
    for domain in sorted(outcome.ranked):
        entries = outcome.ranked[domain]
        path = os.path.join(
            output_dir, f"{RANKING_FILE_PREFIX}{_safe_filename(domain, taken)}.jsonl"
        )
        corpus.write_jsonl(
            path,
            (
                {
                    "domain": entry.domain,
                    "rank": rank,
                    "tag": entry.tag,
                    "hot": entry.hot,
                    "p": entry.p,
                    "n_posts": entry.n_posts,
                }
                for rank, entry in enumerate(entries, start=1)
            ),
        )
        written.append(path)
    if dump_clusters:
        path = os.path.join(output_dir, CLUSTERS_FILE)
        corpus.write_jsonl(
            path,
            (
                {
                    "tag": tagged.tag,
                    "threshold": result.threshold,
                    "cluster_sizes": [len(c) for c in result.clusters],
                    "chosen_ids": list(result.chosen_ids()),
                }
                for (_, tagged), result in zip(outcome.classified, outcome.clusters)
            ),
        )
        written.append(path)
    return written


def format_ranking_table(ranked: dict[str, list[ranking.RankedHashtag]]) -> str:
    """Aligned, human-readable view of the per-domain rankings."""
    lines = []
    for domain in sorted(ranked):
        lines.append(domain)
        entries = ranked[domain]
        if not entries:
            lines.append("  (no hashtags)")
            continue
        tag_width = max(len(e.tag) for e in entries)
        for rank, entry in enumerate(entries, start=1):
            lines.append(
                f"  {rank:>3d}. {entry.tag:<{tag_width}s}  "
                f"hot={entry.hot:>10.4f}  p={entry.p:.4f}  posts={entry.n_posts}"
            )
    return "\n".join(lines)


def load_rank_outputs(output_dir) -> dict[str, list[ranking.RankedHashtag]]:
    """Read ranking_*.jsonl files back into per-domain ranked lists."""
    if not os.path.isdir(output_dir):
        raise FileNotFoundError(f"no such ranking directory: {output_dir}")
    names = sorted(
        n for n in os.listdir(output_dir)
        if n.startswith(RANKING_FILE_PREFIX) and n.endswith(".jsonl")
    )
    if not names:
        raise ValidationError(f"no {RANKING_FILE_PREFIX}*.jsonl files in {output_dir}")
    by_domain: dict[str, list[tuple[int, ranking.RankedHashtag]]] = {}
    for name in names:
        path = os.path.join(output_dir, name)
        for line_no, record in corpus.iter_jsonl(path):
            try:
                entry = ranking.RankedHashtag(
                    tag=str(record["tag"]),
                    domain=str(record["domain"]),
                    hot=float(record["hot"]),
                    p=float(record["p"]),
                    n_posts=int(record["n_posts"]),
                )
                rank_no = int(record["rank"])
            except (KeyError, TypeError, ValueError) as exc:
                raise ParseError(path, line_no, f"bad ranking record ({exc})") from exc
            by_domain.setdefault(entry.domain, []).append((rank_no, entry))
    return {
        domain: [entry for _, entry in sorted(pairs, key=lambda x: x[0])]
        for domain, pairs in by_domain.items()
    }


def run_eval(cfg: RunConfig) -> evaluation.MetricReport:
    if not cfg.output_dir:
        raise ValidationError("an output directory with rankings is required")
    if not cfg.annotations:
        raise ValidationError("an annotations path is required")
    ranked = load_rank_outputs(cfg.output_dir)
    annotations = evaluation.load_annotations(cfg.annotations)
    if not annotations:
        raise ValidationError(f"no annotations in {cfg.annotations}")
    return evaluation.evaluate_rankings(ranked, annotations, k=cfg.top_k)


def run_synth(cfg: RunConfig) -> dict[str, str]:
    """Generate and write the synthetic dataset; returns written paths."""
    if not cfg.output_dir:
        raise ValidationError("an output directory is required")
    os.makedirs(cfg.output_dir, exist_ok=True)
    articles = synth.generate_news(cfg.synth)
    posts, truth = synth.generate_microblogs(cfg.synth)
    paths = {
        "news": os.path.join(cfg.output_dir, "news.jsonl"),
        "microblogs": os.path.join(cfg.output_dir, "microblogs.jsonl"),
        "truth": os.path.join(cfg.output_dir, "truth.jsonl"),
    }
    corpus.write_jsonl(paths["news"], (corpus.news_to_record(a) for a in articles))
    corpus.write_jsonl(paths["microblogs"], (corpus.microblog_to_record(p) for p in posts))
    corpus.write_jsonl(paths["truth"], truth)
    return paths
