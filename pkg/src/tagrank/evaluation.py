"""Evaluation metrics: precision, NDCG@k and Fleiss' kappa.

NDCG uses the exponential-gain form (2^rel - 1) / log2(i + 1). Annotator
scores in [1, 5] map to relevance as score - 1, so the lowest score
contributes zero gain; with several annotators per hashtag the mean
score is used.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ParseError, ValidationError

MIN_SCORE = 1
MAX_SCORE = 5


def precision(predicted: list[str], gold: list[str]) -> float:
    """Fraction of positions where the prediction matches gold."""
    if not predicted or len(predicted) != len(gold):
        raise ValidationError("predicted and gold must be equal-length and non-empty")
    hits = sum(1 for p, g in zip(predicted, gold) if p == g)
    return hits / len(predicted)


def _dcg(relevances, k: int) -> float:
    return sum(
        (2.0 ** rel - 1.0) / math.log2(i + 2)
        for i, rel in enumerate(relevances[:k])
    )


def ndcg_at_k(ranked_relevances: list[float], ideal_relevances: list[float], k: int) -> float:
    """Normalized discounted cumulative gain at cutoff k.

    ``ideal_relevances`` is the full graded set; it is re-sorted
    descending internally. An all-zero ideal (no relevant item exists)
    returns 1.0 by convention.
    """
    if k < 1:
        raise ValidationError(f"k must be >= 1, got {k}")
    if any(r < 0 for r in ranked_relevances) or any(r < 0 for r in ideal_relevances):
        raise ValidationError("relevances must be non-negative")
    ideal_dcg = _dcg(sorted(ideal_relevances, reverse=True), k)
    if ideal_dcg == 0.0:
        return 1.0
    return _dcg(list(ranked_relevances), k) / ideal_dcg


def fleiss_kappa(ratings) -> float:
    """Fleiss' kappa over an items x categories matrix of rating counts.

    Every row must sum to the same rater count r >= 2. Returns exactly
    1.0 when observed agreement is perfect.
    """
    table = np.asarray(ratings, dtype=np.float64)
    if table.ndim != 2 or table.shape[0] < 1 or table.shape[1] < 1:
        raise ValidationError("ratings must be a non-empty 2-D count matrix")
    if np.any(table < 0):
        raise ValidationError("rating counts must be non-negative")
    row_sums = table.sum(axis=1)
    r = row_sums[0]
    if r < 2 or np.any(row_sums != r):
        raise ValidationError("every item must have the same rater count r >= 2")

    n_items = table.shape[0]
    p_item = (np.square(table).sum(axis=1) - r) / (r * (r - 1.0))
    p_mean = float(p_item.mean())
    if p_mean == 1.0:
        return 1.0
    p_cat = table.sum(axis=0) / (n_items * r)
    p_expected = float(np.square(p_cat).sum())
    return (p_mean - p_expected) / (1.0 - p_expected)


@dataclass(frozen=True)
class Annotation:
    """One hashtag's gold domain and per-annotator hot scores."""

    tag: str
    gold_domain: str
    scores: tuple[int, ...]

    def __post_init__(self):
        if not self.scores:
            raise ValidationError(f"annotation {self.tag!r} has no scores")
        for score in self.scores:
            if not MIN_SCORE <= score <= MAX_SCORE:
                raise ValidationError(
                    f"annotation {self.tag!r}: score {score} outside [{MIN_SCORE}, {MAX_SCORE}]"
                )

    def relevance(self) -> float:
        """Mean annotator score shifted so the minimum score gains nothing."""
        return sum(self.scores) / len(self.scores) - MIN_SCORE


def load_annotations(path) -> list[Annotation]:
    """Read annotation JSONL: {"tag", "gold_domain", "scores"}.

    All records must carry the same number of annotator scores.
    """
    annotations: list[Annotation] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(path, line_no, f"invalid JSON ({exc.msg})") from exc
            try:
                tag = record["tag"]
                gold = record["gold_domain"]
                scores = record["scores"]
            except (KeyError, TypeError) as exc:
                raise ParseError(path, line_no, "record must carry tag, gold_domain, scores") from exc
            if not isinstance(tag, str) or not isinstance(gold, str):
                raise ParseError(path, line_no, "tag and gold_domain must be strings")
            if not isinstance(scores, list) or not all(
                isinstance(s, int) and not isinstance(s, bool) for s in scores
            ):
                raise ParseError(path, line_no, "scores must be a list of integers")
            if tag in seen:
                raise ValidationError(f"{path}:{line_no}: duplicate annotation for {tag!r}")
            seen.add(tag)
            try:
                annotations.append(Annotation(tag=tag, gold_domain=gold, scores=tuple(scores)))
            except ValidationError as exc:
                raise ValidationError(f"{path}:{line_no}: {exc}") from exc
    if annotations:
        counts = {len(a.scores) for a in annotations}
        if len(counts) > 1:
            raise ValidationError("annotations must all have the same annotator count")
    return annotations


@dataclass(frozen=True)
class MetricReport:
    precision: float
    ndcg_at_k: dict[str, float] = field(default_factory=dict)
    kappa: float = 0.0
    k: int = 10
    n_evaluated: int = 0

    def to_json(self) -> dict:
        return {
            "precision": self.precision,
            "ndcg_at_k": dict(sorted(self.ndcg_at_k.items())),
            "kappa": self.kappa,
            "k": self.k,
            "n_evaluated": self.n_evaluated,
        }

    def format_text(self) -> str:
        lines = [
            f"hashtags evaluated : {self.n_evaluated}",
            f"precision          : {self.precision:.4f}",
            f"fleiss kappa       : {self.kappa:.4f}",
        ]
        for domain, value in sorted(self.ndcg_at_k.items()):
            lines.append(f"ndcg@{self.k:<2d} {domain:<10s} : {value:.4f}")
        return "\n".join(lines)


def score_matrix(annotations: list[Annotation]) -> np.ndarray:
    """Items x 5 count matrix of annotator scores, for Fleiss' kappa."""
    table = np.zeros((len(annotations), MAX_SCORE - MIN_SCORE + 1), dtype=np.int64)
    for i, annotation in enumerate(annotations):
        for score in annotation.scores:
            table[i, score - MIN_SCORE] += 1
    return table


def evaluate_rankings(
    ranked: dict[str, list],
    annotations: list[Annotation],
    k: int = 10,
) -> MetricReport:
    """Score ranked output against annotations.

    ``ranked`` maps domain -> ranked entries with ``tag`` and ``domain``
    attributes (ranking order preserved). Precision compares the
    predicted domain with the gold domain over all annotated hashtags
    that were ranked; NDCG@k is computed per domain over the correctly
    classified hashtags, mirroring how the ranking would be audited.
    """
    by_tag = {a.tag: a for a in annotations}
    predicted: list[str] = []
    gold: list[str] = []
    ndcg: dict[str, float] = {}

    for domain in sorted(ranked):
        entries = ranked[domain]
        annotated = [e for e in entries if e.tag in by_tag]
        for entry in annotated:
            predicted.append(entry.domain)
            gold.append(by_tag[entry.tag].gold_domain)
        correct = [e for e in annotated if by_tag[e.tag].gold_domain == domain]
        if correct:
            relevances = [by_tag[e.tag].relevance() for e in correct]
            ndcg[domain] = ndcg_at_k(relevances, relevances, k)

    if not predicted:
        raise ValidationError("no ranked hashtag has an annotation; nothing to evaluate")
    kappa = fleiss_kappa(score_matrix(annotations)) if len(annotations) >= 1 else 0.0
    return MetricReport(
        precision=precision(predicted, gold),
        ndcg_at_k=ndcg,
        kappa=kappa,
        k=k,
        n_evaluated=len(predicted),
    )
