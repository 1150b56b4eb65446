"""Bag-of-words features: tokenization, vocabulary and TF-IDF vectors.

Han text is tokenized into overlapping character bigrams instead of
running a dictionary segmenter; everything else becomes lowercased
alphanumeric runs. TF-IDF uses the smoothed idf

    idf(t) = ln((1 + n_docs) / (1 + doc_freq[t])) + 1

and vectors are L2-normalized, so Euclidean distances between non-zero
vectors stay within [0, sqrt(2)].
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .errors import ParseError, ValidationError

VOCABULARY_FORMAT_VERSION = 1


def _is_han(ch: str) -> bool:
    code = ord(ch)
    return (
        0x4E00 <= code <= 0x9FFF      # CJK Unified Ideographs
        or 0x3400 <= code <= 0x4DBF   # Extension A
        or 0xF900 <= code <= 0xFAFF   # Compatibility Ideographs
    )


def tokenize(text: str) -> list[str]:
    """Lowercased tokens: alphanumeric runs, with Han runs as bigrams.

    A run of n >= 2 consecutive Han characters yields its n-1 overlapping
    bigrams; an isolated Han character is kept as a unigram. Punctuation
    and symbols are dropped.
    """
    tokens: list[str] = []
    run: list[str] = []
    run_han = False

    def flush():
        if not run:
            return
        word = "".join(run)
        if run_han:
            if len(word) == 1:
                tokens.append(word)
            else:
                tokens.extend(word[i : i + 2] for i in range(len(word) - 1))
        else:
            tokens.append(word.lower())
        run.clear()

    for ch in text:
        if _is_han(ch):
            if run and not run_han:
                flush()
            run_han = True
            run.append(ch)
        elif ch.isalnum():
            if run and run_han:
                flush()
            run_han = False
            run.append(ch)
        else:
            flush()
    flush()
    return tokens


@dataclass(frozen=True)
class Vocabulary:
    """Immutable mapping between terms and contiguous feature indices."""

    terms: tuple[str, ...]
    term_to_index: dict[str, int]
    doc_freq: np.ndarray
    n_docs: int

    def __len__(self) -> int:
        return len(self.terms)


def build_vocabulary(
    docs: list[list[str]], min_df: int = 2, max_df_ratio: float = 0.5
) -> Vocabulary:
    """Build a vocabulary from tokenized documents.

    Keeps terms with min_df <= doc_freq <= max_df_ratio * n_docs; terms
    are sorted lexicographically so indices are deterministic.
    """
    if not docs:
        raise ValidationError("cannot build a vocabulary from an empty document list")
    if min_df < 1:
        raise ValidationError(f"min_df must be >= 1, got {min_df}")
    if not 0.0 < max_df_ratio <= 1.0:
        raise ValidationError(f"max_df_ratio must be in (0, 1], got {max_df_ratio}")

    df_counter: Counter[str] = Counter()
    for tokens in docs:
        df_counter.update(set(tokens))

    n_docs = len(docs)
    max_df = max_df_ratio * n_docs
    terms = sorted(t for t, df in df_counter.items() if min_df <= df <= max_df)
    doc_freq = np.array([df_counter[t] for t in terms], dtype=np.int64)
    return Vocabulary(
        terms=tuple(terms),
        term_to_index={t: i for i, t in enumerate(terms)},
        doc_freq=doc_freq,
        n_docs=n_docs,
    )


class SparseVector:
    """Sparse feature vector with sorted, unique indices.

    Stored as parallel numpy arrays for cheap dot products and distance
    computation. A vector with no entries is the zero vector.
    """

    __slots__ = ("indices", "values")

    def __init__(self, indices: np.ndarray, values: np.ndarray):
        indices = np.asarray(indices, dtype=np.int64)
        values = np.asarray(values, dtype=np.float64)
        if indices.shape != values.shape:
            raise ValidationError("indices and values must have equal length")
        if indices.size:
            if np.any(np.diff(indices) <= 0):
                raise ValidationError("indices must be strictly increasing")
            if not np.all(np.isfinite(values)):
                raise ValidationError("weights must be finite")
        self.indices = indices
        self.values = values

    @classmethod
    def from_entries(cls, entries) -> "SparseVector":
        entries = sorted(entries)
        idx = np.array([i for i, _ in entries], dtype=np.int64)
        val = np.array([v for _, v in entries], dtype=np.float64)
        return cls(idx, val)

    @property
    def entries(self) -> list[tuple[int, float]]:
        return list(zip(self.indices.tolist(), self.values.tolist()))

    @property
    def nnz(self) -> int:
        return int(self.indices.size)

    def norm(self) -> float:
        return float(np.sqrt(np.dot(self.values, self.values)))

    def dot(self, other: "SparseVector") -> float:
        if not self.indices.size or not other.indices.size:
            return 0.0
        # intersect the two sorted index sets
        common, left, right = np.intersect1d(
            self.indices, other.indices, assume_unique=True, return_indices=True
        )
        if not common.size:
            return 0.0
        return float(np.dot(self.values[left], other.values[right]))

    def distance(self, other: "SparseVector") -> float:
        sq = self.dot(self) + other.dot(other) - 2.0 * self.dot(other)
        return float(np.sqrt(max(sq, 0.0)))

    def __eq__(self, other):
        return (
            isinstance(other, SparseVector)
            and np.array_equal(self.indices, other.indices)
            and np.array_equal(self.values, other.values)
        )

    def __repr__(self):
        return f"SparseVector(nnz={self.nnz})"


def tfidf_vector(tokens: list[str], vocab: Vocabulary) -> SparseVector:
    """L2-normalized TF-IDF vector; out-of-vocabulary tokens are ignored.

    A token list with no in-vocabulary terms yields the zero vector.
    """
    counts: Counter[int] = Counter()
    lookup = vocab.term_to_index
    for token in tokens:
        idx = lookup.get(token)
        if idx is not None:
            counts[idx] += 1
    if not counts:
        return SparseVector(np.empty(0, dtype=np.int64), np.empty(0, dtype=np.float64))
    idx = np.fromiter(sorted(counts), dtype=np.int64, count=len(counts))
    tf = np.array([counts[i] for i in idx], dtype=np.float64)
    idf = np.log((1.0 + vocab.n_docs) / (1.0 + vocab.doc_freq[idx])) + 1.0
    weights = tf * idf
    weights /= np.sqrt(np.dot(weights, weights))
    return SparseVector(idx, weights)


def vocabulary_to_json(vocab: Vocabulary) -> dict:
    return {
        "format_version": VOCABULARY_FORMAT_VERSION,
        "terms": list(vocab.terms),
        "doc_freq": vocab.doc_freq.tolist(),
        "n_docs": vocab.n_docs,
    }


def vocabulary_from_json(payload: dict, path="<vocabulary>") -> Vocabulary:
    if payload.get("format_version") != VOCABULARY_FORMAT_VERSION:
        raise ParseError(path, 1, "unsupported vocabulary format_version")
    terms = tuple(payload["terms"])
    return Vocabulary(
        terms=terms,
        term_to_index={t: i for i, t in enumerate(terms)},
        doc_freq=np.asarray(payload["doc_freq"], dtype=np.int64),
        n_docs=int(payload["n_docs"]),
    )
