"""Spam-filtered semantic text for hashtags.

A hashtag's posts are vectorized in the news-trained TF-IDF space, then
single-link clustered: posts whose Euclidean distance is within a
self-adaptive threshold (the mean over all pairwise distances) are
linked, connected components form clusters, and the maximal cluster is
kept as the hashtag's semantic text. Spam posts rarely resemble the
on-topic discussion or each other, so they fall out of the big cluster.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass

import numpy as np
from scipy import sparse as sp

from .classifier import DomainClassifier, DomainDistribution, classify_text
from .corpus import HashtagGroup, Microblog
from .errors import ValidationError
from .features import SparseVector, tfidf_vector, tokenize

DEFAULT_MAX_POSTS = 2000


@dataclass(frozen=True)
class ClusterResult:
    """Partition of a post set, plus which cluster was kept."""

    clusters: tuple[tuple[str, ...], ...]  # post ids per cluster
    threshold: float
    chosen: int

    def chosen_ids(self) -> tuple[str, ...]:
        return self.clusters[self.chosen]


@dataclass(frozen=True)
class ClassifiedHashtag:
    """A hashtag with its assigned domain and classification evidence."""

    tag: str
    domain: str
    p: float
    distribution: DomainDistribution
    semantic_post_ids: tuple[str, ...]


def _to_csr(vectors: list[SparseVector]) -> sp.csr_matrix:
    n = len(vectors)
    dim = 0
    for vec in vectors:
        if vec.indices.size:
            dim = max(dim, int(vec.indices[-1]) + 1)
    indptr = np.zeros(n + 1, dtype=np.int64)
    for i, vec in enumerate(vectors):
        indptr[i + 1] = indptr[i] + vec.indices.size
    indices = np.concatenate([v.indices for v in vectors]) if n else np.empty(0, np.int64)
    data = np.concatenate([v.values for v in vectors]) if n else np.empty(0, np.float64)
    return sp.csr_matrix((data, indices, indptr), shape=(n, max(dim, 1)))


def pairwise_distances(vectors: list[SparseVector]) -> np.ndarray:
    """Dense Euclidean distance matrix over sparse vectors."""
    matrix = _to_csr(vectors)
    gram = np.asarray((matrix @ matrix.T).todense(), dtype=np.float64)
    sq_norms = gram.diagonal().copy()
    sq = sq_norms[:, None] + sq_norms[None, :] - 2.0 * gram
    np.maximum(sq, 0.0, out=sq)
    dist = np.sqrt(sq)
    np.fill_diagonal(dist, 0.0)
    return dist


def adaptive_threshold(vectors: list[SparseVector], method: str = "pairwise") -> float:
    """Self-adaptive clustering threshold for a post set.

    ``pairwise`` (the default) is the mean Euclidean distance over all
    unordered pairs; ``centroid`` is the mean distance to the centroid,
    kept for comparison. A single vector yields 0.
    """
    if not vectors:
        raise ValidationError("adaptive threshold needs at least one vector")
    n = len(vectors)
    if n == 1:
        return 0.0
    if method == "pairwise":
        dist = pairwise_distances(vectors)
        iu = np.triu_indices(n, k=1)
        return float(dist[iu].mean())
    if method == "centroid":
        matrix = _to_csr(vectors).toarray()
        centroid = matrix.mean(axis=0)
        return float(np.sqrt(((matrix - centroid) ** 2).sum(axis=1)).mean())
    raise ValidationError(f"unknown threshold method {method!r}")


class _UnionFind:
    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, u: int) -> int:
        root = u
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[u] != root:
            self.parent[u], u = root, self.parent[u]
        return root

    def union(self, u: int, v: int) -> None:
        ru, rv = self.find(u), self.find(v)
        if ru != rv:
            self.parent[max(ru, rv)] = min(ru, rv)


def threshold_clusters(
    vectors: list[SparseVector],
    tau: float,
    ids: list[str] | None = None,
    timestamps: list[int] | None = None,
    strict: bool = False,
) -> ClusterResult:
    """Single-link clusters of the thresholded distance graph.

    Posts i and j are linked when distance(i, j) <= tau; ``strict`` keeps
    the literal strict inequality instead (which makes groups of
    identical posts degenerate to singletons at tau = 0, hence the
    inclusive default). The chosen cluster is the largest one; ties go
    to the cluster holding the earliest timestamp, then the smallest id.
    """
    if tau < 0:
        raise ValidationError(f"tau must be >= 0, got {tau}")
    n = len(vectors)
    if not n:
        raise ValidationError("cannot cluster an empty vector list")
    if ids is None:
        ids = [str(i) for i in range(n)]
    if timestamps is None:
        timestamps = [0] * n
    if len(ids) != n or len(timestamps) != n:
        raise ValidationError("ids and timestamps must align with vectors")

    dist = pairwise_distances(vectors)
    uf = _UnionFind(n)
    for i in range(n):
        row = dist[i]
        for j in range(i + 1, n):
            linked = row[j] < tau if strict else row[j] <= tau
            if linked:
                uf.union(i, j)

    members: dict[int, list[int]] = {}
    for i in range(n):
        members.setdefault(uf.find(i), []).append(i)
    # stable order: by first member index
    clusters = [members[root] for root in sorted(members, key=lambda r: members[r][0])]

    def tie_key(cluster: list[int]):
        return (
            -len(cluster),
            min(timestamps[i] for i in cluster),
            min(ids[i] for i in cluster),
        )

    chosen = min(range(len(clusters)), key=lambda c: tie_key(clusters[c]))
    return ClusterResult(
        clusters=tuple(tuple(ids[i] for i in cluster) for cluster in clusters),
        threshold=float(tau),
        chosen=chosen,
    )


def _subsample(posts: tuple[Microblog, ...], cap: int, seed: int, tag: str):
    if len(posts) <= cap:
        return posts
    # per-tag stream so different hashtags do not share subsample patterns
    rng = np.random.default_rng([seed, zlib.crc32(tag.encode("utf-8"))])
    keep = np.sort(rng.choice(len(posts), size=cap, replace=False))
    return tuple(posts[i] for i in keep)


def cluster_group(
    group: HashtagGroup,
    clf: DomainClassifier,
    max_posts: int = DEFAULT_MAX_POSTS,
    seed: int = 0,
    strict: bool = False,
    threshold_method: str = "pairwise",
) -> tuple[ClusterResult, tuple[Microblog, ...]]:
    """Cluster a hashtag group and return (result, considered posts)."""
    posts = _subsample(group.posts, max_posts, seed, group.tag)
    vectors = [tfidf_vector(tokenize(post.text), clf.vocab) for post in posts]
    tau = adaptive_threshold(vectors, method=threshold_method)
    result = threshold_clusters(
        vectors,
        tau,
        ids=[post.id for post in posts],
        timestamps=[post.timestamp for post in posts],
        strict=strict,
    )
    return result, posts


def chosen_posts(result: ClusterResult, posts: tuple[Microblog, ...]) -> list[Microblog]:
    chosen = set(result.chosen_ids())
    return [post for post in posts if post.id in chosen]


def semantic_text(
    group: HashtagGroup,
    clf: DomainClassifier,
    max_posts: int = DEFAULT_MAX_POSTS,
    seed: int = 0,
    strict: bool = False,
) -> list[Microblog]:
    """Posts of the maximal cluster, in original order."""
    result, posts = cluster_group(group, clf, max_posts=max_posts, seed=seed, strict=strict)
    return chosen_posts(result, posts)


def classify_semantic_posts(
    tag: str, posts: list[Microblog], clf: DomainClassifier, seed: int = 0
) -> ClassifiedHashtag:
    """Classify a hashtag from its already-selected semantic posts.

    The posts are concatenated in original order into one document; ties
    on the argmax go to the lexicographically smaller label.
    """
    tokens = tokenize(" ".join(post.text for post in posts))
    dist = classify_text(tokens, clf, seed=seed)
    return ClassifiedHashtag(
        tag=tag,
        domain=dist.top_label(),
        p=dist.top_prob(),
        distribution=dist,
        semantic_post_ids=tuple(post.id for post in posts),
    )


def classify_hashtag(
    group: HashtagGroup,
    clf: DomainClassifier,
    max_posts: int = DEFAULT_MAX_POSTS,
    seed: int = 0,
    strict: bool = False,
) -> ClassifiedHashtag:
    """Classify a hashtag from its spam-filtered semantic text."""
    posts = semantic_text(group, clf, max_posts=max_posts, seed=seed, strict=strict)
    return classify_semantic_posts(group.tag, posts, clf, seed=seed)
