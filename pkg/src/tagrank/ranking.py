"""Domain-sensitive hot-value ranking.

A hashtag's hot value combines its post volume, the recency of each
post under an exponential decay kernel, and the probability that the
hashtag belongs to its assigned domain:

    H = p * sum_j exp(-(t_p - t_j) / gamma)

summed over every post that carries the tag (the spam filter only
shapes p, not the volume term). Time is integer epoch seconds and the
default kernel parameter is 7 days = 604800 s.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .corpus import HashtagGroup
from .errors import FutureTimestampError, ValidationError
from .semantic import ClassifiedHashtag

SECONDS_PER_DAY = 86400
DEFAULT_GAMMA_SECONDS = 7 * SECONDS_PER_DAY


@dataclass(frozen=True)
class DecayParams:
    """Decay kernel parameter and the reference 'present time'."""

    gamma: float = DEFAULT_GAMMA_SECONDS  # seconds
    t_p: int = 0  # epoch seconds

    def __post_init__(self):
        if self.gamma <= 0:
            raise ValidationError(f"gamma must be positive, got {self.gamma}")


@dataclass(frozen=True)
class RankedHashtag:
    tag: str
    domain: str
    hot: float
    p: float
    n_posts: int


def decay_weight(t_p: int, t_j: int, gamma: float) -> float:
    """Recency weight exp(-(t_p - t_j) / gamma), in (0, 1]."""
    if gamma <= 0:
        raise ValidationError(f"gamma must be positive, got {gamma}")
    if t_j > t_p:
        raise FutureTimestampError(
            f"post timestamp {t_j} is later than reference time {t_p}"
        )
    return math.exp(-(t_p - t_j) / gamma)


def hot_value(group: HashtagGroup, classified: ClassifiedHashtag, params: DecayParams) -> float:
    """Hot value over ALL of the group's posts, scaled by p."""
    if classified.tag != group.tag:
        raise ValidationError(
            f"classification is for {classified.tag!r}, group is {group.tag!r}"
        )
    total = 0.0
    for post in group.posts:
        total += decay_weight(params.t_p, post.timestamp, params.gamma)
    return classified.p * total


def rank_domains(
    classified: list[tuple[HashtagGroup, ClassifiedHashtag]],
    params: DecayParams,
    k: int,
    domains: list[str] | None = None,
) -> dict[str, list[RankedHashtag]]:
    """Top-k hashtags per domain, by hot value descending then tag.

    Passing ``domains`` guarantees a (possibly empty) entry for every
    known domain, not just those that received hashtags.
    """
    if k < 1:
        raise ValidationError(f"k must be >= 1, got {k}")
    buckets: dict[str, list[RankedHashtag]] = {d: [] for d in (domains or [])}
    for group, tagged in classified:
        entry = RankedHashtag(
            tag=tagged.tag,
            domain=tagged.domain,
            hot=hot_value(group, tagged, params),
            p=tagged.p,
            n_posts=group.size,
        )
        buckets.setdefault(tagged.domain, []).append(entry)
    return {
        domain: sorted(entries, key=lambda e: (-e.hot, e.tag))[:k]
        for domain, entries in buckets.items()
    }
