"""Corpus ingestion: labeled news articles and hashtagged microblogs.

Both datasets are read from JSONL files (one UTF-8 JSON object per line):

    news:      {"id": str, "category": str, "text": str}
    microblog: {"id": str, "text": str, "timestamp": int, "hashtags": [str]?}

When a microblog record omits ``hashtags``, tags are extracted from the
text with :func:`extract_hashtags`.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from .errors import ParseError, ValidationError

HASHTAG_STYLES = ("weibo", "twitter")

# Weibo delimits tags as #tag#; pairs are matched left to right, so
# "#a#b#c#" yields a and c (the middle "b" has no delimiter pair).
_WEIBO_TAG = re.compile(r"#([^#]+)#")
_TWITTER_TAG = re.compile(r"#(\w+)", re.UNICODE)


@dataclass(frozen=True)
class NewsArticle:
    """A labeled training document (title and body joined into ``text``)."""

    id: str
    category: str
    text: str

    def __post_init__(self):
        if not self.id:
            raise ValidationError("news article id must be non-empty")
        if not self.category:
            raise ValidationError(f"news article {self.id!r}: category must be non-empty")
        if not self.text.strip():
            raise ValidationError(f"news article {self.id!r}: text must be non-empty")


@dataclass(frozen=True)
class Microblog:
    """A timestamped post carrying zero or more hashtags."""

    id: str
    text: str
    timestamp: int
    hashtags: tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if not self.id:
            raise ValidationError("microblog id must be non-empty")
        if self.timestamp < 0:
            raise ValidationError(
                f"microblog {self.id!r}: negative timestamp {self.timestamp}"
            )
        for tag in self.hashtags:
            if not tag or "#" in tag:
                raise ValidationError(
                    f"microblog {self.id!r}: invalid hashtag {tag!r}"
                )


@dataclass(frozen=True)
class HashtagGroup:
    """All microblogs that carry one hashtag (the tag's N_i posts)."""

    tag: str
    posts: tuple[Microblog, ...]

    def __post_init__(self):
        if not self.posts:
            raise ValidationError(f"hashtag group {self.tag!r} has no posts")
        for post in self.posts:
            if self.tag not in post.hashtags:
                raise ValidationError(
                    f"post {post.id!r} grouped under {self.tag!r} but does not carry it"
                )

    @property
    def size(self) -> int:
        return len(self.posts)


def extract_hashtags(text: str, style: str = "weibo") -> list[str]:
    """Extract hashtags from post text in appearance order, deduplicated.

    ``weibo`` reads #...# delimited pairs (an unmatched '#' yields
    nothing); ``twitter`` reads maximal word-character runs after '#'.
    The first occurrence wins on duplicates.
    """
    if style not in HASHTAG_STYLES:
        raise ValidationError(f"unknown hashtag style {style!r}")
    pattern = _WEIBO_TAG if style == "weibo" else _TWITTER_TAG
    seen: set[str] = set()
    tags: list[str] = []
    for match in pattern.finditer(text):
        tag = match.group(1)
        if tag not in seen:
            seen.add(tag)
            tags.append(tag)
    return tags


def iter_jsonl(path):
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(path, line_no, f"invalid JSON ({exc.msg})") from exc
            if not isinstance(record, dict):
                raise ParseError(path, line_no, "record is not a JSON object")
            yield line_no, record


def _require(record, key, kind, path, line_no):
    if key not in record:
        raise ParseError(path, line_no, f"missing key {key!r}")
    value = record[key]
    # bool passes isinstance(..., int), which is never what we want here
    if not isinstance(value, kind) or isinstance(value, bool):
        raise ParseError(path, line_no, f"key {key!r} must be {kind.__name__}")
    return value


def load_news_corpus(path) -> list[NewsArticle]:
    """Load a news JSONL file, preserving file order.

    Raises FileNotFoundError for a missing file, ParseError (with line
    number) for malformed records, and ValidationError for duplicate ids
    or invariant violations.
    """
    articles: list[NewsArticle] = []
    seen_ids: set[str] = set()
    for line_no, record in iter_jsonl(path):
        article_id = _require(record, "id", str, path, line_no)
        category = _require(record, "category", str, path, line_no)
        text = _require(record, "text", str, path, line_no)
        if article_id in seen_ids:
            raise ValidationError(f"{path}:{line_no}: duplicate article id {article_id!r}")
        seen_ids.add(article_id)
        articles.append(NewsArticle(id=article_id, category=category, text=text))
    return articles


def load_microblogs(path, style: str = "weibo") -> list[Microblog]:
    """Load a microblog JSONL file, preserving file order.

    An explicit ``hashtags`` field wins over extraction so upstream tools
    can pre-clean tags; otherwise tags are extracted from ``text`` using
    ``style``.
    """
    posts: list[Microblog] = []
    seen_ids: set[str] = set()
    for line_no, record in iter_jsonl(path):
        post_id = _require(record, "id", str, path, line_no)
        text = _require(record, "text", str, path, line_no)
        timestamp = _require(record, "timestamp", int, path, line_no)
        if post_id in seen_ids:
            raise ValidationError(f"{path}:{line_no}: duplicate microblog id {post_id!r}")
        seen_ids.add(post_id)
        if "hashtags" in record:
            raw = record["hashtags"]
            if not isinstance(raw, list) or not all(isinstance(t, str) for t in raw):
                raise ParseError(path, line_no, "key 'hashtags' must be a list of strings")
            hashtags = tuple(raw)
        else:
            hashtags = tuple(extract_hashtags(text, style))
        try:
            posts.append(
                Microblog(id=post_id, text=text, timestamp=timestamp, hashtags=hashtags)
            )
        except ValidationError as exc:
            raise ValidationError(f"{path}:{line_no}: {exc}") from exc
    return posts


def label_set(articles: list[NewsArticle]) -> list[str]:
    """Sorted distinct categories present in a news corpus."""
    return sorted({article.category for article in articles})


def group_by_hashtag(posts: list[Microblog]) -> list[HashtagGroup]:
    """Group posts by hashtag; a post with k tags lands in k groups.

    Groups come back sorted by tag; posts within a group keep input order.
    """
    by_tag: dict[str, list[Microblog]] = {}
    for post in posts:
        for tag in post.hashtags:
            by_tag.setdefault(tag, []).append(post)
    return [
        HashtagGroup(tag=tag, posts=tuple(by_tag[tag])) for tag in sorted(by_tag)
    ]


def news_to_record(article: NewsArticle) -> dict:
    return {"id": article.id, "category": article.category, "text": article.text}


def microblog_to_record(post: Microblog) -> dict:
    return {
        "id": post.id,
        "text": post.text,
        "timestamp": post.timestamp,
        "hashtags": list(post.hashtags),
    }


def write_jsonl(path, records) -> None:
    """Write dict records as UTF-8 JSONL with LF line endings."""
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for record in records:
            handle.write(json.dumps(record, ensure_ascii=False))
            handle.write("\n")
