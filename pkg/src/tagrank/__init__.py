"""tagrank: classify microblog hashtags into news domains and rank them.

The pipeline trains paired linear SVMs (bag-of-words and topic features)
on a labeled news corpus, assigns each hashtag a domain from its
spam-filtered semantic text, and ranks hashtags within each domain by an
exponentially time-decayed hot value.
"""

from .classifier import (
    DomainClassifier,
    DomainDistribution,
    LinearModel,
    classify_text,
    load_classifier,
    margins_to_distribution,
    save_classifier,
    train_domain_classifier,
    train_ovr_svm,
)
from .config import RunConfig, build_config
from .corpus import (
    HashtagGroup,
    Microblog,
    NewsArticle,
    extract_hashtags,
    group_by_hashtag,
    load_microblogs,
    load_news_corpus,
)
from .errors import FutureTimestampError, ParseError, TagRankError, ValidationError
from .evaluation import MetricReport, fleiss_kappa, ndcg_at_k, precision
from .features import SparseVector, Vocabulary, build_vocabulary, tfidf_vector, tokenize
from .ranking import DecayParams, RankedHashtag, decay_weight, hot_value, rank_domains
from .semantic import (
    ClassifiedHashtag,
    ClusterResult,
    adaptive_threshold,
    classify_hashtag,
    semantic_text,
    threshold_clusters,
)
from .synth import SynthConfig, generate_microblogs, generate_news
from .topics import TopicDistribution, TopicModel, fit_topic_model, infer_topics

__version__ = "0.1.0"

__all__ = [
    "ClassifiedHashtag",
    "ClusterResult",
    "DecayParams",
    "DomainClassifier",
    "DomainDistribution",
    "FutureTimestampError",
    "HashtagGroup",
    "LinearModel",
    "MetricReport",
    "Microblog",
    "NewsArticle",
    "ParseError",
    "RankedHashtag",
    "RunConfig",
    "SparseVector",
    "SynthConfig",
    "TagRankError",
    "TopicDistribution",
    "TopicModel",
    "ValidationError",
    "Vocabulary",
    "adaptive_threshold",
    "build_config",
    "build_vocabulary",
    "classify_hashtag",
    "classify_text",
    "decay_weight",
    "extract_hashtags",
    "fit_topic_model",
    "fleiss_kappa",
    "generate_microblogs",
    "generate_news",
    "group_by_hashtag",
    "hot_value",
    "infer_topics",
    "load_classifier",
    "load_microblogs",
    "load_news_corpus",
    "margins_to_distribution",
    "ndcg_at_k",
    "precision",
    "rank_domains",
    "save_classifier",
    "semantic_text",
    "tfidf_vector",
    "threshold_clusters",
    "tokenize",
    "train_domain_classifier",
    "train_ovr_svm",
]
