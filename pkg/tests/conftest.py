import numpy as np
import pytest

from tagrank.classifier import train_domain_classifier
from tagrank.corpus import NewsArticle

RED_WORDS = [f"red{i}" for i in range(20)]
BLUE_WORDS = [f"blue{i}" for i in range(20)]


def make_news(words_by_cat, n_per=30, doc_len=25, seed=0):
    rng = np.random.default_rng(seed)
    articles = []
    idx = 0
    for cat, block in sorted(words_by_cat.items()):
        for _ in range(n_per):
            tokens = [block[rng.integers(len(block))] for _ in range(doc_len)]
            articles.append(NewsArticle(id=f"n{idx}", category=cat, text=" ".join(tokens)))
            idx += 1
    return articles


@pytest.fixture(scope="session")
def tiny_clf():
    """Small red/blue classifier whose vocabulary is known to the tests."""
    news = make_news({"blue": BLUE_WORDS, "red": RED_WORDS})
    return train_domain_classifier(
        news,
        min_df=1,
        max_df_ratio=1.0,
        n_topics=4,
        train_iters=60,
        infer_iters=20,
        epochs=8,
        seed=11,
    )
