import numpy as np
import pytest

from maskstego import HashBackend, StegoConfig, StopwordList, Vocabulary
from maskstego.eligibility import is_eligible
from importlib import resources


@pytest.fixture(scope="session")
def vocab():
    with resources.as_file(resources.files("maskstego.data") / "demo_vocab.txt") as p:
        return Vocabulary.load(p)


@pytest.fixture(scope="session")
def stopwords():
    return StopwordList.default()


@pytest.fixture(scope="session")
def default_config():
    return StegoConfig()


@pytest.fixture(scope="session")
def hash_backend(vocab):
    return HashBackend(1234, vocab)


@pytest.fixture(scope="session")
def word_pools(vocab, stopwords):
    """Content / stopword pools drawn from the demo vocabulary."""
    cfg = StegoConfig()
    content = [t for t in vocab.tokens
               if t.isalpha() and t.islower() and len(t) > 1
               and is_eligible(t, cfg, stopwords)]
    stop = [t for t in ("the", "a", "on", "in", "and", "of", "to") if t in vocab.index]
    return content, stop


def make_sentence(rng, content, stop, n_words=9):
    words = ["The"]
    for _ in range(n_words):
        pool = stop if rng.random() < 0.3 else content
        words.append(pool[rng.integers(len(pool))])
    return " ".join(words) + "."


def make_document(rng, content, stop, n_sentences, n_words=9):
    return " ".join(make_sentence(rng, content, stop, n_words) for _ in range(n_sentences))


@pytest.fixture(scope="session")
def synthetic_corpus(word_pools):
    """200 fixed synthetic documents for trade-off measurements."""
    content, stop = word_pools
    rng = np.random.Generator(np.random.Philox(key=99))
    return [make_document(rng, content, stop, n_sentences=30) for _ in range(200)]
