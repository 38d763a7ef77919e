"""Per-token eligibility classification for masking and candidate filtering."""

from __future__ import annotations

import enum
import hashlib
from importlib import resources

from .config import StegoConfig
from .tokenizer import is_continuation, is_special


class EligibilityClass(enum.Enum):
    ELIGIBLE = "eligible"
    PUNCT_OR_NUMBER = "punct_or_number"
    STOPWORD = "stopword"
    CONTINUATION_SUBWORD = "continuation_subword"
    CAPITALIZED = "capitalized"


class StopwordList:
    """Case-insensitive stopword set loaded from a one-word-per-line file.

    The digest of the raw file bytes is part of the shared protocol: the
    decoder refuses to run against a different list version.
    """

    def __init__(self, entries: set[str], digest: str):
        self.entries = entries
        self.digest = digest

    @classmethod
    def load(cls, path) -> "StopwordList":
        with open(path, "rb") as fh:
            raw = fh.read()
        return cls._parse(raw)

    @classmethod
    def default(cls) -> "StopwordList":
        raw = resources.files("maskstego.data").joinpath("stopwords_en.txt").read_bytes()
        return cls._parse(raw)

    @classmethod
    def _parse(cls, raw: bytes) -> "StopwordList":
        digest = hashlib.sha256(raw).hexdigest()
        entries = {line.strip().lower() for line in raw.decode("utf-8").splitlines() if line.strip()}
        return cls(entries, digest)

    def __contains__(self, word: str) -> bool:
        return word.lower() in self.entries

    def __len__(self) -> int:
        return len(self.entries)


def classify(token: str, config: StegoConfig, stopwords: StopwordList) -> EligibilityClass:
    """First matching class in fixed precedence order; a skip class is only
    reported when its flag is on.

    Rules (protocol constants): punct_or_number means no alphabetic
    character at all; capitalized means at least one uppercase letter.
    """
    if config.skip_subwords and is_continuation(token):
        return EligibilityClass.CONTINUATION_SUBWORD
    if config.skip_punct_num and not any(ch.isalpha() for ch in token):
        return EligibilityClass.PUNCT_OR_NUMBER
    if config.skip_stopwords and token in stopwords:
        return EligibilityClass.STOPWORD
    if config.skip_capitalized and any(ch.isupper() for ch in token):
        return EligibilityClass.CAPITALIZED
    return EligibilityClass.ELIGIBLE


def is_eligible(token: str, config: StegoConfig, stopwords: StopwordList) -> bool:
    """Eligible for masking/substitution. Bracketed special tokens such as
    [UNK] are never eligible regardless of flags."""
    if is_special(token):
        return False
    return classify(token, config, stopwords) is EligibilityClass.ELIGIBLE
