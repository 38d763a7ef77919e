"""Protocol descriptor: the key=value file both parties compare before
decoding. A mismatch on any field means the two sides would silently
compute different candidate sets, so the decoder refuses to run."""

from __future__ import annotations

from pathlib import Path

from .backends import Backend
from .config import Framing, StegoConfig
from .eligibility import StopwordList


class DescriptorMismatch(RuntimeError):
    def __init__(self, key: str, expected, actual):
        super().__init__(f"descriptor mismatch: {key} expected={expected} actual={actual}")
        self.key = key


def build_descriptor(config: StegoConfig, framing: Framing, backend: Backend,
                     stopwords: StopwordList) -> dict[str, str]:
    return {
        "model_digest": backend.digest,
        "vocab_digest": backend.vocab.digest,
        "stopword_digest": stopwords.digest,
        "f": str(config.f),
        "p": repr(config.p),
        "skip_punct_num": str(config.skip_punct_num).lower(),
        "skip_stopwords": str(config.skip_stopwords).lower(),
        "skip_subwords": str(config.skip_subwords).lower(),
        "skip_capitalized": str(config.skip_capitalized).lower(),
        "safe_mode": str(config.safe_mode).lower(),
        "framing": framing.mode,
    }


def format_descriptor(values: dict[str, str]) -> str:
    return "".join(f"{k}={v}\n" for k, v in values.items())


def parse_descriptor(path) -> dict[str, str]:
    values: dict[str, str] = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, _, value = line.partition("=")
        values[key.strip()] = value.strip()
    return values


def verify_descriptor(expected: dict[str, str], config: StegoConfig, framing: Framing,
                      backend: Backend, stopwords: StopwordList) -> None:
    actual = build_descriptor(config, framing, backend, stopwords)
    for key, want in expected.items():
        if key in actual and actual[key] != want:
            raise DescriptorMismatch(key, want, actual[key])
