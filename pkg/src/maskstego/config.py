"""Shared encoder/decoder configuration.

Every field here is part of the protocol both sides must agree on; the
protocol descriptor (see descriptor.py) serializes it next to the resource
digests.
"""

from __future__ import annotations

from dataclasses import dataclass

HEADER_BITS = 32


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Framing:
    """How the receiver learns the message length.

    mode "fixed": the bit count is agreed out of band (`bit_count`).
    mode "header": a HEADER_BITS big-endian length header is prepended.
    """

    mode: str
    bit_count: int | None = None
    header_width: int = HEADER_BITS

    @classmethod
    def fixed(cls, bit_count: int) -> "Framing":
        return cls(mode="fixed", bit_count=bit_count)

    @classmethod
    def header(cls) -> "Framing":
        return cls(mode="header")


@dataclass(frozen=True)
class StegoConfig:
    f: int = 3
    p: float = 0.02
    skip_punct_num: bool = True
    skip_stopwords: bool = True
    skip_subwords: bool = True
    skip_capitalized: bool = True
    safe_mode: bool = True


def validate_config(config: StegoConfig) -> StegoConfig:
    if config.f < 1:
        raise ConfigError(f"masking interval f must be >= 1, got {config.f}")
    if not (0.0 < config.p < 1.0):
        raise ConfigError(f"probability threshold p must be in (0,1), got {config.p}")
    if config.safe_mode and not config.skip_subwords:
        # The retokenization check is only exactly reproducible by the
        # receiver when at most one planned position falls inside any
        # subword run, which skipping continuations guarantees.
        raise ConfigError("safe_mode requires skip_subwords")
    return config


def validate_framing(framing: Framing) -> Framing:
    if framing.mode not in ("fixed", "header"):
        raise ConfigError(f"unknown framing mode {framing.mode!r}")
    if framing.mode == "fixed":
        if framing.bit_count is None or framing.bit_count < 1:
            raise ConfigError("fixed framing needs a positive bit count")
    if framing.mode == "header" and framing.header_width != HEADER_BITS:
        raise ConfigError(f"header framing width is fixed at {HEADER_BITS} bits")
    return framing
