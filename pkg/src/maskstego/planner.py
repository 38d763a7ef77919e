"""Mask position planning: identically reproducible by sender and receiver."""

from __future__ import annotations

from .config import StegoConfig
from .eligibility import StopwordList, is_eligible
from .tokenizer import TokenSeq

MaskPlan = tuple[int, ...]


def compute_mask_plan(tokens: TokenSeq, config: StegoConfig, stopwords: StopwordList) -> MaskPlan:
    """Select every f-th eligible token of one sentence, left to right.

    The interval counter advances only on eligible tokens (protocol
    constant), so the plan depends only on the eligibility pattern of the
    sentence: replacing a planned token with any other eligible token
    leaves the plan unchanged.
    """
    plan: list[int] = []
    eligible_seen = 0
    for i, tok in enumerate(tokens):
        if not is_eligible(tok, config, stopwords):
            continue
        eligible_seen += 1
        if eligible_seen % config.f == 0:
            plan.append(i)
    return tuple(plan)
