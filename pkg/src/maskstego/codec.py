"""Encode/decode engine: candidate sets, block coding, sentence framing.

The encoder walks the cover text sentence by sentence. In each sentence the
planned positions are masked simultaneously, the backend supplies one
distribution per position, and each position's candidate set determines how
many message bits it carries (the block-code rule: the largest n with
2**n <= c). The decoder performs the mirror-image procedure on the stego
text alone; every step here is a pure function of inputs both parties
share, which is the whole correctness argument.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bits import BitCursor, BitString, chunk_size
from .config import Framing, StegoConfig, validate_config, validate_framing
from .backends import Backend, Distribution
from .eligibility import StopwordList, is_eligible
from .planner import compute_mask_plan
from .tokenizer import MASK_TOKEN, TokenSeq, Vocabulary, split_sentences


class CapacityExhausted(RuntimeError):
    """Cover text ended before the framed message was fully embedded."""

    def __init__(self, bits_embedded: int, needed: int):
        super().__init__(
            f"cover text exhausted after embedding {bits_embedded} of {needed} bits")
        self.bits_embedded = bits_embedded
        self.needed = needed


class DecodeMismatch(RuntimeError):
    """A stego token at a planned position is not in its candidate set."""


class HeaderUnderflow(RuntimeError):
    """Fewer bits recovered than the framing requires."""


@dataclass(frozen=True)
class CandidateSet:
    """Ordered substitution candidates for one masked position."""

    entries: tuple[tuple[str, float], ...]

    @property
    def c(self) -> int:
        return len(self.entries)

    @property
    def n(self) -> int:
        return chunk_size(self.c)

    def rank_of(self, token: str) -> int | None:
        for i, (tok, _) in enumerate(self.entries):
            if tok == token:
                return i
        return None


@dataclass(frozen=True)
class StegoResult:
    stego_text: str
    bits_embedded: int
    padding_bits: int
    sentences_used: int
    positions_edited: int
    positions_planned: int
    positions_zero_capacity: int


def check_retokenization_safe(vocab: Vocabulary, tokens: TokenSeq, position: int,
                              candidate: str) -> bool:
    """True iff placing `candidate` at `position`, detokenizing, and
    re-tokenizing reproduces exactly the substituted token sequence.

    A failure here means the receiver's tokenizer would see different token
    boundaries than the sender intended, shifting every subsequent mask
    position in the sentence.
    """
    substituted = tokens[:position] + (candidate,) + tokens[position + 1:]
    return vocab.tokenize(vocab.detokenize(substituted)) == substituted


def candidate_set(dist: Distribution, tokens: TokenSeq, position: int,
                  config: StegoConfig, stopwords: StopwordList,
                  vocab: Vocabulary) -> CandidateSet:
    """Above-threshold candidates for one position, with skip-class items
    dropped, sorted by probability descending then vocabulary index
    ascending. In safe mode, candidates whose substitution would not survive
    retokenization are dropped before the count is taken, so encoder and
    decoder agree on the set exactly."""
    picked: list[tuple[float, int, str]] = []
    for idx, prob in dist.probs.items():
        if prob <= config.p:
            continue
        token = vocab.token(idx)
        if not is_eligible(token, config, stopwords):
            continue
        if config.safe_mode and not check_retokenization_safe(vocab, tokens, position, token):
            continue
        picked.append((-prob, idx, token))
    picked.sort()
    return CandidateSet(tuple((token, -negp) for negp, _, token in picked))


@dataclass(frozen=True)
class SentenceOutcome:
    tokens: TokenSeq
    positions_planned: int
    positions_zero_capacity: int
    positions_edited: int


def _masked(tokens: TokenSeq, plan: tuple[int, ...]) -> TokenSeq:
    out = list(tokens)
    for pos in plan:
        out[pos] = MASK_TOKEN
    return tuple(out)


def encode_sentence(tokens: TokenSeq, cursor: BitCursor, backend: Backend,
                    config: StegoConfig, stopwords: StopwordList) -> SentenceOutcome:
    """Embed bits into one sentence, mutating the cursor.

    Positions reached after the cursor is exhausted keep their original
    (eligible) tokens; the decoder stops at the same point and never
    inspects them.
    """
    plan = compute_mask_plan(tokens, config, stopwords)
    if not plan:
        return SentenceOutcome(tokens, 0, 0, 0)
    dists = backend.predict(_masked(tokens, plan), plan)
    work = list(tokens)
    zero = edited = 0
    for pos, dist in zip(plan, dists):
        if cursor.exhausted:
            break
        cands = candidate_set(dist, tuple(work), pos, config, stopwords, backend.vocab)
        if cands.n == 0:
            zero += 1
            continue
        value = cursor.read(cands.n).to_int()
        work[pos] = cands.entries[value][0]
        edited += 1
    return SentenceOutcome(tuple(work), len(plan), zero, edited)


def encode(cover: str, message: BitString, config: StegoConfig, backend: Backend,
           stopwords: StopwordList, framing: Framing | None = None) -> StegoResult:
    if len(message) == 0:
        raise ValueError("message must be non-empty")
    validate_config(config)
    if framing is None:
        framing = Framing.fixed(len(message))
    validate_framing(framing)
    if framing.mode == "header":
        framed = BitString.concat(BitString.from_int(len(message), framing.header_width), message)
    else:
        if framing.bit_count != len(message):
            raise ValueError("fixed framing bit count does not match message length")
        framed = message

    cursor = BitCursor(framed)
    sentences = split_sentences(cover)
    out_sentences: list[str] = []
    planned = zero = edited = 0
    for sentence in sentences:
        tokens = backend.vocab.tokenize(sentence)
        outcome = encode_sentence(tokens, cursor, backend, config, stopwords)
        out_sentences.append(backend.vocab.detokenize(outcome.tokens))
        planned += outcome.positions_planned
        zero += outcome.positions_zero_capacity
        edited += outcome.positions_edited
        if cursor.exhausted:
            break
    if not cursor.exhausted:
        raise CapacityExhausted(cursor.offset, len(framed))
    return StegoResult(
        stego_text=" ".join(out_sentences),
        bits_embedded=cursor.offset,
        padding_bits=cursor.padding,
        sentences_used=len(out_sentences),
        positions_edited=edited,
        positions_planned=planned,
        positions_zero_capacity=zero,
    )


def decode(stego: str, config: StegoConfig, backend: Backend,
           stopwords: StopwordList, framing: Framing) -> BitString:
    """Recover the message from the stego text alone.

    Re-splits, re-plans, re-masks, and rebuilds every candidate set exactly
    as the encoder did, then reads each stego token's rank as its bit chunk.
    """
    validate_config(config)
    validate_framing(framing)
    acc: list[int] = []
    # Total framed bits to recover; unknown in header mode until the header
    # itself has been read.
    target = framing.bit_count if framing.mode == "fixed" else None
    header_seen = False
    declared = None

    for sentence in split_sentences(stego):
        if target is not None and len(acc) >= target:
            break
        tokens = backend.vocab.tokenize(sentence)
        plan = compute_mask_plan(tokens, config, stopwords)
        if not plan:
            continue
        dists = backend.predict(_masked(tokens, plan), plan)
        for pos, dist in zip(plan, dists):
            if target is not None and len(acc) >= target:
                break
            cands = candidate_set(dist, tokens, pos, config, stopwords, backend.vocab)
            if cands.n == 0:
                continue
            rank = cands.rank_of(tokens[pos])
            if rank is None or rank >= (1 << cands.n):
                raise DecodeMismatch(
                    f"token {tokens[pos]!r} at position {pos} is not a valid "
                    f"candidate (set size {cands.c})")
            acc.extend(BitString.from_int(rank, cands.n).bits)
            if framing.mode == "header" and not header_seen and len(acc) >= framing.header_width:
                declared = BitString(tuple(acc[: framing.header_width])).to_int()
                target = framing.header_width + declared
                header_seen = True

    if target is None or len(acc) < target:
        raise HeaderUnderflow(
            f"recovered {len(acc)} bits but framing requires "
            f"{'an unread header' if target is None else target}")
    if framing.mode == "header":
        return BitString(tuple(acc[framing.header_width : target]))
    return BitString(tuple(acc[:target]))
