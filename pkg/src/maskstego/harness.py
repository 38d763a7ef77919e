"""Corpus evaluation: payload capacity, f/p sweeps, and the distortion audit."""

from __future__ import annotations

import csv
import hashlib
import io
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .bits import BitString
from .backends import Backend
from .codec import CapacityExhausted, DecodeMismatch, HeaderUnderflow, \
    check_retokenization_safe, encode, _masked
from .config import StegoConfig
from .eligibility import StopwordList, is_eligible
from .planner import compute_mask_plan
from .tokenizer import split_sentences

DEFAULT_MESSAGE_BITS = 32
CSV_COLUMNS = ["f", "p", "bits_per_word", "masked_positions",
               "zero_capacity_positions", "distortion_rate", "errors"]


@dataclass(frozen=True)
class CapacityReport:
    bits_per_word: float
    bits_embedded: int
    stego_words: int
    positions_total: int
    positions_zero_capacity: int
    documents_processed: int
    documents_skipped: int


@dataclass(frozen=True)
class DistortionReport:
    masked_positions: int
    positions_with_unsafe_candidate: int

    @property
    def rate(self) -> float:
        if self.masked_positions == 0:
            return 0.0
        return self.positions_with_unsafe_candidate / self.masked_positions


def load_corpus(path) -> list[str]:
    """UTF-8 plain text; documents separated by blank lines."""
    text = Path(path).read_text(encoding="utf-8")
    return split_documents(text)


def split_documents(text: str) -> list[str]:
    docs = [" ".join(block.split()) for block in text.split("\n\n")]
    return [d for d in docs if d]


def random_message(seed: int, doc_index: int, bits: int) -> BitString:
    """Deterministic per-document message for repeatable measurements."""
    h = hashlib.sha256(struct.pack("<QQ", seed, doc_index)).digest()
    key = struct.unpack("<Q", h[:8])[0]
    rng = np.random.Generator(np.random.Philox(key=key))
    return BitString(tuple(int(b) for b in rng.integers(0, 2, size=bits)))


def _map_documents(fn, documents, max_workers: int = 4):
    """Evaluate documents concurrently; results come back in document order."""
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        return list(pool.map(fn, range(len(documents)), documents))


def measure_capacity(documents: list[str], config: StegoConfig, backend: Backend,
                     stopwords: StopwordList, message_bits: int = DEFAULT_MESSAGE_BITS,
                     seed: int = 0, max_workers: int = 4) -> CapacityReport:
    """Embed a fixed-length random message in each document and aggregate
    embedded bits per whitespace-delimited stego word. Documents whose
    capacity runs out are skipped and counted separately."""
    if not documents:
        raise ValueError("corpus is empty")

    def one(i: int, doc: str):
        message = random_message(seed, i, message_bits)
        try:
            return encode(doc, message, config, backend, stopwords)
        except CapacityExhausted:
            return None

    results = _map_documents(one, documents, max_workers)
    bits = words = total = zero = done = skipped = 0
    for res in results:
        if res is None:
            skipped += 1
            continue
        done += 1
        bits += res.bits_embedded
        words += len(res.stego_text.split())
        total += res.positions_planned
        zero += res.positions_zero_capacity
    return CapacityReport(
        bits_per_word=bits / words if words else 0.0,
        bits_embedded=bits,
        stego_words=words,
        positions_total=total,
        positions_zero_capacity=zero,
        documents_processed=done,
        documents_skipped=skipped,
    )


def audit_distortion(documents: list[str], config: StegoConfig, backend: Backend,
                     stopwords: StopwordList, max_workers: int = 4) -> DistortionReport:
    """For every planned position, check whether any above-threshold eligible
    candidate would fail the retokenization check (the fast-mode decoding
    risk). No message is embedded."""
    vocab = backend.vocab

    def one(_: int, doc: str):
        masked = unsafe = 0
        for sentence in split_sentences(doc):
            tokens = vocab.tokenize(sentence)
            plan = compute_mask_plan(tokens, config, stopwords)
            if not plan:
                continue
            dists = backend.predict(_masked(tokens, plan), plan)
            for pos, dist in zip(plan, dists):
                masked += 1
                for idx, prob in dist.probs.items():
                    token = vocab.token(idx)
                    if prob <= config.p or not is_eligible(token, config, stopwords):
                        continue
                    if not check_retokenization_safe(vocab, tokens, pos, token):
                        unsafe += 1
                        break
        return masked, unsafe

    results = _map_documents(one, documents, max_workers)
    masked = sum(m for m, _ in results)
    unsafe = sum(u for _, u in results)
    return DistortionReport(masked, unsafe)


def sweep(documents: list[str], f_values: list[int], p_values: list[float],
          backend: Backend, stopwords: StopwordList,
          base_config: StegoConfig = StegoConfig(),
          message_bits: int = DEFAULT_MESSAGE_BITS, seed: int = 0,
          max_workers: int = 4) -> list[dict]:
    """One row per (f, p) over the grid, in the given order. Per-cell
    failures land in the row's error column instead of aborting the sweep."""
    if not f_values or not p_values:
        raise ValueError("f and p value lists must be non-empty")
    rows = []
    for f in f_values:
        for p in p_values:
            config = StegoConfig(
                f=f, p=p,
                skip_punct_num=base_config.skip_punct_num,
                skip_stopwords=base_config.skip_stopwords,
                skip_subwords=base_config.skip_subwords,
                skip_capitalized=base_config.skip_capitalized,
                safe_mode=base_config.safe_mode,
            )
            row = {"f": f, "p": p, "bits_per_word": "", "masked_positions": "",
                   "zero_capacity_positions": "", "distortion_rate": "", "errors": ""}
            try:
                cap = measure_capacity(documents, config, backend, stopwords,
                                       message_bits=message_bits, seed=seed,
                                       max_workers=max_workers)
                audit = audit_distortion(documents, config, backend, stopwords,
                                         max_workers=max_workers)
                row.update(
                    bits_per_word=f"{cap.bits_per_word:.6f}",
                    masked_positions=cap.positions_total,
                    zero_capacity_positions=cap.positions_zero_capacity,
                    distortion_rate=f"{audit.rate:.6f}",
                )
            except (CapacityExhausted, DecodeMismatch, HeaderUnderflow, ValueError) as exc:
                row["errors"] = f"{type(exc).__name__}: {exc}"
            rows.append(row)
    return rows


def sweep_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()
