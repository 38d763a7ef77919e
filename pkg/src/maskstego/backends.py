"""Sources of per-mask vocabulary distributions.

Three deterministic built-ins plus an adapter for an exported masked LM:

* TableBackend  — exact lookup in a fixture file, for hand-built tests.
* HashBackend   — context-hashed pseudo-distributions, for large property
  suites without a model.
* BigramBackend — add-alpha bigram estimates from a corpus; a cheap stand-in
  that is peaked exactly where real language is predictable (function-word
  slots), unlike the context-free hash stub.
* ModelBackend  — runs an exported masked LM bundle (optional extra).

All backends are pure: identical (tokens, positions) inputs give
bit-identical distributions, which is what keeps the two parties in sync.
"""

from __future__ import annotations

import hashlib
import math
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .tokenizer import MASK_TOKEN, TokenSeq, Vocabulary, split_sentences

SUM_TOLERANCE = 1e-4


class BackendError(RuntimeError):
    pass


@dataclass(frozen=True)
class Distribution:
    """Sparse map from vocabulary index to probability; omitted indices
    carry probability zero."""

    probs: dict[int, float]

    def validate(self, vocab_size: int) -> "Distribution":
        total = 0.0
        for idx, p in self.probs.items():
            if not (0 <= idx < vocab_size):
                raise BackendError(f"vocabulary index {idx} out of range")
            if not (0.0 <= p <= 1.0):
                raise BackendError(f"probability {p} outside [0,1]")
            total += p
        if abs(total - 1.0) > SUM_TOLERANCE:
            raise BackendError(f"probabilities sum to {total}, expected 1")
        return self


class Backend:
    """predict() returns one Distribution per plan position, in plan order.

    `tokens` must hold the mask symbol at every plan position; all other
    positions hold tokens shared verbatim by encoder and decoder.
    """

    vocab: Vocabulary

    def predict(self, tokens: TokenSeq, positions: tuple[int, ...]) -> list[Distribution]:
        raise NotImplementedError

    @property
    def digest(self) -> str:
        raise NotImplementedError

    def _check_masked(self, tokens: TokenSeq, positions: tuple[int, ...]) -> None:
        for pos in positions:
            if tokens[pos] != MASK_TOKEN:
                raise BackendError(f"position {pos} does not hold the mask symbol")


def sentence_key(tokens: TokenSeq) -> str:
    """Lookup key for the table backend: the space-joined masked sentence.
    Identical for encoder and decoder because unmasked positions are shared."""
    return " ".join(tokens)


class TableBackend(Backend):
    """Exact lookup on (masked-sentence key, position) from a text file with
    records `key<TAB>position<TAB>token:prob,token:prob,...`."""

    def __init__(self, vocab: Vocabulary, table: dict[tuple[str, int], Distribution], digest: str):
        self.vocab = vocab
        self.table = table
        self._digest = digest

    @classmethod
    def load(cls, path, vocab: Vocabulary) -> "TableBackend":
        raw = Path(path).read_bytes()
        digest = hashlib.sha256(raw).hexdigest()
        table: dict[tuple[str, int], Distribution] = {}
        for lineno, line in enumerate(raw.decode("utf-8").splitlines(), start=1):
            if not line.strip() or line.startswith("#"):
                continue
            try:
                key, pos_s, entries_s = line.split("\t")
                pos = int(pos_s)
                probs: dict[int, float] = {}
                for item in entries_s.split(","):
                    tok, p_s = item.rsplit(":", 1)
                    if tok not in vocab:
                        raise ValueError(f"token {tok!r} not in vocabulary")
                    probs[vocab.index[tok]] = float(p_s)
                table[(key, pos)] = Distribution(probs).validate(len(vocab))
            except (ValueError, BackendError) as exc:
                raise BackendError(f"{path}:{lineno}: bad table record: {exc}") from exc
        return cls(vocab, table, digest)

    def predict(self, tokens: TokenSeq, positions: tuple[int, ...]) -> list[Distribution]:
        self._check_masked(tokens, positions)
        key = sentence_key(tokens)
        out = []
        for pos in positions:
            try:
                out.append(self.table[(key, pos)])
            except KeyError:
                raise BackendError(f"no table entry for key {key!r} position {pos}") from None
        return out

    @property
    def digest(self) -> str:
        return self._digest


class HashBackend(Backend):
    """Pseudo-distributions derived from a 64-bit hash of (seed, masked
    context, position).

    Construction, fully reproducible from this description: the key is the
    first 8 bytes of SHA-256 over the little-endian 64-bit seed, the token
    strings joined by 0x1F, and the little-endian 64-bit position; it seeds
    a Philox counter-based generator drawing vocab_size uniform scores u,
    which are mapped through the Pareto-style transform (1-u)**(-TAIL) so a
    few tokens dominate (as in a real masked LM) and then normalized.
    """

    TAIL = 1.2

    def __init__(self, seed: int, vocab: Vocabulary):
        if len(vocab) < 2:
            raise BackendError("hash backend needs a vocabulary of size >= 2")
        self.seed = seed
        self.vocab = vocab

    def _distribution(self, tokens: TokenSeq, position: int) -> Distribution:
        h = hashlib.sha256()
        h.update(struct.pack("<Q", self.seed))
        h.update("\x1f".join(tokens).encode("utf-8"))
        h.update(struct.pack("<Q", position))
        key = struct.unpack("<Q", h.digest()[:8])[0]
        rng = np.random.Generator(np.random.Philox(key=key))
        scores = (1.0 - rng.random(len(self.vocab))) ** -self.TAIL
        probs = scores / scores.sum()
        return Distribution({i: float(p) for i, p in enumerate(probs)})

    def predict(self, tokens: TokenSeq, positions: tuple[int, ...]) -> list[Distribution]:
        self._check_masked(tokens, positions)
        return [self._distribution(tokens, pos) for pos in positions]

    @property
    def digest(self) -> str:
        return f"hash:{self.seed}:{self.vocab.digest[:16]}"


class BigramBackend(Backend):
    """Bigram maximum-likelihood estimates with add-alpha smoothing,
    conditioned on the token immediately before the masked position.

    Estimated from a plain-text corpus with the shared tokenizer; both
    parties building it from the same corpus file obtain the same counts.
    A masked or absent predecessor falls back to the uniform smoothing row.
    """

    BOUNDARY = "[CLS]"

    def __init__(self, vocab: Vocabulary, counts: dict[str, dict[int, int]],
                 totals: dict[str, int], digest: str, alpha: float = 0.01):
        self.vocab = vocab
        self.counts = counts
        self.totals = totals
        self.alpha = alpha
        self._digest = digest

    @classmethod
    def from_corpus(cls, path, vocab: Vocabulary, alpha: float = 0.01) -> "BigramBackend":
        raw = Path(path).read_bytes()
        digest = hashlib.sha256(raw).hexdigest()
        counts: dict[str, dict[int, int]] = {}
        totals: dict[str, int] = {}
        for block in raw.decode("utf-8").split("\n\n"):
            for sentence in split_sentences(block):
                tokens = vocab.tokenize(sentence)
                prev = cls.BOUNDARY
                for tok in tokens:
                    idx = vocab.index.get(tok)
                    if idx is not None:
                        row = counts.setdefault(prev, {})
                        row[idx] = row.get(idx, 0) + 1
                        totals[prev] = totals.get(prev, 0) + 1
                    prev = tok
        return cls(vocab, counts, totals, digest, alpha)

    def _distribution(self, prev: str) -> Distribution:
        v = len(self.vocab)
        row = self.counts.get(prev, {})
        total = self.totals.get(prev, 0) + self.alpha * v
        base = self.alpha / total
        probs = {i: base for i in range(v)}
        for idx, c in row.items():
            probs[idx] = (c + self.alpha) / total
        return Distribution(probs)

    def predict(self, tokens: TokenSeq, positions: tuple[int, ...]) -> list[Distribution]:
        self._check_masked(tokens, positions)
        out = []
        for pos in positions:
            prev = tokens[pos - 1] if pos > 0 else self.BOUNDARY
            if prev == MASK_TOKEN:
                prev = self.BOUNDARY
            out.append(self._distribution(prev))
        return out

    @property
    def digest(self) -> str:
        return f"bigram:{self._digest[:16]}:{self.vocab.digest[:16]}"


class ModelBackend(Backend):
    """Adapter over an exported masked-LM bundle (directory with model
    weights, config, and the line-indexed vocabulary the tokenizer uses).

    Applies softmax to the raw logits itself so the export stays a plain
    inference graph. Requires the `model` extra (transformers + torch).
    """

    def __init__(self, bundle_dir):
        try:
            import torch
            from transformers import AutoModelForMaskedLM
        except ImportError as exc:  # pragma: no cover - env without extra
            raise BackendError("model backend requires the 'model' extra "
                              "(pip install maskstego[model])") from exc
        self._torch = torch
        bundle_dir = Path(bundle_dir)
        vocab_path = bundle_dir / "vocab.txt"
        if not vocab_path.exists():
            raise BackendError(f"no vocab.txt in bundle {bundle_dir}")
        self.vocab = Vocabulary.load(vocab_path)
        self.model = AutoModelForMaskedLM.from_pretrained(bundle_dir)
        self.model.eval()
        out_dim = self.model.get_output_embeddings().weight.shape[0]
        if out_dim != len(self.vocab):
            raise BackendError(
                f"vocabulary has {len(self.vocab)} entries but model output "
                f"dimension is {out_dim}")
        weight_files = sorted(
            p for p in bundle_dir.iterdir()
            if p.suffix in (".safetensors", ".bin") and p.is_file())
        h = hashlib.sha256()
        for p in weight_files:
            h.update(p.read_bytes())
        self._digest = h.hexdigest()
        self._mask_id = self.vocab.index[MASK_TOKEN]
        self._cls_id = self.vocab.index.get("[CLS]")
        self._sep_id = self.vocab.index.get("[SEP]")

    def predict(self, tokens: TokenSeq, positions: tuple[int, ...]) -> list[Distribution]:
        self._check_masked(tokens, positions)
        torch = self._torch
        from .tokenizer import UNK_TOKEN
        unk = self.vocab.index[UNK_TOKEN]
        ids = [self.vocab.index.get(t, unk) for t in tokens]
        offset = 0
        if self._cls_id is not None and self._sep_id is not None:
            ids = [self._cls_id] + ids + [self._sep_id]
            offset = 1
        with torch.no_grad():
            logits = self.model(input_ids=torch.tensor([ids])).logits[0]
        out = []
        for pos in positions:
            probs = torch.softmax(logits[pos + offset], dim=-1)
            out.append(Distribution({i: float(p) for i, p in enumerate(probs.tolist())}))
        return out

    @property
    def digest(self) -> str:
        return self._digest


def entropy(dist: Distribution) -> float:
    """Shannon entropy in bits; diagnostic only."""
    return -sum(p * math.log2(p) for p in dist.probs.values() if p > 0)
