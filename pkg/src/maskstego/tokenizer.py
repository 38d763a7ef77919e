"""Deterministic subword tokenization shared by sender and receiver.

The tokenizer is WordPiece-style: whitespace and punctuation splitting
followed by greedy longest-match against a fixed line-indexed vocabulary,
with "##" marking non-initial pieces. Detokenization is its documented
inverse; both directions are pure functions of the vocabulary file, so the
two communicating parties agree bit-for-bit as long as they share that file
(checked via its SHA-256 digest).
"""

from __future__ import annotations

import hashlib
import re
import unicodedata
from functools import lru_cache

CONTINUATION_MARKER = "##"
MASK_TOKEN = "[MASK]"
UNK_TOKEN = "[UNK]"
SPECIAL_TOKEN_RE = re.compile(r"^\[[A-Z]+\]$")

# A token sequence is a plain tuple of surface strings; the continuation
# flag is derivable from the surface form alone.
TokenSeq = tuple[str, ...]

MAX_CHARS_PER_WORD = 100

# Punctuation that attaches to the preceding word when detokenizing.
_ATTACH_LEFT = set(".,!?;:)]}%'’”…")
# Punctuation that attaches to the following word.
_ATTACH_RIGHT = set("([{$‘“")


def is_continuation(token: str) -> bool:
    return token.startswith(CONTINUATION_MARKER)


def is_special(token: str) -> bool:
    return SPECIAL_TOKEN_RE.match(token) is not None


def _is_punct_char(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P") or ch in "$^`|~<>=+"


class Vocabulary:
    """Line-indexed token vocabulary; the line number is the token index
    and the tie-break key when sorting substitution candidates."""

    def __init__(self, tokens: list[str], digest: str):
        self.tokens = list(tokens)
        self.index = {t: i for i, t in enumerate(self.tokens)}
        if len(self.index) != len(self.tokens):
            raise ValueError("vocabulary contains duplicate tokens")
        self.digest = digest
        self._wordpiece = lru_cache(maxsize=65536)(self._wordpiece_uncached)

    @classmethod
    def load(cls, path) -> "Vocabulary":
        with open(path, "rb") as fh:
            raw = fh.read()
        digest = hashlib.sha256(raw).hexdigest()
        tokens = [line for line in raw.decode("utf-8").splitlines() if line]
        return cls(tokens, digest)

    @classmethod
    def from_tokens(cls, tokens: list[str]) -> "Vocabulary":
        raw = ("\n".join(tokens) + "\n").encode("utf-8")
        return cls(tokens, hashlib.sha256(raw).hexdigest())

    def __len__(self) -> int:
        return len(self.tokens)

    def __contains__(self, token: str) -> bool:
        return token in self.index

    def token(self, idx: int) -> str:
        return self.tokens[idx]

    # -- basic splitting -------------------------------------------------

    @staticmethod
    def _basic_split(text: str) -> list[str]:
        """Whitespace split, then isolate each punctuation character,
        keeping bracketed special tokens like [MASK] atomic."""
        out: list[str] = []
        for chunk in text.split():
            if is_special(chunk):
                out.append(chunk)
                continue
            buf = []
            for ch in chunk:
                if _is_punct_char(ch):
                    if buf:
                        out.append("".join(buf))
                        buf = []
                    out.append(ch)
                else:
                    buf.append(ch)
            if buf:
                out.append("".join(buf))
        return out

    def _wordpiece_uncached(self, word: str) -> tuple[str, ...]:
        if len(word) > MAX_CHARS_PER_WORD:
            return (UNK_TOKEN,)
        pieces: list[str] = []
        start = 0
        while start < len(word):
            end = len(word)
            piece = None
            while start < end:
                sub = word[start:end]
                if start > 0:
                    sub = CONTINUATION_MARKER + sub
                if sub in self.index:
                    piece = sub
                    break
                end -= 1
            if piece is None:
                return (UNK_TOKEN,)
            pieces.append(piece)
            start = end
        return tuple(pieces)

    # -- public operations ----------------------------------------------

    def tokenize(self, text: str) -> TokenSeq:
        out: list[str] = []
        for word in self._basic_split(text):
            if is_special(word) and word in self.index:
                out.append(word)
            elif len(word) == 1 and _is_punct_char(word):
                out.append(word if word in self.index else UNK_TOKEN)
            else:
                out.extend(self._wordpiece(word))
        return tuple(out)

    def detokenize(self, tokens: TokenSeq) -> str:
        """Join tokens into text.

        Rules: continuation pieces append without a space; tokens in the
        attach-left punctuation set append without a space; a preceding
        attach-right token suppresses the following space; everything else
        is separated by a single space.
        """
        parts: list[str] = []
        glue_next = False
        for tok in tokens:
            surface = tok[len(CONTINUATION_MARKER):] if is_continuation(tok) else tok
            if not parts:
                parts.append(surface)
            elif is_continuation(tok) or glue_next or (len(tok) == 1 and tok in _ATTACH_LEFT):
                parts[-1] = parts[-1] + surface
            else:
                parts.append(surface)
            glue_next = len(tok) == 1 and tok in _ATTACH_RIGHT
        return " ".join(parts)


# -- sentence splitting ---------------------------------------------------

# Abbreviations whose trailing period does not end a sentence. Versioned
# protocol constant: changing this list desynchronizes the two parties.
ABBREVIATIONS = frozenset(
    {
        "mr", "mrs", "ms", "dr", "prof", "sr", "jr", "st", "vs", "etc",
        "e.g", "i.e", "cf", "al", "inc", "ltd", "co", "corp", "no", "fig",
        "a.m", "p.m", "u.s", "u.k",
    }
)

_TERMINATOR_RE = re.compile(r"[.!?][\"')\]’”]*(\s+)")


def split_sentences(text: str) -> list[str]:
    """Rule-based sentence split.

    Splits after sentence-final punctuation (with optional closing quotes
    or brackets) that is followed by whitespace and an uppercase letter, or
    by end of text, unless the word before a period is on the abbreviation
    list. Joining the outputs with single spaces reproduces the
    whitespace-normalized input.
    """
    text = text.strip()
    if not text:
        return []
    sentences: list[str] = []
    start = 0
    for m in _TERMINATOR_RE.finditer(text):
        after = m.end()
        if after >= len(text) or not text[after].isupper():
            continue
        if text[m.start()] == ".":
            word = text[: m.start()].rsplit(None, 1)[-1] if text[: m.start()].strip() else ""
            word = word.lstrip("(\"'[{‘“").lower()
            if len(word) > 1 and word in ABBREVIATIONS:
                continue
        sentences.append(text[start : m.start(1)])
        start = after
    sentences.append(text[start:])
    return [s for s in sentences if s]
