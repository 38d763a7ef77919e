"""Bit sequence handling: messages, cursors, and block-code chunk sizing."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class BitString:
    """An ordered sequence of bits with an explicit length.

    Bits are most-significant-first: ``bits[0]`` is the first bit on the
    wire and the high bit of the first hex nibble.
    """

    bits: tuple[int, ...]

    def __post_init__(self):
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("bits must be 0 or 1")

    def __len__(self) -> int:
        return len(self.bits)

    def prefix(self, n: int) -> "BitString":
        return BitString(self.bits[:n])

    def pad_to(self, boundary: int) -> "BitString":
        """Zero-pad on the right so the length is a multiple of `boundary`."""
        if boundary < 1:
            raise ValueError("boundary must be >= 1")
        rem = len(self.bits) % boundary
        if rem == 0:
            return self
        return BitString(self.bits + (0,) * (boundary - rem))

    @classmethod
    def from_int(cls, value: int, width: int) -> "BitString":
        """Big-endian binary representation of `value` in `width` bits."""
        if value < 0 or value >= (1 << width):
            raise ValueError(f"{value} does not fit in {width} bits")
        return cls(tuple((value >> (width - 1 - i)) & 1 for i in range(width)))

    def to_int(self) -> int:
        v = 0
        for b in self.bits:
            v = (v << 1) | b
        return v

    @classmethod
    def from_hex(cls, hex_digits: str, bit_length: int) -> "BitString":
        """Parse `bit_length` bits from hex digits (MSB-first per nibble).

        The hex string must carry at least `bit_length` bits; any excess
        bits beyond the length must be zero padding.
        """
        hex_digits = hex_digits.strip()
        if 4 * len(hex_digits) < bit_length:
            raise ValueError("hex string too short for declared bit length")
        bits = []
        for ch in hex_digits:
            nib = int(ch, 16)
            bits.extend(((nib >> 3) & 1, (nib >> 2) & 1, (nib >> 1) & 1, nib & 1))
        if any(bits[bit_length:]):
            raise ValueError("nonzero padding bits beyond declared length")
        return cls(tuple(bits[:bit_length]))

    def to_hex(self) -> str:
        padded = self.pad_to(4)
        out = []
        for i in range(0, len(padded.bits), 4):
            n = padded.bits[i : i + 4]
            out.append(format((n[0] << 3) | (n[1] << 2) | (n[2] << 1) | n[3], "X"))
        return "".join(out)

    @classmethod
    def concat(cls, *parts: "BitString") -> "BitString":
        return cls(tuple(b for p in parts for b in p.bits))


def chunk_size(c: int) -> int:
    """Largest n with 2**n <= c; zero for c <= 1 (no bits can be carried)."""
    if c < 0:
        raise ValueError("candidate count must be nonnegative")
    if c <= 1:
        return 0
    return c.bit_length() - 1


@dataclass
class BitCursor:
    """Sequential reader over a message; reads past the end yield zero bits.

    The zero bits consumed beyond the message are counted as padding, which
    mirrors filling the remainder of the final chunk with zeros.
    """

    message: BitString
    offset: int = 0
    padding: int = field(default=0)

    def read(self, n: int) -> BitString:
        end = self.offset + n
        real = self.message.bits[self.offset : end]
        pad = end - self.offset - len(real)
        self.offset = end
        self.padding += pad
        return BitString(real + (0,) * pad)

    @property
    def exhausted(self) -> bool:
        return self.offset >= len(self.message)
