"""Bit-exact stream primitives and the combinatorial codes the encoder needs.

Three code families live here:

* fixed-width and Elias-gamma unsigned integers,
* a binomial (stars-and-bars) multiset code ranking compositions of k items
  into b bins, with exact big-integer binomials,
* a balanced-parentheses code stored as raw bits with validity checking.

Bits are serialized to bytes MSB-first; the exact bit length travels in the
container header, so padding never leaks into decoding.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

MAGIC = b"PGB1"


class BitError(ValueError):
    """Malformed bitstream or code input."""


class BitDecodeError(BitError):
    """Decoding ran past the end or hit an invalid codeword."""

    def __init__(self, message: str, bit_offset: int | None = None):
        super().__init__(message if bit_offset is None
                         else f"{message} (bit offset {bit_offset})")
        self.bit_offset = bit_offset


@dataclass(frozen=True)
class BitString:
    """Immutable bit sequence with an exact length."""

    bits: tuple

    def __post_init__(self):
        object.__setattr__(self, "bits", tuple(int(b) for b in self.bits))
        if any(b not in (0, 1) for b in self.bits):
            raise BitError("bits must be 0/1")

    def __len__(self):
        return len(self.bits)

    def __add__(self, other: "BitString") -> "BitString":
        return BitString(self.bits + other.bits)

    def __str__(self):
        return "".join(str(b) for b in self.bits)

    @staticmethod
    def from_string(text: str) -> "BitString":
        return BitString(tuple(int(c) for c in text))

    def to_bytes(self) -> bytes:
        """Pack MSB-first, zero-padded to a byte boundary."""
        out = bytearray((len(self.bits) + 7) // 8)
        for i, b in enumerate(self.bits):
            if b:
                out[i >> 3] |= 0x80 >> (i & 7)
        return bytes(out)

    @staticmethod
    def from_bytes(data: bytes, bit_length: int) -> "BitString":
        if bit_length > 8 * len(data):
            raise BitError("bit length exceeds buffer")
        bits = tuple((data[i >> 3] >> (7 - (i & 7))) & 1 for i in range(bit_length))
        return BitString(bits)


class BitWriter:
    """Append-only bit sink; length is exactly the sum of writes."""

    def __init__(self):
        self._bits: list = []

    def __len__(self):
        return len(self._bits)

    def write_bit(self, bit: int):
        self._bits.append(1 if bit else 0)

    def write_bits(self, bits: Iterable[int]):
        for b in bits:
            self.write_bit(b)

    def write_fixed(self, value: int, width: int):
        if value < 0 or (width < value.bit_length()):
            raise BitError(f"value {value} overflows {width} bits")
        for shift in range(width - 1, -1, -1):
            self._bits.append((value >> shift) & 1)

    def write_gamma(self, value: int):
        """Elias gamma: positive integers, self-delimiting."""
        if value < 1:
            raise BitError("gamma encodes positive integers")
        width = value.bit_length()
        self._bits.extend([0] * (width - 1))
        for shift in range(width - 1, -1, -1):
            self._bits.append((value >> shift) & 1)

    def getvalue(self) -> BitString:
        return BitString(tuple(self._bits))


class BitReader:
    """Cursor over a BitString; reads never pass the end."""

    def __init__(self, bits: BitString):
        self._bits = bits.bits
        self.pos = 0

    def remaining(self) -> int:
        return len(self._bits) - self.pos

    def read_bit(self) -> int:
        if self.pos >= len(self._bits):
            raise BitDecodeError("read past end of stream", self.pos)
        b = self._bits[self.pos]
        self.pos += 1
        return b

    def read_fixed(self, width: int) -> int:
        value = 0
        for _ in range(width):
            value = (value << 1) | self.read_bit()
        return value

    def read_gamma(self) -> int:
        zeros = 0
        while self.read_bit() == 0:
            zeros += 1
            if zeros > len(self._bits):
                raise BitDecodeError("runaway gamma prefix", self.pos)
        value = 1
        for _ in range(zeros):
            value = (value << 1) | self.read_bit()
        return value


# -- integer code round-trip helpers (uint_code of the module contract) -----

def encode_uint(value: int, mode: str, width: int | None = None) -> BitString:
    w = BitWriter()
    if mode == "fixed":
        if width is None:
            raise BitError("fixed mode needs a width")
        w.write_fixed(value, width)
    elif mode == "gamma":
        w.write_gamma(value)
    else:
        raise BitError(f"unknown mode {mode!r}")
    return w.getvalue()


def decode_uint(bits: BitString, mode: str, width: int | None = None) -> int:
    r = BitReader(bits)
    if mode == "fixed":
        if width is None:
            raise BitError("fixed mode needs a width")
        return r.read_fixed(width)
    if mode == "gamma":
        return r.read_gamma()
    raise BitError(f"unknown mode {mode!r}")


# -- multiset (composition) code --------------------------------------------

def composition_count(bins: int, total: int) -> int:
    """Number of compositions of `total` into `bins` nonnegative parts."""
    if bins < 1:
        raise BitError("need at least one bin")
    return math.comb(bins + total - 1, total)


def multiset_code_width(bins: int, total: int) -> int:
    """Exact codeword width: ceil(lg C(bins+total-1, total)) bits."""
    count = composition_count(bins, total)
    return (count - 1).bit_length()


def rank_composition(counts: Sequence[int]) -> int:
    """Rank of a composition among all compositions of its total into
    len(counts) bins, in lexicographic order of the count vectors."""
    bins = len(counts)
    total = sum(counts)
    rank = 0
    remaining = total
    for i, c in enumerate(counts[:-1]):
        if c < 0:
            raise BitError("negative count")
        tail_bins = bins - i - 1
        # compositions with a smaller count at slot i
        for smaller in range(c):
            rank += math.comb(tail_bins + (remaining - smaller) - 1,
                              remaining - smaller)
        remaining -= c
    if counts and counts[-1] < 0:
        raise BitError("negative count")
    return rank


def unrank_composition(rank: int, bins: int, total: int) -> list:
    counts = []
    remaining = total
    for i in range(bins - 1):
        tail_bins = bins - i - 1
        c = 0
        while True:
            block = math.comb(tail_bins + (remaining - c) - 1, remaining - c)
            if rank < block:
                break
            rank -= block
            c += 1
        counts.append(c)
        remaining -= c
    counts.append(remaining)
    if rank != 0:
        raise BitDecodeError("composition rank out of range")
    return counts


def encode_multiset(counts: Sequence[int], bins: int, total: int) -> BitString:
    """Rank a composition and emit it in the minimal fixed width.

    `bins` and `total` are side information: the decoder must know them from
    context.  The codeword is exactly ceil(lg C(bins+total-1, total)) bits.
    """
    if len(counts) != bins:
        raise BitError("count vector does not match bin count")
    if sum(counts) != total:
        raise BitError(f"counts sum to {sum(counts)}, expected {total}")
    width = multiset_code_width(bins, total)
    return encode_uint(rank_composition(counts), "fixed", width)


def decode_multiset(reader: BitReader, bins: int, total: int) -> list:
    width = multiset_code_width(bins, total)
    rank = reader.read_fixed(width)
    if rank >= composition_count(bins, total):
        raise BitDecodeError("composition rank out of range", reader.pos)
    return unrank_composition(rank, bins, total)


# -- balanced parentheses ----------------------------------------------------

def parens_is_balanced(text: str) -> bool:
    depth = 0
    for c in text:
        if c == "(":
            depth += 1
        elif c == ")":
            depth -= 1
            if depth < 0:
                return False
        else:
            return False
    return depth == 0


def encode_parens(text: str) -> BitString:
    """Balanced-parenthesis string as raw bits, open=1 close=0."""
    if not parens_is_balanced(text):
        raise BitError(f"unbalanced parenthesis string {text!r}")
    return BitString(tuple(1 if c == "(" else 0 for c in text))


def decode_parens(reader: BitReader, length: int) -> str:
    """Read 2k bits back into a parenthesis string; validity asserted."""
    if length % 2 != 0:
        raise BitDecodeError("parenthesis payload must have even length")
    chars = []
    depth = 0
    for _ in range(length):
        b = reader.read_bit()
        chars.append("(" if b else ")")
        depth += 1 if b else -1
        if depth < 0:
            raise BitDecodeError("unbalanced parenthesis stream", reader.pos)
    if depth != 0:
        raise BitDecodeError("unbalanced parenthesis stream", reader.pos)
    return "".join(chars)


# -- PGB1 container ----------------------------------------------------------

def write_container(n: int, payload: BitString) -> bytes:
    """Binary container: magic "PGB1", gamma(n), gamma(bitlen+1), payload."""
    w = BitWriter()
    w.write_gamma(n)
    w.write_gamma(len(payload) + 1)
    header = w.getvalue()
    return MAGIC + (header + payload).to_bytes()


def read_container(data: bytes) -> tuple:
    """Parse a container; returns (n, payload BitString)."""
    if data[:4] != MAGIC:
        raise BitDecodeError("bad magic bytes", 0)
    body = BitString.from_bytes(data[4:], 8 * (len(data) - 4))
    r = BitReader(body)
    try:
        n = r.read_gamma()
        bitlen = r.read_gamma() - 1
    except BitDecodeError as exc:
        raise BitDecodeError("truncated container header", exc.bit_offset)
    if r.remaining() < bitlen:
        raise BitDecodeError(
            f"container payload truncated: header says {bitlen} bits, "
            f"{r.remaining()} available", r.pos)
    start = r.pos
    return n, BitString(body.bits[start:start + bitlen])
