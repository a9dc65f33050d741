"""Bit-exact serialization helpers.

Representations are audited at bit granularity, so serialization must not
hide word-level rounding: a writer tracks the exact number of bits written
and the reader consumes exactly that many.
"""

from __future__ import annotations


class BitWriter:
    """Accumulates values MSB-first into a growing bit string."""

    def __init__(self) -> None:
        self._acc = 0
        self._nbits = 0

    def write(self, value: int, nbits: int) -> None:
        if value < 0 or value >> nbits:
            raise ValueError(f"value {value} does not fit in {nbits} bits")
        self._acc = (self._acc << nbits) | value
        self._nbits += nbits

    @property
    def bit_length(self) -> int:
        return self._nbits

    def getvalue(self) -> bytes:
        """Bytes holding the stream, zero-padded at the tail to a byte edge."""
        pad = (-self._nbits) % 8
        return ((self._acc << pad)).to_bytes((self._nbits + pad) // 8, "big")


class BitReader:
    """Consumes values MSB-first from bytes produced by BitWriter."""

    def __init__(self, data: bytes, bit_length: int) -> None:
        if len(data) * 8 < bit_length:
            raise ValueError("buffer shorter than declared bit length")
        self._val = int.from_bytes(data, "big") >> ((len(data) * 8) - bit_length)
        self._remaining = bit_length

    def read(self, nbits: int) -> int:
        if nbits > self._remaining:
            raise ValueError("read past end of bit stream")
        self._remaining -= nbits
        out = self._val >> self._remaining
        self._val &= (1 << self._remaining) - 1
        return out

    @property
    def remaining(self) -> int:
        return self._remaining
