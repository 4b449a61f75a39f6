"""Bit-exact state serialization.

Engine state is exported as a string of '0'/'1' characters so that its
length is exactly the number of bits the state occupies.  Every message is
wrapped in an envelope::

    [8 bits format version][8 bits engine tag][gamma(payload length)][payload]

Small non-negative integers use Elias gamma of ``n + 1``; field elements
and symbol indices use fixed widths.
"""
from __future__ import annotations

FORMAT_VERSION = 1

ENGINE_TAGS = {
    "ring": 1,
    "conjunction": 2,
    "fingerprint": 3,
    "trivial": 4,
    "edit": 5,
    "swap": 6,
    "protocol": 7,
}


class StateFormatError(ValueError):
    """A serialized state is truncated, has trailing bits, or has the wrong version/tag."""


class BitWriter:
    def __init__(self):
        self._parts: list[str] = []

    def uint(self, value: int, width: int) -> "BitWriter":
        if value < 0 or value.bit_length() > width:
            raise ValueError(f"{value} does not fit in {width} bits")
        if width:
            self._parts.append(format(value, f"0{width}b"))
        return self

    def flag(self, value: bool) -> "BitWriter":
        self._parts.append("1" if value else "0")
        return self

    def gamma(self, value: int) -> "BitWriter":
        """Elias gamma code of ``value + 1`` (so zero is encodable)."""
        if value < 0:
            raise ValueError("gamma code needs a non-negative integer")
        n = value + 1
        body = format(n, "b")
        self._parts.append("0" * (len(body) - 1) + body)
        return self

    def fill(self, fill: int, m: int) -> "BitWriter":
        """Window fill level: one bit once the window is full, else the count."""
        self.flag(fill >= m)
        if fill < m:
            self.gamma(fill)
        return self

    def bits(self, bits: str) -> "BitWriter":
        self._parts.append(bits)
        return self

    def getvalue(self) -> str:
        return "".join(self._parts)


class BitReader:
    def __init__(self, bits: str):
        if any(ch not in "01" for ch in bits):
            raise StateFormatError("state must contain only '0' and '1'")
        self._bits = bits
        self._pos = 0

    def _take(self, n: int) -> str:
        if self._pos + n > len(self._bits):
            raise StateFormatError("state is truncated")
        chunk = self._bits[self._pos:self._pos + n]
        self._pos += n
        return chunk

    def uint(self, width: int) -> int:
        return int(self._take(width), 2) if width else 0

    def flag(self) -> bool:
        return self._take(1) == "1"

    def gamma(self) -> int:
        zeros = 0
        while self._take(1) == "0":
            zeros += 1
        rest = self._take(zeros)
        return int("1" + rest, 2) - 1

    def fill(self, m: int) -> int:
        return m if self.flag() else self.gamma()

    def bits(self, n: int) -> str:
        return self._take(n)

    def done(self) -> None:
        if self._pos != len(self._bits):
            raise StateFormatError(f"{len(self._bits) - self._pos} trailing bits")


def wrap(tag: str, payload: str) -> str:
    w = BitWriter().uint(FORMAT_VERSION, 8).uint(ENGINE_TAGS[tag], 8).gamma(len(payload))
    return w.getvalue() + payload


def unwrap(tag: str, message: str) -> BitReader:
    """Check the envelope and return a reader positioned on the payload."""
    r = BitReader(message)
    version = r.uint(8)
    if version != FORMAT_VERSION:
        raise StateFormatError(f"unsupported state format version {version}")
    got = r.uint(8)
    if got != ENGINE_TAGS[tag]:
        raise StateFormatError(f"state was exported by a different engine (tag {got})")
    length = r.gamma()
    payload = r.bits(length)
    r.done()
    return BitReader(payload)


def split_envelopes(message: str) -> list[str]:
    """Cut a concatenation of wrapped states back into its parts."""
    parts = []
    pos = 0
    while pos < len(message):
        r = BitReader(message[pos:])
        r.uint(8)
        r.uint(8)
        length = r.gamma()
        r.bits(length)
        end = pos + r._pos
        parts.append(message[pos:end])
        pos = end
    return parts
