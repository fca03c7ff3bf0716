"""Binary erasure channel, noisy words and the agreement relation.

Words are stored as a pair of Python ints (value bits, erasure mask) with the
most significant bit holding the first position of the text form.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

ERASURE = "*"


@dataclass(frozen=True)
class NoisyWord:
    """A word over ``{0, 1, *}``.

    ``values`` is canonicalised so that erased positions carry a zero bit;
    two words with the same visible content therefore compare equal.
    """

    length: int
    values: int
    erased: int = 0

    def __post_init__(self):
        if self.length < 1:
            raise ValueError(f"word length must be positive, got {self.length}")
        full = (1 << self.length) - 1
        if self.values < 0 or self.values > full or self.erased < 0 or self.erased > full:
            raise ValueError("value/erasure bits exceed word length")
        object.__setattr__(self, "values", self.values & ~self.erased)

    @classmethod
    def clean(cls, value: int, length: int) -> "NoisyWord":
        return cls(length, value, 0)

    @classmethod
    def parse(cls, text: str) -> "NoisyWord":
        values = erased = 0
        for ch in text:
            values <<= 1
            erased <<= 1
            if ch == "1":
                values |= 1
            elif ch == ERASURE:
                erased |= 1
            elif ch != "0":
                raise ValueError(f"invalid symbol {ch!r} in word {text!r}")
        return cls(len(text), values, erased)

    @property
    def erasure_count(self) -> int:
        return bin(self.erased).count("1")

    def __str__(self) -> str:
        out = []
        for k in range(self.length - 1, -1, -1):
            bit = 1 << k
            out.append(ERASURE if self.erased & bit else ("1" if self.values & bit else "0"))
        return "".join(out)


def transmit(word: int, length: int, p: float, rng: np.random.Generator) -> NoisyWord:
    """Send a clean word through BEC(p).

    ``p`` in {0, 1} is accepted for test scaffolding.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"erasure probability must lie in [0, 1], got {p}")
    hits = rng.random(length) < p
    return NoisyWord(length, word, bits_to_int(hits))


def bits_to_int(bits: np.ndarray) -> int:
    """Pack a boolean array (first element = most significant bit) into an int."""
    packed = np.packbits(bits.astype(np.uint8))
    return int.from_bytes(packed.tobytes(), "big") >> (8 * len(packed) - len(bits))


def compatible(a: NoisyWord, b: NoisyWord) -> bool:
    """The agreement relation: equal wherever neither word is erased."""
    if a.length != b.length:
        raise ValueError(f"length mismatch: {a.length} != {b.length}")
    return ((a.values ^ b.values) & ~(a.erased | b.erased)) == 0


def consistent_with_codeword(y: NoisyWord, x: int) -> bool:
    """True iff ``y`` can be a channel output of the clean address ``x``."""
    return ((y.values ^ x) & ~y.erased) == 0


def reads_compatible(r1, r2) -> bool:
    """Address and payload agreement of two reads (one data comparison)."""
    return compatible(r1.address, r2.address) and compatible(r1.payload, r2.payload)


def stream(seed: int, lane: int, strand: int, draw: int) -> np.random.Generator:
    """Counter-based generator for one (strand, draw) cell.

    ``lane`` separates independent uses of the same seed (0: channel,
    1: payloads, 2: read shuffle). Any single read can be regenerated
    without touching the others.
    """
    key = [seed & 0xFFFFFFFFFFFFFFFF, lane]
    return np.random.Generator(np.random.Philox(key=key, counter=[0, 0, draw, strand]))
