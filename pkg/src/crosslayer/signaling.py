"""Walsh-Hadamard orthogonal signaling and a seeded binary symmetric channel.

Randomness comes from numpy's PCG64 bit generator seeded through
``SeedSequence``. Independent lanes derive their streams with
``SeedSequence(seed, spawn_key=lane)`` so parallel trials stay reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import LengthError, RangeError, SizeCapError

__all__ = [
    "HadamardMatrix",
    "ChannelModel",
    "sylvester_hadamard",
    "modulate_symbol",
    "demodulate_symbol",
    "modulate_bytes",
    "demodulate_bytes",
    "bsc_transmit",
    "channel_rng",
    "to_signed_byte",
    "from_signed_byte",
]

MAX_ORDER_EXP = 10


@dataclass(frozen=True, eq=False)
class HadamardMatrix:
    order: int
    entries: np.ndarray  # int8, +-1

    def row(self, i: int) -> np.ndarray:
        return self.entries[i]

    @property
    def offset(self) -> int:
        """Signed symbol ``v`` is carried on row ``v + offset``."""
        return self.order // 2


@dataclass(frozen=True)
class ChannelModel:
    pe: float
    seed: int = 0
    kind: str = "bsc"

    def __post_init__(self):
        if not 0.0 <= self.pe <= 1.0:
            raise RangeError(f"flip probability {self.pe} outside [0, 1]", stage="signaling")
        if self.kind != "bsc":
            raise RangeError(f"unsupported channel kind {self.kind!r}", stage="signaling")


def sylvester_hadamard(t: int) -> HadamardMatrix:
    """``H_{2^t}`` by repeated doubling ``[[H, H], [H, -H]]`` from ``H_1 = [1]``."""
    if not 0 <= t <= MAX_ORDER_EXP:
        raise SizeCapError(f"order 2**{t} outside the supported 2**0..2**{MAX_ORDER_EXP}",
                           stage="signaling")
    h = np.ones((1, 1), dtype=np.int8)
    for _ in range(t):
        h = np.block([[h, h], [h, -h]])
    h.setflags(write=False)
    return HadamardMatrix(1 << t, h)


def modulate_symbol(h: HadamardMatrix, value: int) -> np.ndarray:
    lo, hi = -h.offset, h.order - h.offset - 1
    if not lo <= value <= hi:
        raise RangeError(f"symbol {value} outside [{lo}, {hi}]", stage="signaling")
    return h.entries[value + h.offset].copy()


def demodulate_symbol(h: HadamardMatrix, chips) -> int:
    """Matched filter: the row with the largest correlation (lowest index on ties)."""
    chips = np.asarray(chips)
    if chips.shape != (h.order,):
        raise LengthError(f"expected {h.order} chips, got shape {chips.shape}",
                          stage="signaling")
    corr = h.entries.astype(np.int32) @ chips.astype(np.int32)
    return int(np.argmax(corr)) - h.offset


def to_signed_byte(b: int) -> int:
    return b - 256 if b >= 128 else b


def from_signed_byte(v: int) -> int:
    return v & 0xFF


def modulate_bytes(h: HadamardMatrix, bits: str) -> np.ndarray:
    """Each 8-bit group, read as a two's-complement byte, becomes one row."""
    if h.order != 256:
        raise SizeCapError("byte signaling needs the order-256 matrix", stage="signaling")
    if len(bits) % 8:
        raise LengthError(f"{len(bits)} bits is not a whole number of bytes",
                          stage="signaling")
    vals = [to_signed_byte(int(bits[i:i + 8], 2)) for i in range(0, len(bits), 8)]
    if not vals:
        return np.zeros((0, h.order), dtype=np.int8)
    return np.stack([modulate_symbol(h, v) for v in vals])


def demodulate_bytes(h: HadamardMatrix, chips: np.ndarray) -> str:
    return "".join(format(from_signed_byte(demodulate_symbol(h, row)), "08b")
                   for row in chips)


def channel_rng(ch: ChannelModel, lane: tuple[int, ...] = ()) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(ch.seed, spawn_key=lane)))


def bsc_transmit(ch: ChannelModel, data, rng: np.random.Generator | None = None,
                 chips: bool | None = None):
    """Flip each element independently with probability ``ch.pe``.

    ``data`` may be a bit string, a sequence/array of 0/1 bits, or a +-1 chip
    array (flipping negates a chip). ``chips=None`` guesses chips when any
    element is negative; pass it explicitly for all-``+1`` chip arrays. The
    result has the same type and shape.
    Without ``rng`` a fresh generator is seeded from ``ch``, so the output is a
    function of ``(seed, data)`` only.
    """
    rng = channel_rng(ch) if rng is None else rng
    if isinstance(data, str):
        flips = rng.random(len(data)) < ch.pe
        return "".join("10"[int(b)] if f else b for b, f in zip(data, flips))
    arr = np.asarray(data)
    flips = rng.random(arr.shape) < ch.pe
    if chips is None:
        chips = bool(arr.size) and arr.min() < 0
    if chips:
        out = np.where(flips, -arr, arr).astype(arr.dtype)
    else:
        out = np.where(flips, 1 - arr, arr).astype(arr.dtype)
    if isinstance(data, list):
        return out.tolist()
    return out
