"""Multilevel integer lifting over a residue ring ``Z_m``.

One split predicts each odd sample from the following even samples,

    detail[k] = odd[k] - h1*even[k] - h2*even[k+1] - h3*even[k+2]   (mod m)

and keeps the even samples as the approximation (no update step). Taps past
the end of the sequence see zeros. Every step is a shear in ``Z_m`` and so is
exactly invertible for any kernel.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import LengthError, StructureError

__all__ = [
    "LiftingKernel",
    "SubbandFrame",
    "DEFAULT_KERNEL",
    "split_level",
    "merge_level",
    "decompose",
    "reconstruct",
]


@dataclass(frozen=True)
class LiftingKernel:
    h: tuple[int, int, int]

    def __post_init__(self):
        if len(self.h) != 3:
            raise StructureError("lifting kernel needs three taps", stage="subband")
        if self.h[0] == 0:
            raise StructureError("leading tap h1 must be nonzero", stage="subband")


DEFAULT_KERNEL = LiftingKernel((2, 0, 0))


@dataclass(frozen=True)
class SubbandFrame:
    """Detail sequences from finest (``levels[0]``) to coarsest, plus the
    single remaining approximation value."""

    modulus: int
    levels: tuple[tuple[int, ...], ...]
    final_approx: int
    kernel: LiftingKernel = DEFAULT_KERNEL

    def __len__(self):
        return sum(len(d) for d in self.levels) + 1

    def validate(self) -> None:
        t = len(self.levels)
        for i, d in enumerate(self.levels):
            if len(d) != 1 << (t - 1 - i):
                raise StructureError(
                    f"level {i + 1} has {len(d)} values, expected {1 << (t - 1 - i)}",
                    stage="subband")
        for v in (*(x for d in self.levels for x in d), self.final_approx):
            if not 0 <= v < self.modulus:
                raise StructureError(
                    f"value {v} outside Z_{self.modulus}", stage="subband")


def _prediction(even: Sequence[int], k: int, h: tuple[int, int, int]) -> int:
    acc = 0
    for tap, coeff in enumerate(h):
        if coeff and k + tap < len(even):
            acc += coeff * even[k + tap]
    return acc


def split_level(x: Sequence[int], kernel: LiftingKernel, m: int) -> tuple[list[int], list[int]]:
    """One lifting split of an even-length sequence; returns ``(approx, detail)``."""
    if len(x) < 2 or len(x) % 2:
        raise LengthError(f"split needs an even length >= 2, got {len(x)}",
                          stage="subband")
    even = [v % m for v in x[0::2]]
    odd = x[1::2]
    detail = [(o - _prediction(even, k, kernel.h)) % m for k, o in enumerate(odd)]
    return even, detail


def merge_level(approx: Sequence[int], detail: Sequence[int],
                kernel: LiftingKernel, m: int) -> list[int]:
    """Inverse of :func:`split_level`."""
    if len(approx) != len(detail):
        raise LengthError(
            f"approx/detail lengths differ ({len(approx)} vs {len(detail)})",
            stage="subband")
    even = [v % m for v in approx]
    out: list[int] = []
    for k, d in enumerate(detail):
        out.append(even[k])
        out.append((d + _prediction(even, k, kernel.h)) % m)
    return out


def decompose(x: Sequence[int], kernel: LiftingKernel, m: int) -> SubbandFrame:
    n = len(x)
    if n < 1 or n & (n - 1):
        raise LengthError(f"length {n} is not a power of two", stage="subband")
    levels = []
    approx = list(x)
    while len(approx) > 1:
        approx, detail = split_level(approx, kernel, m)
        levels.append(tuple(detail))
    return SubbandFrame(m, tuple(levels), approx[0] % m, kernel)


def reconstruct(frame: SubbandFrame) -> list[int]:
    frame.validate()
    approx = [frame.final_approx]
    for detail in reversed(frame.levels):
        approx = merge_level(approx, detail, frame.kernel, frame.modulus)
    return approx
