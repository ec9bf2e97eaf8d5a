"""Residue number system: forward conversion and CRT reconstruction."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import gcd, prod

from .errors import CoprimalityError, DynamicRangeError, MalformedResidueError
from .numtheory import mod_inv

__all__ = [
    "ModuliSet",
    "ResidueVector",
    "build_moduli_set",
    "to_residues",
    "from_residues",
]


@dataclass(frozen=True)
class ModuliSet:
    """Pairwise-coprime moduli with the CRT constants precomputed.

    ``mhat[j] = M // moduli[j]`` and ``T[j]`` inverts ``mhat[j]`` modulo
    ``moduli[j]``.
    """

    moduli: tuple[int, ...]
    M: int = field(init=False)
    mhat: tuple[int, ...] = field(init=False)
    T: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        if not self.moduli:
            raise CoprimalityError("empty moduli set", stage="rns")
        for m in self.moduli:
            if m < 2:
                raise CoprimalityError(f"modulus {m} < 2", stage="rns")
        for a, b in combinations(self.moduli, 2):
            if gcd(a, b) != 1:
                raise CoprimalityError(
                    f"moduli {a} and {b} share factor {gcd(a, b)}", stage="rns")
        M = prod(self.moduli)
        mhat = tuple(M // m for m in self.moduli)
        object.__setattr__(self, "M", M)
        object.__setattr__(self, "mhat", mhat)
        object.__setattr__(
            self, "T", tuple(mod_inv(h % m, m) for h, m in zip(mhat, self.moduli)))

    def __len__(self):
        return len(self.moduli)


@dataclass(frozen=True)
class ResidueVector:
    values: tuple[int, ...]


def build_moduli_set(moduli) -> ModuliSet:
    return ModuliSet(tuple(int(m) for m in moduli))


def to_residues(ms: ModuliSet, x: int) -> ResidueVector:
    if not 0 <= x < ms.M:
        raise DynamicRangeError(
            f"{x} outside dynamic range [0, {ms.M})", stage="rns")
    return ResidueVector(tuple(x % m for m in ms.moduli))


def from_residues(ms: ModuliSet, r: ResidueVector | tuple[int, ...]) -> int:
    values = r.values if isinstance(r, ResidueVector) else tuple(r)
    if len(values) != len(ms.moduli):
        raise MalformedResidueError(
            f"expected {len(ms.moduli)} residues, got {len(values)}", stage="rns")
    for x, m in zip(values, ms.moduli):
        if not 0 <= x < m:
            raise MalformedResidueError(f"residue {x} outside [0, {m})", stage="rns")
    total = sum(h * t * x for h, t, x in zip(ms.mhat, ms.T, values))
    return total % ms.M
