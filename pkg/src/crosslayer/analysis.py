"""Attack-cost and throughput/BER calculators, plus CSV sweeps.

The cascade attack count is evaluated with exact rationals and only turned
into a float at the end, so large ``k!`` and ``2**k`` factors do not lose
precision; values past the float range come back as ``mpmath.mpf``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath

from .errors import ParameterError, ProfileError, SweepError

__all__ = [
    "AttackParams",
    "CodeProfile",
    "PROFILE_K2",
    "PROFILE_K4",
    "PROFILES",
    "fermat_steps",
    "fermat_steps_forms",
    "cascade_attack_steps",
    "cascade_attack_steps_exact",
    "combined_attack_steps",
    "throughput",
    "pb_bound",
    "parse_grid",
    "CurveSpec",
    "emit_curves",
]


@dataclass(frozen=True)
class AttackParams:
    p_blocks: int
    q_states: int
    k: int
    N: int
    rsa_p: int = 13
    rsa_q: int = 37

    def __post_init__(self):
        if self.p_blocks - self.k - 1 <= 0:
            raise ParameterError(
                f"need p > k + 1 (p={self.p_blocks}, k={self.k})", stage="analysis")
        if self.q_states < 1 or self.N < 1 or self.k < 1:
            raise ParameterError("q, N and k must be positive", stage="analysis")


@dataclass(frozen=True)
class CodeProfile:
    """Transfer-function weights ``a_d`` of a code with diversity ``L = d_free``."""

    name: str
    k: int
    L: int
    a_d: dict = field(hash=False)

    def __post_init__(self):
        if not self.a_d:
            raise ProfileError("empty path-weight profile", stage="analysis")
        if min(self.a_d) != self.L:
            raise ProfileError(
                f"smallest distance {min(self.a_d)} differs from L={self.L}", stage="analysis")


PROFILE_K2 = CodeProfile("2,2,2", 2, 3, {3: 1, 4: 2})
PROFILE_K4 = CodeProfile("4,4,2", 4, 3, {3: 1, 4: 2, 5: 3, 6: 5, 7: 9, 8: 16,
                                         9: 28, 10: 49, 11: 85})
PROFILES = {p.name: p for p in (PROFILE_K2, PROFILE_K4)}


def fermat_steps_forms(rsa_p: int, rsa_q: int, dps: int = 50) -> tuple[float, float, float]:
    """The three printed forms: ``(p+q)/2 - sqrt(pq)``, ``(sqrt q - sqrt p)^2 / 2``
    and ``(sqrt n - p)^2 / (2p)``."""
    with mpmath.workdps(dps):
        p, q = mpmath.mpf(rsa_p), mpmath.mpf(rsa_q)
        n = p * q
        a = (p + q) / 2 - mpmath.sqrt(n)
        b = (mpmath.sqrt(q) - mpmath.sqrt(p)) ** 2 / 2
        c = (mpmath.sqrt(n) - p) ** 2 / (2 * p)
        return float(a), float(b), float(c)


def fermat_steps(rsa_p: int, rsa_q: int) -> float:
    if min(rsa_p, rsa_q) < 2:
        raise ParameterError("primes must be >= 2", stage="analysis")
    return fermat_steps_forms(rsa_p, rsa_q)[0]


def cascade_attack_steps_exact(ap: AttackParams) -> Fraction:
    p, q, k = ap.p_blocks, ap.q_states, ap.k
    inner = (Fraction(q << k, p - k - 1) * Fraction(q << k, p)
             * Fraction(math.factorial(k), p) * Fraction(1, p)
             * Fraction(k, 2) ** 2 * 4)
    return (p * inner) ** ap.N


def _as_real(x: Fraction):
    try:
        return x.numerator / x.denominator
    except OverflowError:
        return mpmath.mpf(x.numerator) / x.denominator


def cascade_attack_steps(ap: AttackParams):
    """Plaintext-ciphertext pairs needed against an ``N``-stage cascade, as printed."""
    return _as_real(cascade_attack_steps_exact(ap))


def combined_attack_steps(ap: AttackParams):
    return fermat_steps(ap.rsa_p, ap.rsa_q) * cascade_attack_steps(ap)


def throughput(R: float, pe: float, N: int, mode: str = "exact") -> float:
    if not 0.0 <= pe <= 1.0 or N < 1 or R <= 0:
        raise ParameterError("need 0 <= pe <= 1, N >= 1, R > 0", stage="analysis")
    if mode == "exact":
        return R * (1.0 - pe) ** N
    if mode == "approx":
        return max(0.0, R * (1.0 - N * pe))
    raise ParameterError(f"unknown throughput mode {mode!r}", stage="analysis")


def pb_bound(profile: CodeProfile, gamma_b: float, exponent_mode: str = "L") -> float:
    """Union bound on bit error probability for coded orthogonal ``k``-bit symbols.

    ``exponent_mode="L"`` raises every term to the diversity ``L``;
    ``"d"`` uses each path's own distance.
    """
    if gamma_b <= 0:
        raise ParameterError("SNR per bit must be positive", stage="analysis")
    k, L = profile.k, profile.L
    x = k / L * gamma_b
    bracket = 4 * (1 + x) / (2 + x) ** 2
    total = 0.0
    for d, a in sorted(profile.a_d.items()):
        if d > 1 << k:
            break
        if exponent_mode == "L":
            total += a * bracket ** L
        elif exponent_mode == "d":
            total += a * bracket ** d
        else:
            raise ParameterError(f"unknown exponent mode {exponent_mode!r}", stage="analysis")
    return (2 ** (k - 1) / (2 ** k - 1)) * total


def parse_grid(spec: str) -> list[float]:
    """``"start:stop:step"`` (inclusive) or a comma list of values."""
    try:
        if ":" in spec:
            start, stop, step = (float(v) for v in spec.split(":"))
            if step <= 0 or stop < start:
                raise SweepError(f"bad grid {spec!r}", stage="analysis")
            count = int(math.floor((stop - start) / step + 1e-9)) + 1
            return [start + i * step for i in range(count)]
        values = [float(v) for v in spec.split(",") if v.strip()]
    except ValueError:
        raise SweepError(f"cannot parse grid {spec!r}", stage="analysis") from None
    if not values:
        raise SweepError("empty grid", stage="analysis")
    return values


def _fmt(x) -> str:
    if isinstance(x, int):
        return str(x)
    if isinstance(x, mpmath.mpf):
        return mpmath.nstr(x, 12, min_fixed=0, max_fixed=0)
    return format(x, ".12g")


@dataclass
class CurveSpec:
    """What :func:`emit_curves` should tabulate.

    ``kind`` is ``"ber"`` (grid in dB), ``"throughput"`` (grid of bit error
    probabilities) or ``"attack"`` (grid of stage counts ``N``).
    """

    kind: str
    grid: Sequence[float]
    profiles: Sequence[CodeProfile] = (PROFILE_K2, PROFILE_K4)
    exponent_mode: str = "L"
    rate: float = 1.0
    block_bits: int = 64
    attack: AttackParams | None = None


def emit_curves(spec: CurveSpec) -> str:
    if not spec.grid:
        raise SweepError("empty grid", stage="analysis")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if spec.kind == "ber":
        w.writerow(["snr_db"] + [f"pb_k{p.k}" for p in spec.profiles])
        for db in spec.grid:
            g = 10 ** (db / 10)
            w.writerow([_fmt(db)] + [_fmt(pb_bound(p, g, spec.exponent_mode))
                                     for p in spec.profiles])
    elif spec.kind == "throughput":
        w.writerow(["pe", "exact", "approx"])
        for pe in spec.grid:
            w.writerow([_fmt(pe), _fmt(throughput(spec.rate, pe, spec.block_bits)),
                        _fmt(throughput(spec.rate, pe, spec.block_bits, "approx"))])
    elif spec.kind == "attack":
        base = spec.attack or AttackParams(10, 2, 8, 2)
        w.writerow(["N", "s1", "s2", "s"])
        for n in spec.grid:
            if n != int(n) or n < 1:
                raise SweepError(f"stage count {n} is not a positive integer",
                                 stage="analysis")
            ap = AttackParams(base.p_blocks, base.q_states, base.k, int(n),
                              base.rsa_p, base.rsa_q)
            w.writerow([int(n), _fmt(fermat_steps(ap.rsa_p, ap.rsa_q)),
                        _fmt(cascade_attack_steps(ap)), _fmt(combined_attack_steps(ap))])
    else:
        raise SweepError(f"unknown curve kind {spec.kind!r}", stage="analysis")
    return buf.getvalue()
