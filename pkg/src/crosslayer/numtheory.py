"""Exact modular arithmetic on Python ints.

Python's ``int`` is already an arbitrary-precision non-negative-capable
integer, so it stands in for a dedicated big-unsigned type; functions reject
negative inputs where the math requires it.
"""

from __future__ import annotations

import random

from .errors import InvalidModulusError, NoInverseError

__all__ = [
    "mod_pow",
    "egcd",
    "mod_inv",
    "reduce_by_bitwidth",
    "reduction_steps",
    "is_prime",
]

_TRIAL_LIMIT = 1 << 32
_MR_ROUNDS = 64
_MR_SEED = 0x5EED_C0DE


def _check_modulus(modulus: int) -> None:
    if modulus < 2:
        raise InvalidModulusError(f"modulus must be >= 2, got {modulus}")


def mod_pow(base: int, exponent: int, modulus: int) -> int:
    """Left-to-right square-and-multiply ``base**exponent % modulus``.

    Raises:
        InvalidModulusError: if ``modulus < 2``.
    """
    _check_modulus(modulus)
    if exponent < 0:
        raise ValueError("exponent must be non-negative")
    base %= modulus
    result = 1
    for bit in bin(exponent)[2:]:
        result = result * result % modulus
        if bit == "1":
            result = result * base % modulus
    return result


def egcd(a: int, b: int) -> tuple[int, int, int]:
    """Iterative extended Euclid: returns ``(g, x, y)`` with ``a*x + b*y == g``."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def mod_inv(a: int, modulus: int) -> int:
    """Multiplicative inverse of ``a`` in ``Z_modulus``, in ``[1, modulus)``.

    Raises:
        InvalidModulusError: if ``modulus < 2``.
        NoInverseError: if ``gcd(a, modulus) != 1``.
    """
    _check_modulus(modulus)
    g, x, _ = egcd(a % modulus, modulus)
    if g != 1:
        raise NoInverseError(f"{a} has no inverse modulo {modulus} (gcd {g})")
    return x % modulus


def reduction_steps(x: int, n: int) -> list[int]:
    """Intermediate values of the shift-and-fold reduction, starting at ``x``.

    Each fold replaces ``x`` by ``low + (2**b - n) * high`` where ``b`` is the
    bit length of ``n``, ``low`` the bottom ``b`` bits and ``high = x >> b``.
    Folding stops once ``x < 2**b``; the final conditional subtraction is not
    included in the returned trace.
    """
    _check_modulus(n)
    if x < 0:
        raise ValueError("x must be non-negative")
    width = n.bit_length()
    mask = (1 << width) - 1
    fold = (1 << width) - n
    trace = [x]
    while x >> width:
        x = (x & mask) + fold * (x >> width)
        trace.append(x)
    return trace


def reduce_by_bitwidth(x: int, n: int) -> int:
    """``x mod n`` using only shifts, masks, multiplies and one compare/subtract.

    Since ``2**(b-1) <= n < 2**b`` the folded value is below ``2 * n``, so a
    single conditional subtraction finishes the reduction.
    """
    x = reduction_steps(x, n)[-1]
    if x >= n:
        x -= n
    return x


def _miller_rabin(n: int, rounds: int, seed: int) -> bool:
    d, s = n - 1, 0
    while not d & 1:
        d >>= 1
        s += 1
    rng = random.Random(seed)
    for _ in range(rounds):
        a = rng.randrange(2, n - 1)
        x = mod_pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def is_prime(n: int) -> bool:
    """Trial division below 2**32, seeded Miller-Rabin (64 rounds) above."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    if n < _TRIAL_LIMIT:
        # f, f + 2 walk the 6k -/+ 1 candidates from 41 = 6*7 - 1
        f = 41
        while f * f <= n:
            if n % f == 0 or n % (f + 2) == 0:
                return False
            f += 6
        return True
    return _miller_rabin(n, _MR_ROUNDS, _MR_SEED)
