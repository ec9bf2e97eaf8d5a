"""Textbook RSA on small integers: key derivation, encryption, signatures.

No padding. Messages are integers below the modulus; callers segment data.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .errors import InvalidExponentError, MessageTooLargeError, NotPrimeError
from .numtheory import is_prime, mod_inv, mod_pow

__all__ = [
    "RsaKeyPair",
    "derive_keypair",
    "encrypt_value",
    "decrypt_value",
    "sign_value",
    "verify_signature",
]


@dataclass(frozen=True)
class RsaKeyPair:
    p: int
    q: int
    m: int
    e: int
    d: int

    @property
    def public(self) -> tuple[int, int]:
        return self.m, self.e

    @property
    def private(self) -> tuple[int, int]:
        return self.m, self.d

    @property
    def phi(self) -> int:
        return (self.p - 1) * (self.q - 1)


def derive_keypair(p: int, q: int, e: int) -> RsaKeyPair:
    """Build a key pair from two distinct primes and a public exponent.

    ``d`` is the least positive solution of ``e*d = 1 (mod (p-1)(q-1))``.
    """
    for name, v in (("p", p), ("q", q)):
        if not is_prime(v):
            raise NotPrimeError(f"{name}={v} is not prime", stage="rsa")
    if p == q:
        raise NotPrimeError("p and q must be distinct", stage="rsa")
    phi = (p - 1) * (q - 1)
    if e < 2 or gcd(e, phi) != 1:
        raise InvalidExponentError(
            f"e={e} is not a unit modulo (p-1)(q-1)={phi}", stage="rsa")
    return RsaKeyPair(p=p, q=q, m=p * q, e=e, d=mod_inv(e, phi))


def _apply(x: int, exponent: int, m: int, wrap: bool = False) -> int:
    if x < 0 or (x >= m and not wrap):
        raise MessageTooLargeError(f"value {x} outside [0, {m})", stage="rsa")
    return mod_pow(x, exponent, m)


def encrypt_value(pk: tuple[int, int], x: int, wrap: bool = False) -> int:
    """``x**e mod m`` for a public key ``(m, e)``.

    With ``wrap`` a value ``x >= m`` is accepted and encrypted as ``x mod m``;
    decryption then returns ``x mod m``, not ``x``.
    """
    m, e = pk
    return _apply(x, e, m, wrap)


def decrypt_value(sk: tuple[int, int], c: int) -> int:
    """``c**d mod m`` for a private key ``(m, d)``."""
    m, d = sk
    return _apply(c, d, m)


# Signing is the private-key primitive applied to the plaintext.
sign_value = decrypt_value


def verify_signature(pk: tuple[int, int], x: int, signature: int) -> bool:
    return encrypt_value(pk, signature) == x
