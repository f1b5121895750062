"""Coefficient-wise homomorphic encryption over a hidden ring.

A key is a pair (R, S): S is a secret ring modulus and R a unit of Z_S.
Encrypting a polynomial multiplies every coefficient by R mod S; the
variables stay in F_p, so anyone can still evaluate the cipher polynomial
by computing each monomial mod p and accumulating coefficient * monomial
over the plain integers.  Whoever holds (R, S) undoes the mask with
R^-1 mod S and reduces mod p to recover the plain polynomial value.

Correctness needs the plain integer sum to stay below S, which the ring
size condition bit_length(S) > 2*bit_length(p) + bit_length(term_count)
guarantees.  The operator is additively and scalar-multiplicatively
homomorphic; it does not support multiplying two ciphertexts.
"""

from dataclasses import dataclass
from math import gcd
from typing import NamedTuple

from .modmath import ensure_wide, mod_inverse


@dataclass(frozen=True)
class HiddenRing:
    """Secret modulus S defining the coefficient ring Z_S."""

    modulus: int

    def __post_init__(self):
        ensure_wide(self.modulus, "ring modulus")
        if self.modulus < 2:
            raise ValueError("ring modulus must be at least 2")

    @property
    def bit_length(self):
        return self.modulus.bit_length()

    def supports(self, prime_bits, term_count):
        """Ring size condition for polynomials with term_count coefficients mod p."""
        return self.bit_length > 2 * prime_bits + term_count.bit_length()


@dataclass(frozen=True)
class HomomorphicKey:
    """A unit mult of the hidden ring together with its inverse."""

    ring: HiddenRing
    mult: int
    mult_inv: int

    def __post_init__(self):
        s = self.ring.modulus
        if not 0 < self.mult < s:
            raise ValueError("multiplier must lie in (0, S)")
        if self.mult * self.mult_inv % s != 1:
            raise ValueError("multiplier inverse is wrong")


@dataclass(frozen=True)
class PlainPoly:
    """Polynomial over F_p: ordered monomial exponent vectors plus coefficients.

    monomials[k] gives the exponent of each variable in term k; the
    ordering is part of the object and is preserved by encryption.
    """

    prime: int
    monomials: tuple
    coeffs: tuple

    def __post_init__(self):
        if len(self.monomials) != len(self.coeffs):
            raise ValueError("one coefficient per monomial required")
        if any(not 0 <= c < self.prime for c in self.coeffs):
            raise ValueError("coefficients must be reduced mod p")

    @property
    def term_count(self):
        return len(self.coeffs)

    def evaluate(self, assignment):
        """Plain value sum(c_k * (X_k mod p)) mod p."""
        return sum(
            c * _monomial(mono, assignment, self.prime)
            for c, mono in zip(self.coeffs, self.monomials)
        ) % self.prime


@dataclass(frozen=True)
class CipherPoly:
    """Same monomial layout as the source PlainPoly, coefficients in Z_S."""

    ring: HiddenRing
    monomials: tuple
    coeffs: tuple

    def __post_init__(self):
        if len(self.monomials) != len(self.coeffs):
            raise ValueError("one coefficient per monomial required")
        if any(not 0 <= c < self.ring.modulus for c in self.coeffs):
            raise ValueError("cipher coefficients must lie in [0, S)")


class DecryptedValue(NamedTuple):
    intermediate: int  # R^-1 * value mod S: the plain integer sum
    residue: int  # intermediate mod p: the plain polynomial value


def _monomial(exponents, assignment, p):
    v = 1
    for value, e in zip(assignment, exponents):
        if e:
            v = v * pow(value, e, p) % p
    return v


def ring_gen(bits, rng):
    """Uniformly random ring modulus with exactly the requested bit length.

    The top bit is forced so serialization widths derived from the bit
    length are exact.
    """
    if bits < 2:
        raise ValueError("ring modulus needs at least 2 bits")
    s = (1 << (bits - 1)) | rng.bits(bits - 1)
    return HiddenRing(s)


def he_keygen(ring, rng):
    """Sample a unit of Z_S by rejection and precompute its inverse."""
    s = ring.modulus
    while True:
        r = rng.below(s)
        if r != 0 and gcd(r, s) == 1:
            return HomomorphicKey(ring, r, mod_inverse(r, s))


def encrypt_value(key, value):
    """The coefficient operator: R * value mod S."""
    return key.mult * value % key.ring.modulus


def encrypt_coeffs(key, poly):
    """Encrypt every coefficient, keeping the monomial ordering."""
    coeffs = tuple(encrypt_value(key, c) for c in poly.coeffs)
    return CipherPoly(key.ring, poly.monomials, coeffs)


def eval_cipher_poly(poly, assignment, prime):
    """sum(coeff_k * (X_k mod p)) over the integers; no final reduction.

    assignment must supply a value in [0, p) for every variable the
    monomial vectors reference.
    """
    if any(not 0 <= v < prime for v in assignment):
        raise ValueError("assignment values must lie in [0, p)")
    return sum(
        c * _monomial(mono, assignment, prime)
        for c, mono in zip(poly.coeffs, poly.monomials)
    )


def decrypt_value(key, value, prime):
    """Undo the ring mask and reduce.

    Returns (intermediate, residue): the recovered plain integer sum and
    its value mod p.  Correct only when value came from eval_cipher_poly
    under the matching key and the ring size condition held; a wrong key
    yields garbage by design.
    """
    intermediate = key.mult_inv * value % key.ring.modulus
    return DecryptedValue(intermediate, intermediate % prime)
