"""HPPK block cipher core: key construction, one-block encrypt/decrypt.

A key pair starts from a base polynomial b (degree base_degree in the
message variable, linear in each noise variable) and two factor
polynomials f1, f2 over F_p.  The plain public maps are the products
p1 = b*f1 and p2 = b*f2, held as (message_degree+1) x noise_vars
coefficient matrices; the published key masks each map with its own
hidden-ring multiplier.  b is used only to build the products and is
discarded.

Encrypting evaluates both cipher maps at the secret x and fresh noise,
over the integers.  Decrypting unmasks both values, reduces mod p, and
divides: the base polynomial cancels, leaving f1(x)/f2(x), from which x
is recovered by solving a linear (factor_degree 1) or quadratic
(factor_degree 2) congruence.  Degree-2 profiles embed an 8-bit CRC flag
in the plaintext so the right root can be identified.
"""

from dataclasses import dataclass

from . import fhe
from .errors import AllZeroNoise, NoValidRoot, PayloadTooLarge, ZeroDenominator
from .modmath import ensure_wide, mod_inverse, solve_linear, solve_quadratic

_CRC_POLY = 0x07  # x^8 + x^2 + x + 1, MSB first, init 0, no final xor


@dataclass(frozen=True)
class PrivateKey:
    """Hidden ring modulus, the two unit multipliers with inverses, and f1, f2."""

    modulus: int
    r1: int
    r2: int
    r1_inv: int
    r2_inv: int
    f1: tuple
    f2: tuple

    def __post_init__(self):
        ensure_wide(self.modulus, "ring modulus")
        for r, r_inv in ((self.r1, self.r1_inv), (self.r2, self.r2_inv)):
            if not 0 < r < self.modulus:
                raise ValueError("multiplier out of range")
            if r * r_inv % self.modulus != 1:
                raise ValueError("multiplier inverse is wrong")
        if len(self.f1) != len(self.f2):
            raise ValueError("factor polynomials must have equal length")
        if self.f1[-1] == 0 or self.f2[-1] == 0:
            raise ValueError("factor polynomials need nonzero leading coefficients")


@dataclass(frozen=True)
class PublicKey:
    """Two cipher coefficient matrices, (message_degree+1) rows x noise_vars cols."""

    p1: tuple
    p2: tuple

    def __post_init__(self):
        for mat in (self.p1, self.p2):
            widths = {len(row) for row in mat}
            if len(widths) != 1:
                raise ValueError("ragged coefficient matrix")
        if len(self.p1) != len(self.p2) or len(self.p1[0]) != len(self.p2[0]):
            raise ValueError("matrices must share one shape")

    @property
    def shape(self):
        return len(self.p1), len(self.p1[0])


@dataclass(frozen=True)
class BlockCiphertext:
    """Two unreduced integer evaluations of the cipher maps."""

    value1: int
    value2: int

    def __post_init__(self):
        ensure_wide(self.value1, "ciphertext value")
        ensure_wide(self.value2, "ciphertext value")


# -- CRC flag handling (factor_degree = 2 profiles)


def crc8(data):
    """CRC-8, polynomial 0x07, init 0x00, MSB first, no reflection or xorout."""
    crc = 0
    for byte in data:
        crc ^= byte
        for _ in range(8):
            crc = ((crc << 1) ^ _CRC_POLY) & 0xFF if crc & 0x80 else (crc << 1) & 0xFF
    return crc


def _payload_width(params):
    return (params.payload_bits + 7) // 8


def format_plaintext(payload, params):
    """Prefix the payload with its CRC-8: flag in the top 8 bits, payload below.

    The CRC is taken over the payload encoded as fixed-width little-endian
    bytes.  Raises PayloadTooLarge when the payload does not fit in
    payload_bits or the formatted value reaches the prime.
    """
    if params.factor_degree < 2:
        raise ValueError("formatted plaintexts are used by degree-2 profiles only")
    if not 0 <= payload < 1 << params.payload_bits:
        raise PayloadTooLarge(f"payload needs more than {params.payload_bits} bits")
    flag = crc8(payload.to_bytes(_payload_width(params), "little"))
    formatted = (flag << params.payload_bits) | payload
    if formatted >= params.prime:
        raise PayloadTooLarge("formatted plaintext reaches the field prime")
    return formatted


def extract_payload(formatted, params):
    return formatted & ((1 << params.payload_bits) - 1)


def verify_flag(formatted, params):
    """True iff the top 8 bits equal the CRC-8 of the remaining bits."""
    payload = extract_payload(formatted, params)
    flag = formatted >> params.payload_bits
    return flag == crc8(payload.to_bytes(_payload_width(params), "little"))


# -- key construction


def build_plain_central_map(base_rows, factor, prime):
    """Multiply the base polynomial by one factor, column by column.

    base_rows is (base_degree+1) x noise_vars; factor has factor_degree+1
    coefficients, ascending.  Row i of the output collects every product
    base[s][j] * factor[t] with s + t = i, mod prime: a per-column
    convolution.
    """
    n_out = len(base_rows) - 1 + len(factor) - 1
    cols = len(base_rows[0])
    out = [[0] * cols for _ in range(n_out + 1)]
    for j in range(cols):
        for s, row in enumerate(base_rows):
            for t, f in enumerate(factor):
                out[s + t][j] = (out[s + t][j] + row[j] * f) % prime
    return tuple(tuple(row) for row in out)


def _proportional(f1, f2, prime):
    """True when f2 is a scalar multiple of f1 mod prime (2 x k rank <= 1)."""
    for i in range(len(f1)):
        for k in range(i + 1, len(f1)):
            if (f1[i] * f2[k] - f1[k] * f2[i]) % prime != 0:
                return False
    return True


def _sample_factor(prime, degree, rng):
    coeffs = [rng.below(prime) for _ in range(degree + 1)]
    while coeffs[-1] == 0:
        coeffs[-1] = rng.below(prime)
    return coeffs


def keypair_from_values(params, modulus, r1, r2, f1, f2, base_rows):
    """Assemble a key pair from explicit private values (fixtures, KATs)."""
    if len(f1) != params.factor_degree + 1 or len(f2) != params.factor_degree + 1:
        raise ValueError("factor length does not match the parameter set")
    if len(base_rows) != params.base_degree + 1 or any(
        len(row) != params.noise_vars for row in base_rows
    ):
        raise ValueError("base matrix shape does not match the parameter set")
    ring = fhe.HiddenRing(modulus)
    key1 = fhe.HomomorphicKey(ring, r1, mod_inverse(r1, modulus))
    key2 = fhe.HomomorphicKey(ring, r2, mod_inverse(r2, modulus))
    if _proportional(f1, f2, params.prime):
        raise ValueError("factor polynomials are proportional mod p")
    plain1 = build_plain_central_map(base_rows, f1, params.prime)
    plain2 = build_plain_central_map(base_rows, f2, params.prime)
    pk = PublicKey(
        tuple(tuple(fhe.encrypt_value(key1, c) for c in row) for row in plain1),
        tuple(tuple(fhe.encrypt_value(key2, c) for c in row) for row in plain2),
    )
    sk = PrivateKey(
        modulus=modulus,
        r1=r1,
        r2=r2,
        r1_inv=key1.mult_inv,
        r2_inv=key2.mult_inv,
        f1=tuple(f1),
        f2=tuple(f2),
    )
    return sk, pk


def keygen(params, rng):
    """Sample a key pair.

    Draw order is fixed (it is the seeded-KAT contract): ring modulus,
    r1, r2, f1 coefficients ascending, f2 likewise, then the base matrix
    row-major.  Constraints are enforced by resampling: multipliers must
    be units, leading factor coefficients nonzero, and f2 is redrawn
    whole while proportional to f1.  The base matrix is discarded after
    the products are built.
    """
    p = params.prime
    ring = fhe.ring_gen(params.ring_bits, rng)
    key1 = fhe.he_keygen(ring, rng)
    key2 = fhe.he_keygen(ring, rng)
    f1 = _sample_factor(p, params.factor_degree, rng)
    f2 = _sample_factor(p, params.factor_degree, rng)
    while _proportional(f1, f2, p):
        f2 = _sample_factor(p, params.factor_degree, rng)
    base_rows = [
        [rng.below(p) for _ in range(params.noise_vars)]
        for _ in range(params.base_degree + 1)
    ]
    plain1 = build_plain_central_map(base_rows, f1, p)
    plain2 = build_plain_central_map(base_rows, f2, p)
    pk = PublicKey(
        tuple(tuple(fhe.encrypt_value(key1, c) for c in row) for row in plain1),
        tuple(tuple(fhe.encrypt_value(key2, c) for c in row) for row in plain2),
    )
    sk = PrivateKey(
        modulus=ring.modulus,
        r1=key1.mult,
        r2=key2.mult,
        r1_inv=key1.mult_inv,
        r2_inv=key2.mult_inv,
        f1=tuple(f1),
        f2=tuple(f2),
    )
    return sk, pk


# -- block encryption / decryption


def monomial_table(params, x, noise):
    """Values (x**i * noise_j) mod p for every matrix position (i, j)."""
    p = params.prime
    power = 1
    rows = []
    for i in range(params.message_degree + 1):
        rows.append([power * r % p for r in noise])
        power = power * x % p
    return rows


def encrypt_block(pk, params, x, noise):
    """Evaluate both cipher maps over the integers; no final reduction."""
    p = params.prime
    if pk.shape != (params.message_degree + 1, params.noise_vars):
        raise ValueError("public key shape does not match the parameter set")
    if not 0 <= x < p:
        raise ValueError("secret must lie in [0, p)")
    if len(noise) != params.noise_vars:
        raise ValueError("need one value per noise variable")
    if any(not 0 <= r < p for r in noise):
        raise ValueError("noise values must lie in [0, p)")
    if all(r == 0 for r in noise):
        raise AllZeroNoise("all-zero noise would produce a trivial ciphertext")
    table = monomial_table(params, x, noise)
    v1 = sum(
        c * t for row, trow in zip(pk.p1, table) for c, t in zip(row, trow)
    )
    v2 = sum(
        c * t for row, trow in zip(pk.p2, table) for c, t in zip(row, trow)
    )
    return BlockCiphertext(v1, v2)


def decrypt_block(sk, params, ct):
    """Recover the block secret from a ciphertext made under the matching key.

    Unmasks both values, reduces mod p, and solves
    f1(x) - (p1/p2) * f2(x) = 0 (mod p).  Returns x directly for
    factor_degree 1; for factor_degree 2 returns the payload of the
    unique root whose CRC flag verifies.
    """
    p = params.prime
    s = sk.modulus
    c1 = sk.r1_inv * ct.value1 % s % p
    c2 = sk.r2_inv * ct.value2 % s % p
    if c2 == 0:
        raise ZeroDenominator("second map evaluates to 0 mod p")
    ratio = c1 * mod_inverse(c2, p) % p
    # coefficients of f1(x) - ratio * f2(x), ascending degree
    diff = [(a - ratio * b) % p for a, b in zip(sk.f1, sk.f2)]
    if params.factor_degree == 1:
        return solve_linear(diff[1], -diff[0] % p, p)
    roots = solve_quadratic(diff[2], diff[1], diff[0], p)
    verified = [r for r in roots if verify_flag(r, params)]
    if len(verified) != 1:
        raise NoValidRoot(f"{len(verified)} roots passed flag verification")
    return extract_payload(verified[0], params)
