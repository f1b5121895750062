"""Fixed-width unsigned arithmetic and modular algorithms.

Every quantity handled by this package is a non-negative integer below
2**256 (ciphertext values need at most ring_bits + prime_bits + 8 bits,
which is 208 for the largest shipped configuration; 256 leaves headroom
and fixes serialization widths).  Python integers are exact at any size,
so the capacity contract is enforced at construction and parsing
boundaries with :func:`ensure_wide` instead of on every operation; the
ring-size precondition guarantees intermediate values stay in range.

No floating point is used anywhere in this module.  Nothing here is
constant-time: operand-dependent timing is accepted, and timing side
channels are out of scope for this artifact.
"""

from math import gcd

from .errors import CapacityExceeded, DegenerateEquation, NotCoprime

WIDE_BITS = 256
WIDE_MAX = (1 << WIDE_BITS) - 1

# Integers below 2**64 are proven prime/composite by Miller-Rabin with
# this fixed witness set (sufficient for all n < 3.3 * 10**24).
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def ensure_wide(value, what="value"):
    """Check the 256-bit capacity contract; returns the value unchanged."""
    if not isinstance(value, int) or isinstance(value, bool):
        raise TypeError(f"{what} must be an int, got {type(value).__name__}")
    if value < 0:
        raise CapacityExceeded(f"{what} is negative: {value}")
    if value > WIDE_MAX:
        raise CapacityExceeded(f"{what} exceeds {WIDE_BITS} bits")
    return value


def xgcd(a, b):
    """Iterative extended Euclid: returns (g, x, y) with a*x + b*y = g."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, old_s, old_t


def mod_inverse(a, m):
    """Return v with a*v = 1 (mod m), 0 < v < m.

    Requires 0 < a < m.  Raises NotCoprime when gcd(a, m) != 1.
    """
    if not 0 < a < m:
        raise ValueError(f"need 0 < a < m, got a={a}, m={m}")
    g, x, _ = xgcd(a, m)
    if g != 1:
        raise NotCoprime(f"gcd({a}, {m}) = {g}")
    return x % m


def pow_mod(base, exp, m):
    """base**exp mod m for m > 1; exp >= 0."""
    if m <= 1:
        raise ValueError(f"modulus must exceed 1, got {m}")
    if exp < 0:
        raise ValueError("negative exponent")
    return pow(base, exp, m)


def is_prime_64(n):
    """Deterministic primality for 0 <= n < 2**64."""
    if n < 0 or n >= 1 << 64:
        raise ValueError("is_prime_64 expects an unsigned 64-bit integer")
    if n < 2:
        return False
    for q in _SMALL_PRIMES:
        if n % q == 0:
            return n == q
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def legendre(a, p):
    """Legendre symbol of a mod an odd prime p: 1, -1, or 0."""
    ls = pow(a % p, (p - 1) // 2, p)
    return -1 if ls == p - 1 else ls


def sqrt_mod(a, p):
    """All square roots of a modulo an odd prime p, sorted ascending.

    Returns [] when a is a non-residue, [0] when a = 0, and the pair
    [r, p - r] otherwise (Tonelli-Shanks).
    """
    if p < 3 or p % 2 == 0:
        raise ValueError(f"p must be an odd prime, got {p}")
    a %= p
    if a == 0:
        return [0]
    if legendre(a, p) != 1:
        return []
    if p % 4 == 3:
        r = pow(a, (p + 1) // 4, p)
        return sorted((r, p - r))
    # write p - 1 = q * 2^s with q odd
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while legendre(z, p) != -1:
        z += 1
    c = pow(z, q, p)
    r = pow(a, (q + 1) // 2, p)
    t = pow(a, q, p)
    m = s
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        r = r * b % p
        c = b * b % p
        t = t * c % p
        m = i
    return sorted((r, p - r))


def solve_linear(a, b, p):
    """The x with a*x = b (mod p); raises DegenerateEquation when a = 0 mod p."""
    a %= p
    if a == 0:
        raise DegenerateEquation("linear coefficient vanishes mod p")
    return b % p * mod_inverse(a, p) % p


def solve_quadratic(a, b, c, p):
    """All x with a*x**2 + b*x + c = 0 (mod p), sorted ascending.

    Falls back to solve_linear when a = 0 mod p.  p must be odd.
    Raises DegenerateEquation when both a and b vanish mod p.
    """
    if p % 2 == 0:
        raise ValueError("p must be odd")
    a %= p
    b %= p
    c %= p
    if a == 0:
        if b == 0:
            raise DegenerateEquation("quadratic and linear coefficients both vanish")
        return [solve_linear(b, -c, p)]
    disc = (b * b - 4 * a * c) % p
    roots = sqrt_mod(disc, p)
    if not roots:
        return []
    inv_2a = mod_inverse(2 * a % p, p)
    xs = {(-b + s) * inv_2a % p for s in roots}
    return sorted(xs)
