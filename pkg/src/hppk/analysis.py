"""Desk-scale executable oracles for the security arguments.

Everything here treats attacks as verification instruments: the mod-p
view of a ciphertext, its normalization, Gaussian reduction to a single
equation, exhaustive solution enumeration, the indistinguishability
game, factor-ratio recovery from plain maps, and tiny hidden-ring key
search.  Every enumeration carries an explicit search-space guard; none
of this is a practical attack at production parameters, and the
complexity claims are checked as growth trends, not absolute numbers.
"""

import itertools
import time
from dataclasses import dataclass, field
from math import gcd

import numpy as np

from .errors import (
    DegenerateEquation,
    EliminationFailed,
    NoConsistentRatio,
    SearchSpaceTooLarge,
    ZeroRhs,
)
from .modmath import mod_inverse, solve_quadratic

_BRUTE_FORCE_GUARD = 1 << 26
_LIKELIHOOD_GUARD = 1 << 20
_RING_SEARCH_MAX_BITS = 14
_RATIO_SCAN_GUARD = 1 << 14  # largest prime for exhaustive ratio scans
_ROOT_TABLE_MAX_PRIME = 31  # vectorized ring search builds a p^3 root table


# -- the mod-p view of one ciphertext block


@dataclass(frozen=True)
class ModPSystem:
    """Two congruences sum(coeffs[i][j] * x^i * noise_j) = rhs (mod prime)."""

    prime: int
    coeffs1: tuple
    rhs1: int
    coeffs2: tuple
    rhs2: int

    def __post_init__(self):
        entries = [c for m in (self.coeffs1, self.coeffs2) for row in m for c in row]
        entries += [self.rhs1, self.rhs2]
        if any(not 0 <= c < self.prime for c in entries):
            raise ValueError("system entries must be reduced mod p")

    @property
    def noise_vars(self):
        return len(self.coeffs1[0])

    @property
    def degree(self):
        return len(self.coeffs1) - 1

    def column_values(self, coeffs, x):
        """Per-noise-variable coefficient polynomials evaluated at x."""
        p = self.prime
        out = [0] * len(coeffs[0])
        power = 1
        for row in coeffs:
            for j, c in enumerate(row):
                out[j] = (out[j] + c * power) % p
            power = power * x % p
        return out

    def is_solution(self, x, noise):
        p = self.prime
        a = self.column_values(self.coeffs1, x)
        b = self.column_values(self.coeffs2, x)
        return (
            sum(aj * r for aj, r in zip(a, noise)) % p == self.rhs1
            and sum(bj * r for bj, r in zip(b, noise)) % p == self.rhs2
        )


def reduce_mod_p(pk, ct, prime):
    """View a public key and block ciphertext modulo the field prime."""
    return ModPSystem(
        prime=prime,
        coeffs1=tuple(tuple(c % prime for c in row) for row in pk.p1),
        rhs1=ct.value1 % prime,
        coeffs2=tuple(tuple(c % prime for c in row) for row in pk.p2),
        rhs2=ct.value2 % prime,
    )


def normalize_system(sys):
    """Scale each congruence by the inverse of its right-hand side.

    Raises ZeroRhs when either right-hand side is 0 mod p, where
    normalization is undefined.
    """
    if sys.rhs1 == 0 or sys.rhs2 == 0:
        raise ZeroRhs("right-hand side is 0 mod p")
    p = sys.prime
    u1 = mod_inverse(sys.rhs1, p)
    u2 = mod_inverse(sys.rhs2, p)
    return ModPSystem(
        prime=p,
        coeffs1=tuple(tuple(c * u1 % p for c in row) for row in sys.coeffs1),
        rhs1=1,
        coeffs2=tuple(tuple(c * u2 % p for c in row) for row in sys.coeffs2),
        rhs2=1,
    )


# -- reduction to a single equation


@dataclass(frozen=True)
class ReducedNormalForm:
    """Single equation H(x, remaining noise) - 1 = 0 over F_p.

    H has no constant term: the elimination constant is scaled to -1 and
    absorbed.  noise_coeffs[i][k] multiplies x^i times the k-th surviving
    noise variable (source order with the eliminated one removed);
    pure_coeffs[i] multiplies the bare power x^i (index 0 is always 0).
    The source system and eliminated index are kept so solutions can be
    mapped back.
    """

    prime: int
    noise_coeffs: tuple
    pure_coeffs: tuple
    eliminated: int
    source: ModPSystem = field(compare=False)

    @property
    def noise_vars(self):
        return len(self.noise_coeffs[0])

    def value_at(self, x, noise):
        p = self.prime
        acc = 0
        power = 1
        for row, pure in zip(self.noise_coeffs, self.pure_coeffs):
            acc = (acc + pure * power) % p
            for c, r in zip(row, noise):
                acc = (acc + c * power * r) % p
            power = power * x % p
        return acc

    def is_solution(self, x, noise):
        return self.value_at(x, noise) == 1

    def extend_solution(self, x, noise):
        """Values of the eliminated variable completing (x, noise) in the source.

        Both source congruences are linear in the eliminated variable;
        returns every consistent value (all residues when both of its
        coefficients vanish and the remainders agree).
        """
        src = self.source
        p = src.prime
        a = src.column_values(src.coeffs1, x)
        b = src.column_values(src.coeffs2, x)
        e = self.eliminated
        rest = list(noise)
        rest[e:e] = [0]  # placeholder at the eliminated slot
        d1 = (src.rhs1 - sum(aj * r for aj, r in zip(a, rest))) % p
        d2 = (src.rhs2 - sum(bj * r for bj, r in zip(b, rest))) % p
        if a[e] != 0:
            t = d1 * mod_inverse(a[e], p) % p
            return [t] if b[e] * t % p == d2 else []
        if b[e] != 0:
            t = d2 * mod_inverse(b[e], p) % p
            return [t] if d1 == 0 else []
        return list(range(p)) if d1 == 0 and d2 == 0 else []


def _poly_mul(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return out


def reduce_to_single(sys):
    """Eliminate one noise variable, producing the single-equation form.

    Cross-multiplying the two congruences by each other's coefficient
    polynomial for the chosen variable cancels it exactly; the surviving
    constant is scaled to -1.  A variable is eliminable when it appears
    in the second congruence and the combination leaves a nonzero
    constant.  Raises EliminationFailed when no variable qualifies.
    """
    p = sys.prime
    m = sys.noise_vars
    a_cols = [[row[j] for row in sys.coeffs1] for j in range(m)]
    b_cols = [[row[j] for row in sys.coeffs2] for j in range(m)]
    for e in range(m):
        if all(c == 0 for c in b_cols[e]):
            continue
        constant = (sys.rhs2 * a_cols[e][0] - sys.rhs1 * b_cols[e][0]) % p
        if constant == 0:
            continue
        degree = 2 * sys.degree
        noise_out = [[0] * (m - 1) for _ in range(degree + 1)]
        for k, j in enumerate(jj for jj in range(m) if jj != e):
            cross = _poly_mul(b_cols[e], a_cols[j], p)
            minus = _poly_mul(a_cols[e], b_cols[j], p)
            for i in range(len(cross)):
                noise_out[i][k] = (cross[i] - minus[i]) % p
        pure = [0] * (degree + 1)
        for i in range(sys.degree + 1):
            pure[i] = (sys.rhs2 * a_cols[e][i] - sys.rhs1 * b_cols[e][i]) % p
        pure[0] = 0  # the constant moves into the -1
        scale = mod_inverse(-constant % p, p)
        return ReducedNormalForm(
            prime=p,
            noise_coeffs=tuple(
                tuple(c * scale % p for c in row) for row in noise_out
            ),
            pure_coeffs=tuple(c * scale % p for c in pure),
            eliminated=e,
            source=sys,
        )
    raise EliminationFailed("no noise variable admits elimination")


# -- exhaustive solving


@dataclass(frozen=True)
class SolutionSet:
    """Exhaustive enumeration result; every member satisfies the source."""

    source: object = field(compare=False)
    solutions: tuple = ()

    @property
    def count(self):
        return len(self.solutions)

    def __contains__(self, assignment):
        return tuple(assignment) in set(self.solutions)


def brute_force_solutions(target):
    """Enumerate all assignments over F_p satisfying the system or reduced form.

    The search space p**variables must stay at or below 2**26; larger
    requests raise SearchSpaceTooLarge.
    """
    p = target.prime
    nvars = 1 + target.noise_vars
    if p**nvars > _BRUTE_FORCE_GUARD:
        raise SearchSpaceTooLarge(f"{p}**{nvars} assignments exceed the guard")
    sols = []
    if isinstance(target, ReducedNormalForm):
        for x in range(p):
            for noise in itertools.product(range(p), repeat=target.noise_vars):
                if target.is_solution(x, noise):
                    sols.append((x, *noise))
        return SolutionSet(target, tuple(sols))
    m = target.noise_vars
    for x in range(p):
        a = target.column_values(target.coeffs1, x)
        b = target.column_values(target.coeffs2, x)
        for noise in itertools.product(range(p), repeat=m):
            if (
                sum(aj * r for aj, r in zip(a, noise)) % p == target.rhs1
                and sum(bj * r for bj, r in zip(b, noise)) % p == target.rhs2
            ):
                sols.append((x, *noise))
    return SolutionSet(target, tuple(sols))


def random_planted_system(params, rng):
    """A random system of the profile's shape with a planted witness.

    Coefficient tables are drawn uniformly and the right-hand sides set
    by evaluating at a random assignment, which is returned alongside.
    This is the generic-instance model under which the expected solution
    count is p**(noise_vars - 1).
    """
    p = params.prime
    rows = params.message_degree + 1
    m = params.noise_vars
    coeffs1 = tuple(
        tuple(rng.below(p) for _ in range(m)) for _ in range(rows)
    )
    coeffs2 = tuple(
        tuple(rng.below(p) for _ in range(m)) for _ in range(rows)
    )
    x = rng.below(p)
    noise = tuple(rng.below(p) for _ in range(m))
    powers = [pow(x, i, p) for i in range(rows)]
    rhs1 = sum(
        coeffs1[i][j] * powers[i] * noise[j] for i in range(rows) for j in range(m)
    ) % p
    rhs2 = sum(
        coeffs2[i][j] * powers[i] * noise[j] for i in range(rows) for j in range(m)
    ) % p
    sys = ModPSystem(p, coeffs1, rhs1, coeffs2, rhs2)
    return sys, (x, *noise)


# -- the indistinguishability game


@dataclass(frozen=True)
class IndCpaChallenge:
    """What the adversary sees in one round of the game.

    public_coeffs is the instance polynomial H (the normalized public
    key); challenge_coeffs is H scaled by the inverse of its evaluation
    at the hidden message and noise; evaluation is that value itself,
    which is derivable from the two tables and included for convenience.
    """

    prime: int
    public_coeffs: tuple
    challenge_coeffs: tuple
    evaluation: int

    @property
    def noise_vars(self):
        return len(self.public_coeffs[0])

    def column_values(self, message):
        p = self.prime
        out = [0] * self.noise_vars
        power = 1
        for row in self.public_coeffs:
            for j, c in enumerate(row):
                out[j] = (out[j] + c * power) % p
            power = power * message % p
        return out


def ind_cpa_game(params, adversary, trials, rng):
    """Measured distinguishing advantage of an adversary over the game.

    Each round draws a fresh instance polynomial in the message variable
    and noise_vars - 1 noise variables, two distinct candidate messages,
    a hidden bit, and noise; the adversary receives both messages and the
    normalized challenge and guesses the bit.  Returns
    |win_rate - 1/2|.
    """
    if params.noise_vars < 2:
        raise ValueError("the game needs at least one noise variable")
    p = params.prime
    rows = params.message_degree + 1
    m = params.noise_vars - 1
    wins = 0
    done = 0
    while done < trials:
        table = [[rng.below(p) for _ in range(m)] for _ in range(rows)]
        m0 = rng.below(p)
        m1 = rng.below(p)
        while m1 == m0:
            m1 = rng.below(p)
        hidden = rng.bits(1)
        message = m1 if hidden else m0
        cols = [0] * m
        power = 1
        for row in table:
            for j, c in enumerate(row):
                cols[j] = (cols[j] + c * power) % p
            power = power * message % p
        if all(c == 0 for c in cols):
            continue  # evaluation identically zero; redraw the instance
        evaluation = 0
        while evaluation == 0:
            noise = [rng.below(p) for _ in range(m)]
            evaluation = sum(c * r for c, r in zip(cols, noise)) % p
        scale = mod_inverse(evaluation, p)
        challenge = IndCpaChallenge(
            prime=p,
            public_coeffs=tuple(tuple(row) for row in table),
            challenge_coeffs=tuple(
                tuple(c * scale % p for c in row) for row in table
            ),
            evaluation=evaluation,
        )
        guess = adversary(m0, m1, challenge)
        wins += 1 if guess == hidden else 0
        done += 1
    return abs(wins / trials - 0.5)


class RandomGuessAdversary:
    """Flips a coin; the baseline whose advantage concentrates at zero."""

    def __init__(self, rng):
        self._rng = rng

    def __call__(self, m0, m1, challenge):
        return self._rng.bits(1)


class ConstantAdversary:
    """Always answers the same bit."""

    def __init__(self, bit):
        self._bit = bit

    def __call__(self, m0, m1, challenge):
        return self._bit


class ExhaustiveLikelihoodAdversary:
    """Counts, for each candidate message, the noise vectors explaining the
    evaluation, and guesses the likelier one; ties are coin flips.

    This is the statistically optimal strategy given the challenge, and
    its measured advantage decays as the noise dimension grows.
    """

    def __init__(self, rng):
        self._rng = rng

    def __call__(self, m0, m1, challenge):
        p = challenge.prime
        m = challenge.noise_vars
        if p**m > _LIKELIHOOD_GUARD:
            raise SearchSpaceTooLarge("likelihood enumeration exceeds the guard")
        counts = []
        for candidate in (m0, m1):
            cols = challenge.column_values(candidate)
            counts.append(
                sum(
                    1
                    for noise in itertools.product(range(p), repeat=m)
                    if sum(c * r for c, r in zip(cols, noise)) % p
                    == challenge.evaluation
                )
            )
        if counts[0] > counts[1]:
            return 0
        if counts[1] > counts[0]:
            return 1
        return self._rng.bits(1)


# -- factor-ratio recovery from plain maps


RATIO_INFINITE = (1, 0)  # projective marker: constant coefficient is zero


def true_ratio(factor, prime):
    """Projective ratio (f1 * f0^-1, 1) of a degree-1 factor, or (1, 0)."""
    if factor[0] % prime == 0:
        return RATIO_INFINITE
    return (factor[1] * mod_inverse(factor[0], prime) % prime, 1)


def _ratio_consistent(column, u, v, base_degree, prime):
    """Check one column against scaled factor coefficients (u, v) = (f1, f2)/f0."""
    b_prev = b_prev2 = 0
    for i, value in enumerate(column):
        residual = (value - u * b_prev - v * b_prev2) % prime
        if i <= base_degree:
            b_prev2, b_prev = b_prev, residual
        else:
            if residual != 0:
                return False
            b_prev2, b_prev = b_prev, 0
    return True


def _column_ratio_roots(column, base_degree, prime):
    """All finite ratios consistent with one column (degree-1 factors)."""
    if base_degree == 1:
        # r^2 * p0 - r * p1 + p2 = 0
        try:
            return set(
                solve_quadratic(column[0], -column[1] % prime, column[2], prime)
            )
        except DegenerateEquation:
            return set()  # column is (0, 0, c) with c != 0: nothing fits
    if prime > _RATIO_SCAN_GUARD:
        raise SearchSpaceTooLarge("ratio scan needs a small prime")
    return {
        r
        for r in range(prime)
        if _ratio_consistent(column, r, 0, base_degree, prime)
    }


def _map_ratio_candidates(rows, prime, base_degree, factor_degree):
    p = prime
    nb = base_degree
    columns = [[row[j] for row in rows] for j in range(len(rows[0]))]
    live = [col for col in columns if any(col)]
    if not live:
        raise NoConsistentRatio("zero map constrains nothing")
    if factor_degree == 1:
        finite = None
        for col in live:
            roots = _column_ratio_roots(col, nb, p)
            finite = roots if finite is None else finite & roots
            if not finite:
                break
        candidates = {(r, 1) for r in finite} if finite else set()
        if all(col[0] == 0 for col in columns):
            candidates.add(RATIO_INFINITE)
        return candidates
    # degree-2 factors: exhaustive scan over both scaled coefficients
    if p * p > 1 << 22:
        raise SearchSpaceTooLarge("pair scan needs a small prime")
    candidates = {
        (u, v)
        for u in range(p)
        for v in range(p)
        if all(_ratio_consistent(col, u, v, nb, p) for col in live)
    }
    return candidates


def recover_f_ratio(plain1, plain2, params):
    """Recover the factor-coefficient ratios from both plain central maps.

    For degree-1 factors each result is a set of projective pairs
    (ratio, 1), plus (1, 0) when the constant coefficient must vanish;
    the true ratio of the generating factor is always a member.  For
    degree-2 factors each result is a set of pairs (f1/f0, f2/f0).
    Raises NoConsistentRatio when a map admits no product structure.
    """
    out = []
    for rows in (plain1, plain2):
        candidates = _map_ratio_candidates(
            rows, params.prime, params.base_degree, params.factor_degree
        )
        if not candidates:
            raise NoConsistentRatio("no ratio satisfies every column")
        out.append(frozenset(candidates))
    return tuple(out)


# -- hidden-ring key search


def random_ring_instance(params, s_bits, rng):
    """A key pair over an s_bits-wide ring, for search experiments.

    The ring width is deliberately not held to the decryption size
    condition: the search target only needs the masked product structure,
    and shrinking the ring is what makes enumeration tractable.
    """
    from .block import keypair_from_values

    p = params.prime
    modulus = (1 << (s_bits - 1)) | rng.bits(s_bits - 1)
    units = []
    while len(units) < 2:
        r = rng.below(modulus)
        if r != 0 and gcd(r, modulus) == 1:
            units.append(r)

    def factor():
        coeffs = [rng.below(p) for _ in range(params.factor_degree + 1)]
        while coeffs[-1] == 0:
            coeffs[-1] = rng.below(p)
        return coeffs

    f1 = factor()
    f2 = factor()
    while all(
        (f1[i] * f2[k] - f1[k] * f2[i]) % p == 0
        for i in range(len(f1))
        for k in range(len(f1))
    ):
        f2 = factor()
    base = [
        [rng.below(p) for _ in range(params.noise_vars)]
        for _ in range(params.base_degree + 1)
    ]
    return keypair_from_values(params, modulus, units[0], units[1], f1, f2, base)


@dataclass(frozen=True)
class RingCandidate:
    modulus: int
    r1_options: tuple
    r2_options: tuple


@dataclass
class RingSearchResult:
    candidates: tuple
    work: int
    elapsed: float

    @property
    def total_triples(self):
        return sum(len(c.r1_options) * len(c.r2_options) for c in self.candidates)

    def contains(self, modulus, r1, r2):
        for c in self.candidates:
            if c.modulus == modulus:
                return r1 in c.r1_options and r2 in c.r2_options
        return False


def _root_exists_table(prime):
    """Bitmask of roots for every quadratic (a, b, c), flattened a*p*p + b*p + c."""
    size = prime**3
    table = np.zeros(size, dtype=np.uint32)
    a = np.arange(size, dtype=np.int64) // (prime * prime)
    b = (np.arange(size, dtype=np.int64) // prime) % prime
    c = np.arange(size, dtype=np.int64) % prime
    for r in range(prime):
        hits = (a * r * r + b * r + c) % prime == 0
        table[hits] |= np.uint32(1 << r)
    return table


def _search_map_vectorized(matrix, modulus, units, prime, root_table):
    """Unit multipliers consistent with a product structure, fast path.

    matrix is the cipher map; a candidate V is accepted when the columns
    of (V * matrix mod modulus) mod prime share a quadratic ratio root or
    all constant-row entries vanish.
    """
    mask = None
    infinite = None
    live = None
    p2 = prime * prime
    for j in range(len(matrix[0])):
        c0 = units * matrix[0][j] % modulus % prime
        c1 = units * matrix[1][j] % modulus % prime
        c2 = units * matrix[2][j] % modulus % prime
        col_mask = root_table[c0 * p2 + (prime - c1) % prime * prime + c2]
        col_live = (c0 != 0) | (c1 != 0) | (c2 != 0)
        mask = col_mask if mask is None else mask & col_mask
        infinite = (c0 == 0) if infinite is None else infinite & (c0 == 0)
        live = col_live if live is None else live | col_live
    return units[((mask != 0) | infinite) & live]


def _search_map_scalar(matrix, modulus, unit, params):
    rows = [[unit * c % modulus % params.prime for c in row] for row in matrix]
    try:
        return bool(
            _map_ratio_candidates(
                rows, params.prime, params.base_degree, params.factor_degree
            )
        )
    except NoConsistentRatio:
        return False


def ring_key_search(pk, params, s_bits, use_fast_path=True):
    """Enumerate (S, R1, R2) triples that reproduce a product structure.

    Brute-force over ring moduli of the given bit length and their units;
    a pair (S, R) is kept when R^-1 times a cipher map, reduced mod S and
    then mod p, is consistent with some factor ratio.  Moduli at or below
    the largest public coefficient are skipped (coefficients are reduced
    mod S, so S must exceed them all).  The result groups accepted R1 and
    R2 values per modulus; the true key is always present, usually among
    many indistinguishable companions.  s_bits is capped at 14.
    """
    if s_bits > _RING_SEARCH_MAX_BITS:
        raise SearchSpaceTooLarge(f"ring search capped at {_RING_SEARCH_MAX_BITS} bits")
    if params.base_degree >= 2 and params.prime > _RATIO_SCAN_GUARD:
        raise SearchSpaceTooLarge("per-candidate ratio scan needs a small prime")
    if params.factor_degree == 2 and params.prime**2 > 1 << 22:
        raise SearchSpaceTooLarge("per-candidate pair scan needs a small prime")
    start = time.perf_counter()
    max_entry = max(max(max(row) for row in m) for m in (pk.p1, pk.p2))
    lo = max(1 << (s_bits - 1), max_entry + 1)
    hi = 1 << s_bits
    fast = (
        use_fast_path
        and params.factor_degree == 1
        and params.base_degree == 1
        and params.prime <= _ROOT_TABLE_MAX_PRIME
    )
    root_table = _root_exists_table(params.prime) if fast else None
    work = 0
    found = []
    for modulus in range(lo, hi):
        if fast:
            values = np.arange(1, modulus, dtype=np.int64)
            units = values[np.gcd(values, modulus) == 1]
            work += len(units)
            inv1 = _search_map_vectorized(
                pk.p1, modulus, units, params.prime, root_table
            )
            if len(inv1) == 0:
                continue
            work += len(units)
            inv2 = _search_map_vectorized(
                pk.p2, modulus, units, params.prime, root_table
            )
            if len(inv2) == 0:
                continue
            r1s = tuple(mod_inverse(int(v), modulus) for v in inv1)
            r2s = tuple(mod_inverse(int(v), modulus) for v in inv2)
        else:
            units = [v for v in range(1, modulus) if gcd(v, modulus) == 1]
            work += len(units)
            inv1 = [v for v in units if _search_map_scalar(pk.p1, modulus, v, params)]
            if not inv1:
                continue
            work += len(units)
            inv2 = [v for v in units if _search_map_scalar(pk.p2, modulus, v, params)]
            if not inv2:
                continue
            r1s = tuple(mod_inverse(v, modulus) for v in inv1)
            r2s = tuple(mod_inverse(v, modulus) for v in inv2)
        found.append(
            RingCandidate(modulus, tuple(sorted(r1s)), tuple(sorted(r2s)))
        )
    return RingSearchResult(
        candidates=tuple(found),
        work=work,
        elapsed=time.perf_counter() - start,
    )
