import itertools

import pytest

from hppk import analysis, kat
from hppk.block import encrypt_block, keygen, keypair_from_values
from hppk.errors import (
    EliminationFailed,
    NoConsistentRatio,
    SearchSpaceTooLarge,
    ZeroRhs,
)
from hppk.params import PARAMETER_SETS, ParameterSet
from hppk.rng import DeterministicStream

P5M2 = ParameterSet(prime=5, base_degree=1, factor_degree=1, noise_vars=2,
                    label="p5m2")
P5M3 = ParameterSet(prime=5, base_degree=1, factor_degree=1, noise_vars=3,
                    label="p5m3")
P13M2 = ParameterSet(prime=13, base_degree=1, factor_degree=1, noise_vars=2,
                     label="p13m2")
P13M3 = ParameterSet(prime=13, base_degree=1, factor_degree=1, noise_vars=3,
                     label="p13m3")


def _plain_maps(sk, pk, prime):
    plain1 = tuple(
        tuple(sk.r1_inv * c % sk.modulus % prime for c in row) for row in pk.p1
    )
    plain2 = tuple(
        tuple(sk.r2_inv * c % sk.modulus % prime for c in row) for row in pk.p2
    )
    return plain1, plain2


# -- mod-p view


def test_reduce_mod_p_toy(toy_params, toy_keypair, toy_block):
    _, pk = toy_keypair
    sys_ = analysis.reduce_mod_p(pk, toy_block, 13)
    assert sys_.coeffs1 == ((8, 12), (6, 0), (0, 3))
    assert sys_.coeffs2 == ((3, 8), (4, 3), (6, 10))
    assert (sys_.rhs1, sys_.rhs2) == (198082 % 13, 192229 % 13) == (1, 11)
    # the encrypting witness satisfies both congruences
    assert sys_.is_solution(8, (3, 6))


def test_reduce_mod_p_zero_ciphertext(toy_params, toy_keypair):
    from hppk.block import BlockCiphertext

    _, pk = toy_keypair
    sys_ = analysis.reduce_mod_p(pk, BlockCiphertext(0, 0), 13)
    assert (sys_.rhs1, sys_.rhs2) == (0, 0)


def test_normalize_system_toy(toy_params, toy_keypair, toy_block):
    _, pk = toy_keypair
    sys_ = analysis.reduce_mod_p(pk, toy_block, 13)
    norm = analysis.normalize_system(sys_)
    assert norm.rhs1 == norm.rhs2 == 1
    # equation 2 is scaled by 11^-1 = 6 mod 13
    assert norm.coeffs2[0][0] == sys_.coeffs2[0][0] * 6 % 13
    # witnesses survive scaling
    assert norm.is_solution(8, (3, 6))
    assert analysis.normalize_system(norm) == norm  # idempotent


def test_normalize_system_zero_rhs(toy_params, toy_keypair):
    from hppk.block import BlockCiphertext

    _, pk = toy_keypair
    sys_ = analysis.reduce_mod_p(pk, BlockCiphertext(13, 192229), 13)
    with pytest.raises(ZeroRhs):
        analysis.normalize_system(sys_)


# -- reduction to a single equation


def test_reduce_to_single_arity(toy_params, toy_keypair, toy_block):
    _, pk = toy_keypair
    sys_ = analysis.reduce_mod_p(pk, toy_block, 13)
    rnf = analysis.reduce_to_single(analysis.normalize_system(sys_))
    assert rnf.noise_vars == 1  # one of two noise variables eliminated
    assert rnf.pure_coeffs[0] == 0  # constant absorbed into the -1
    witness_rest = (6,) if rnf.eliminated == 0 else (3,)
    assert rnf.is_solution(8, witness_rest)
    eliminated_value = 3 if rnf.eliminated == 0 else 6
    assert rnf.extend_solution(8, witness_rest) == [eliminated_value]


def test_reduce_to_single_requires_eliminable_variable():
    sys_ = analysis.ModPSystem(
        prime=5,
        coeffs1=((1, 2), (3, 4)),
        rhs1=1,
        coeffs2=((0, 0), (0, 0)),
        rhs2=1,
    )
    with pytest.raises(EliminationFailed):
        analysis.reduce_to_single(sys_)


P7M2 = ParameterSet(prime=7, base_degree=1, factor_degree=1, noise_vars=2,
                    label="p7m2")


@pytest.mark.parametrize("params", [P5M2, P7M2], ids=["p5", "p7"])
def test_reduce_to_single_preserves_solutions_exhaustively(params):
    # all solutions of the source extend from solutions of the reduction
    rng = DeterministicStream(b"rnf-preserve" + params.label.encode())
    checked = 0
    while checked < 30:
        sys_, _ = analysis.random_planted_system(params, rng)
        try:
            norm = analysis.normalize_system(sys_)
            rnf = analysis.reduce_to_single(norm)
        except (ZeroRhs, EliminationFailed):
            continue
        source_solutions = set(analysis.brute_force_solutions(norm).solutions)
        extended = set()
        for x, *rest in analysis.brute_force_solutions(rnf).solutions:
            for value in rnf.extend_solution(x, tuple(rest)):
                full = list(rest)
                full[rnf.eliminated : rnf.eliminated] = [value]
                extended.add((x, *full))
        assert extended == source_solutions
        checked += 1


# -- exhaustive solving


def test_brute_force_toy_contains_witness(toy_params, toy_keypair, toy_block):
    _, pk = toy_keypair
    sys_ = analysis.reduce_mod_p(pk, toy_block, 13)
    sols = analysis.brute_force_solutions(sys_)
    assert (8, 3, 6) in sols
    assert sols.count == 11
    for x, *noise in sols.solutions:
        assert sys_.is_solution(x, noise)


def test_brute_force_planted_instances_mean_count():
    rng = DeterministicStream(b"planted-3")
    counts = []
    for _ in range(100):
        sys_, witness = analysis.random_planted_system(P5M2, rng)
        sols = analysis.brute_force_solutions(sys_)
        assert witness in sols
        assert sols.count >= 1
        counts.append(sols.count)
    mean = sum(counts) / len(counts)
    assert 0.5 * 5 <= mean <= 1.5 * 5  # expected p**(m-1) = 5


def test_brute_force_inconsistent_system_is_empty():
    sys_ = analysis.ModPSystem(
        prime=2, coeffs1=((0, 0), (0, 0)), rhs1=1,
        coeffs2=((0, 0), (0, 0)), rhs2=0,
    )
    assert analysis.brute_force_solutions(sys_).count == 0


def test_brute_force_guard():
    params = ParameterSet(prime=251, base_degree=1, factor_degree=1,
                          noise_vars=4, label="too-big")
    rng = DeterministicStream(b"guard")
    sys_, _ = analysis.random_planted_system(params, rng)
    with pytest.raises(SearchSpaceTooLarge):
        analysis.brute_force_solutions(sys_)


def test_hppk_ciphertext_witness_always_found():
    rng = DeterministicStream(b"hppk-witness")
    for _ in range(100):
        sk, pk = keygen(P5M2, rng)
        x = rng.below(5)
        noise = [rng.below(5) for _ in range(2)]
        while all(v == 0 for v in noise):
            noise = [rng.below(5) for _ in range(2)]
        ct = encrypt_block(pk, P5M2, x, noise)
        sols = analysis.brute_force_solutions(analysis.reduce_mod_p(pk, ct, 5))
        assert (x, *noise) in sols


# -- indistinguishability game


def test_ind_cpa_random_guess_near_half():
    rng = DeterministicStream(b"game-rng")
    adversary = analysis.RandomGuessAdversary(DeterministicStream(b"adv-rng"))
    advantage = analysis.ind_cpa_game(P13M3, adversary, 10_000, rng)
    assert advantage < 0.02


def test_ind_cpa_constant_adversary_near_half():
    rng = DeterministicStream(b"game-const")
    advantage = analysis.ind_cpa_game(P13M3, analysis.ConstantAdversary(0),
                                      10_000, rng)
    assert advantage < 0.02


def test_ind_cpa_likelihood_advantage_decays_with_noise():
    adversary = analysis.ExhaustiveLikelihoodAdversary(
        DeterministicStream(b"bayes-coin")
    )
    a2 = analysis.ind_cpa_game(P5M2, adversary, 4000,
                               DeterministicStream(b"game-m2"))
    a3 = analysis.ind_cpa_game(P5M3, adversary, 4000,
                               DeterministicStream(b"game-m3"))
    assert 0 <= a3 < a2 <= 0.5
    assert a2 > 0.05  # with one noise variable the gap is clearly visible


# -- factor ratio recovery


def test_recover_f_ratio_toy(toy_params, toy_keypair):
    sk, pk = toy_keypair
    plain1, plain2 = _plain_maps(sk, pk, 13)
    assert plain1 == ((6, 7), (9, 11), (11, 8))
    set1, set2 = analysis.recover_f_ratio(plain1, plain2, toy_params)
    # true ratios: 9 * 4^-1 = 12 and 7 * 10^-1 = 2 mod 13
    assert set1 == frozenset({(12, 1)})
    assert set2 == frozenset({(2, 1)})
    assert (12 * 12 * 6 - 12 * 9 + 11) % 13 == 0  # root check on column 1


@pytest.mark.parametrize("base_degree", [1, 2])
@pytest.mark.parametrize("prime", [13, 251])
def test_recover_f_ratio_from_keygen(prime, base_degree):
    params = ParameterSet(prime=prime, base_degree=base_degree,
                          factor_degree=1, noise_vars=2,
                          label=f"fr-{prime}-{base_degree}")
    rng = DeterministicStream(f"fratio-{prime}-{base_degree}".encode())
    for _ in range(100):
        sk, pk = keygen(params, rng)
        plain1, plain2 = _plain_maps(sk, pk, prime)
        set1, set2 = analysis.recover_f_ratio(plain1, plain2, params)
        assert analysis.true_ratio(sk.f1, prime) in set1
        assert analysis.true_ratio(sk.f2, prime) in set2


def test_recover_f_ratio_zero_constant_coefficient(toy_params):
    # f1 with zero constant coefficient has no finite ratio
    sk, pk = keypair_from_values(
        toy_params, 6798, 4267, 6475, (0, 9), (10, 7), ((8, 5), (7, 11))
    )
    plain1, plain2 = _plain_maps(sk, pk, 13)
    set1, set2 = analysis.recover_f_ratio(plain1, plain2, toy_params)
    assert analysis.RATIO_INFINITE in set1
    assert analysis.true_ratio((0, 9), 13) == analysis.RATIO_INFINITE
    assert (2, 1) in set2


def test_recover_f_ratio_rejects_random_matrices():
    rng = DeterministicStream(b"non-product")
    rejected = 0
    trials = 100
    for _ in range(trials):
        m1 = tuple(tuple(rng.below(13) for _ in range(2)) for _ in range(3))
        m2 = tuple(tuple(rng.below(13) for _ in range(2)) for _ in range(3))
        try:
            analysis.recover_f_ratio(m1, m2, P13M2)
        except NoConsistentRatio:
            rejected += 1
    assert rejected >= 90


def test_recover_f_ratio_degree2():
    params = ParameterSet(prime=257, base_degree=1, factor_degree=2,
                          noise_vars=2, label="fr-deg2")
    rng = DeterministicStream(b"fratio-deg2")
    from hppk.modmath import mod_inverse

    hits = 0
    while hits < 20:
        sk, pk = keygen(params, rng)
        if sk.f1[0] == 0 or sk.f2[0] == 0:
            continue  # pair scan reports ratios relative to a nonzero constant
        plain1, plain2 = _plain_maps(sk, pk, 257)
        set1, set2 = analysis.recover_f_ratio(plain1, plain2, params)
        inv0 = mod_inverse(sk.f1[0], 257)
        assert (sk.f1[1] * inv0 % 257, sk.f1[2] * inv0 % 257) in set1
        inv0 = mod_inverse(sk.f2[0], 257)
        assert (sk.f2[1] * inv0 % 257, sk.f2[2] * inv0 % 257) in set2
        hits += 1


# -- hidden ring search


def test_ring_search_finds_toy_key(toy_params, toy_keypair):
    sk, pk = toy_keypair
    result = analysis.ring_key_search(pk, toy_params, 13)
    assert result.contains(6798, 4267, 6475)
    assert result.total_triples >= 1


def test_ring_search_work_grows_with_ring_bits(toy_params):
    rng = DeterministicStream(b"ring-growth")
    sk10, pk10 = analysis.random_ring_instance(toy_params, 10, rng)
    res10 = analysis.ring_key_search(pk10, toy_params, 10)
    assert res10.contains(sk10.modulus, sk10.r1, sk10.r2)
    sk12, pk12 = analysis.random_ring_instance(toy_params, 12, rng)
    res12 = analysis.ring_key_search(pk12, toy_params, 12)
    assert res12.contains(sk12.modulus, sk12.r1, sk12.r2)
    assert res12.work > 4 * res10.work


def test_ring_search_scalar_path_matches_fast_path(toy_params):
    rng = DeterministicStream(b"ring-xcheck")
    sk, pk = analysis.random_ring_instance(toy_params, 9, rng)
    fast = analysis.ring_key_search(pk, toy_params, 9)
    scalar = analysis.ring_key_search(pk, toy_params, 9, use_fast_path=False)
    assert fast.candidates == scalar.candidates
    assert fast.work == scalar.work
    assert fast.contains(sk.modulus, sk.r1, sk.r2)


def test_ring_search_guard():
    params = PARAMETER_SETS["toy"]
    sk, pk = keypair_from_values(
        params, 6798, 4267, 6475, (4, 9), (10, 7), ((8, 5), (7, 11))
    )
    with pytest.raises(SearchSpaceTooLarge):
        analysis.ring_key_search(pk, params, 20)
