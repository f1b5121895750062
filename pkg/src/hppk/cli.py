"""Command-line front end: key lifecycle, KATs, benchmarks, attack oracles.

Exit codes are a stable contract for CI: 0 success, 1 usage error,
2 malformed input, 3 cryptographic failure.
"""

import argparse
import csv
import sys
import time
from pathlib import Path

from . import analysis, bench, kat, kem
from .block import encrypt_block, keygen, keypair_from_values
from .errors import (
    DecapsFailure,
    HppkError,
    MalformedEncoding,
    SearchSpaceTooLarge,
)
from .params import PARAMETER_SETS, ParameterSet, by_level
from .rng import DeterministicStream, SystemRng

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_MALFORMED = 2
EXIT_CRYPTO = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


class UsageError(Exception):
    pass


def _rng_from(seed_hex):
    if seed_hex is None:
        return SystemRng()
    try:
        seed = bytes.fromhex(seed_hex)
    except ValueError as err:
        raise UsageError(f"seed is not hex: {err}") from err
    return DeterministicStream(seed)


def _profile(args):
    if getattr(args, "insecure_test_profile", False):
        return PARAMETER_SETS["toy"]
    if args.level is None:
        raise UsageError("--level is required (or use --insecure-test-profile)")
    return by_level(args.level, args.nb)


def _add_profile_flags(sub):
    sub.add_argument("--level", type=int, choices=(1, 3, 5), help="NIST security level")
    sub.add_argument("--nb", type=int, choices=(1, 2), default=1,
                     help="base polynomial order (default 1)")
    sub.add_argument("--insecure-test-profile", action="store_true",
                     help="use the 13-bit toy profile; test use only")


# -- key lifecycle


def _cmd_keygen(args):
    params = _profile(args)
    rng = _rng_from(args.seed)
    sk, pk = keygen(params, rng)
    base = Path(args.out if args.out else params.label)
    pk_path = base.with_suffix(".hpk")
    sk_path = base.with_suffix(".hsk")
    pk_path.write_bytes(kem.serialize_pk(pk, params))
    sk_path.write_bytes(kem.serialize_sk(sk, params))
    print(f"wrote {pk_path} ({params.public_key_bytes} bytes)")
    print(f"wrote {sk_path} ({params.secret_key_bytes} bytes)")
    return EXIT_OK


def _cmd_encaps(args):
    params = _profile(args)
    rng = _rng_from(args.seed)
    pk = kem.deserialize_pk(Path(args.pk).read_bytes(), params)
    ct, ss = kem.encaps(pk, params, rng)
    base = Path(args.out if args.out else Path(args.pk).stem)
    ct_path = base.with_suffix(".hct")
    ss_path = base.with_suffix(".hss")
    ct_path.write_bytes(kem.serialize_ct(ct, params))
    ss_path.write_bytes(ss)
    print(f"wrote {ct_path} ({params.ciphertext_bytes} bytes)")
    print(f"wrote {ss_path} ({len(ss)} bytes)")
    return EXIT_OK


def _cmd_decaps(args):
    params = _profile(args)
    sk = kem.deserialize_sk(Path(args.sk).read_bytes(), params)
    ct = kem.deserialize_ct(Path(args.ct).read_bytes(), params)
    ss = kem.decaps(sk, params, ct)
    out = Path(args.out) if args.out else Path(args.ct).with_suffix(".hss")
    out.write_bytes(ss)
    print(f"wrote {out} ({len(ss)} bytes)")
    return EXIT_OK


# -- known-answer tests


def _cmd_kat(args):
    if args.action == "generate":
        records = kat.generate_suite(
            master_seed=bytes.fromhex(args.seed) if args.seed else b"hppk-kat-v1",
            per_profile=args.count,
        )
        with open(args.suite, "w") as fh:
            kat.write_suite(records, fh)
        print(f"wrote {len(records)} records to {args.suite}")
        return EXIT_OK
    with open(args.suite) as fh:
        records = kat.parse_suite(fh)
    failures = 0
    for rec, ok, bad_field in kat.verify_suite(records):
        status = "ok" if ok else f"FAIL ({bad_field} differs)"
        print(f"{rec.profile} count={rec.count} {status}")
        failures += 0 if ok else 1
    if failures:
        print(f"{failures}/{len(records)} records failed", file=sys.stderr)
        return EXIT_CRYPTO
    return EXIT_OK


# -- benchmarks


def _cmd_bench(args):
    if args.iterations <= 0:
        raise UsageError("--iterations must be positive")
    params = _profile(args)
    try:
        report = bench.run_bench(
            args.op, params, SystemRng(),
            iterations=args.iterations, warmup=args.warmup,
        )
    except ValueError as err:
        raise UsageError(str(err)) from err
    print(report.format_line())
    return EXIT_OK


# -- attack oracles


def _tiny_params(args):
    return ParameterSet(
        prime=args.prime,
        base_degree=args.nb,
        factor_degree=1,
        noise_vars=args.noise,
        label=f"attack-p{args.prime}-m{args.noise}",
    )


def _attack_bruteforce(args, writer):
    params = _tiny_params(args)
    rng = _rng_from(args.seed)
    ok = True
    for instance in range(args.instances):
        start = time.perf_counter()
        if instance == 0 and args.prime == 13 and args.noise == 2 and args.nb == 1:
            # the hand-checkable toy vector
            params_toy = PARAMETER_SETS["toy"]
            _, pk = keypair_from_values(
                params_toy, kat.TOY_MODULUS, kat.TOY_R1, kat.TOY_R2,
                kat.TOY_F1, kat.TOY_F2, kat.TOY_BASE,
            )
            block = encrypt_block(pk, params_toy, kat.TOY_SECRET, kat.TOY_NOISE)
            system = analysis.reduce_mod_p(pk, block, params_toy.prime)
            witness = (kat.TOY_SECRET, *kat.TOY_NOISE)
        else:
            system, witness = analysis.random_planted_system(params, rng)
        solutions = analysis.brute_force_solutions(system)
        found = witness in solutions
        ok &= found
        writer.writerow([
            instance, args.prime, args.noise, solutions.count,
            ":".join(str(v) for v in witness), found,
            f"{time.perf_counter() - start:.4f}",
        ])
    return ok


def _attack_indcpa(args, writer):
    params = _tiny_params(args)
    rng = _rng_from(args.seed)
    adversary = {
        "random": analysis.RandomGuessAdversary(rng),
        "constant0": analysis.ConstantAdversary(0),
        "likelihood": analysis.ExhaustiveLikelihoodAdversary(rng),
    }[args.adversary]
    start = time.perf_counter()
    advantage = analysis.ind_cpa_game(params, adversary, args.trials, rng)
    writer.writerow([
        0, args.prime, args.noise, args.trials, f"{advantage:.6f}",
        f"{time.perf_counter() - start:.4f}",
    ])
    if args.adversary in ("random", "constant0"):
        return advantage < 0.02
    return 0.0 <= advantage <= 0.5


def _attack_ringsearch(args, writer):
    if args.sbits > 14:
        raise UsageError("--sbits is capped at 14 for the ring search oracle")
    params = _tiny_params(args)
    rng = _rng_from(args.seed)
    ok = True
    for instance in range(args.instances):
        sk, pk = analysis.random_ring_instance(params, args.sbits, rng)
        result = analysis.ring_key_search(pk, params, args.sbits)
        found = result.contains(sk.modulus, sk.r1, sk.r2)
        ok &= found
        writer.writerow([
            instance, args.prime, args.noise, result.total_triples,
            result.work, found, f"{result.elapsed:.4f}",
        ])
    return ok


def _attack_fratio(args, writer):
    params = _tiny_params(args)
    rng = _rng_from(args.seed)
    p = params.prime
    ok = True
    for instance in range(args.instances):
        start = time.perf_counter()
        sk, pk = keygen(params, rng)
        plain1 = tuple(
            tuple(sk.r1_inv * c % sk.modulus % p for c in row) for row in pk.p1
        )
        plain2 = tuple(
            tuple(sk.r2_inv * c % sk.modulus % p for c in row) for row in pk.p2
        )
        set1, set2 = analysis.recover_f_ratio(plain1, plain2, params)
        found = (
            analysis.true_ratio(sk.f1, p) in set1
            and analysis.true_ratio(sk.f2, p) in set2
        )
        ok &= found
        writer.writerow([
            instance, args.prime, args.noise, len(set1) + len(set2), found,
            f"{time.perf_counter() - start:.4f}",
        ])
    return ok


_ATTACK_HEADERS = {
    "bruteforce": ["instance", "p", "m", "count", "witness", "witness_found", "elapsed"],
    "indcpa": ["instance", "p", "m", "trials", "advantage", "elapsed"],
    "ringsearch": ["instance", "p", "m", "candidates", "work", "key_found", "elapsed"],
    "fratio": ["instance", "p", "m", "candidates", "ratio_found", "elapsed"],
}

_ATTACK_RUNNERS = {
    "bruteforce": _attack_bruteforce,
    "indcpa": _attack_indcpa,
    "ringsearch": _attack_ringsearch,
    "fratio": _attack_fratio,
}


def _cmd_attack(args):
    writer = csv.writer(sys.stdout)
    writer.writerow(_ATTACK_HEADERS[args.oracle])
    try:
        ok = _ATTACK_RUNNERS[args.oracle](args, writer)
    except SearchSpaceTooLarge as err:
        raise UsageError(str(err)) from err
    if not ok:
        print("oracle assertion failed", file=sys.stderr)
        return EXIT_CRYPTO
    return EXIT_OK


# -- wiring


def build_parser():
    parser = _Parser(prog="hppk", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("keygen", help="generate a key pair")
    _add_profile_flags(p)
    p.add_argument("--seed", help="32-byte hex seed for deterministic output")
    p.add_argument("--out", help="output basename (default: profile label)")
    p.set_defaults(func=_cmd_keygen)

    p = sub.add_parser("encaps", help="encapsulate a shared secret")
    _add_profile_flags(p)
    p.add_argument("--pk", required=True, help="public key file (.hpk)")
    p.add_argument("--seed", help="32-byte hex seed for deterministic output")
    p.add_argument("--out", help="output basename (default: pk stem)")
    p.set_defaults(func=_cmd_encaps)

    p = sub.add_parser("decaps", help="recover a shared secret")
    _add_profile_flags(p)
    p.add_argument("--sk", required=True, help="secret key file (.hsk)")
    p.add_argument("--ct", required=True, help="ciphertext file (.hct)")
    p.add_argument("--out", help="output file (default: ct stem + .hss)")
    p.set_defaults(func=_cmd_decaps)

    p = sub.add_parser("kat", help="generate or verify known-answer tests")
    p.add_argument("action", choices=("generate", "verify"))
    p.add_argument("suite", help="KAT suite file")
    p.add_argument("--count", type=int, default=3, help="records per profile")
    p.add_argument("--seed", help="master seed (hex) for generation")
    p.set_defaults(func=_cmd_kat)

    p = sub.add_parser("bench", help="measure operation latency")
    _add_profile_flags(p)
    p.add_argument("--op", required=True, choices=bench.OPERATIONS)
    p.add_argument("--iterations", type=int, default=2000)
    p.add_argument("--warmup", type=int, default=200)
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("attack", help="run a desk-scale attack oracle")
    p.add_argument("--oracle", required=True, choices=tuple(_ATTACK_RUNNERS))
    p.add_argument("--prime", type=int, default=13)
    p.add_argument("--noise", type=int, default=2, help="noise variable count")
    p.add_argument("--nb", type=int, default=1, help="base polynomial order")
    p.add_argument("--sbits", type=int, default=10, help="ring bits for ringsearch")
    p.add_argument("--trials", type=int, default=10000, help="game trials for indcpa")
    p.add_argument("--instances", type=int, default=5)
    p.add_argument("--adversary", default="random",
                   choices=("random", "constant0", "likelihood"))
    p.add_argument("--seed", help="hex seed for reproducible oracle runs")
    p.set_defaults(func=_cmd_attack)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as err:
        print(f"hppk: {err}", file=sys.stderr)
        return EXIT_USAGE
    except (MalformedEncoding, FileNotFoundError) as err:
        print(f"hppk: {err}", file=sys.stderr)
        return EXIT_MALFORMED
    except DecapsFailure as err:
        print(f"hppk: decapsulation failed at block {err.block_index}: "
              f"{err.cause}", file=sys.stderr)
        return EXIT_CRYPTO
    except HppkError as err:
        print(f"hppk: {err}", file=sys.stderr)
        return EXIT_CRYPTO


if __name__ == "__main__":
    sys.exit(main())
