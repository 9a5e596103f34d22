"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 I/O failure or invalid instance,
3 degenerate key, 4 malformed or inconsistent frame, 5 attack budget
exhausted in every trial.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import zlib
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import BudgetExceeded, DegenerateKey, IntegrityError, MalformedFrame, NoChaffSpace
from .groups import AbelianGroup, Subgroup
from .hsp import (
    HspInstance,
    abelian_coset_oracle,
    brute_force_hsp,
    solve_abelian_hsp,
    solve_wn_hsp,
    wreath_coset_oracle,
)
from .qep import (
    OracleLevel,
    QepParams,
    SessionKey,
    decrypt,
    deserialize,
    digit_count,
    encrypt,
    eve_attack,
    key_subgroup,
    serialize,
)
from .qep.attack import summarize
from .qep.scheme import chaff_count, derive_generator
from .wreath import WreathGroup, parse_generators, random_subgroup, w_closure

DEFAULT_SEED = 1729
REPORT_VERSION = 1

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_DEGENERATE_KEY, EXIT_INTEGRITY, EXIT_BUDGET = range(6)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def substream(seed: int, name: str) -> np.random.Generator:
    """Independent named generator derived from the global seed."""
    return np.random.default_rng(np.random.SeedSequence([seed, zlib.crc32(name.encode())]))


def _emit(report: dict, args) -> None:
    out = {"report_version": REPORT_VERSION, "command": args.command}
    if not args.no_timestamp:
        out["timestamp"] = datetime.now(timezone.utc).isoformat()
    out.update(report)
    json.dump(out, sys.stdout, indent=2, sort_keys=False)
    sys.stdout.write("\n")


def _parse_abelian_gens(group: AbelianGroup, text: str) -> list[tuple[int, ...]]:
    gens = []
    for part in text.split(";"):
        if part.strip():
            gens.append(group.element(int(x) for x in part.split(",")))
    return gens


def cmd_keygen(args) -> int:
    if args.bytes < 8:
        raise UsageError("--bytes must be at least 8")
    data = substream(args.seed, "key").bytes(args.bytes) if args.seed is not None else os.urandom(args.bytes)
    Path(args.out).write_bytes(data)
    _emit({"bytes": args.bytes, "out": str(args.out)}, args)
    return EXIT_OK


def cmd_encrypt(args) -> int:
    group = _group_arg(args.group)
    key = SessionKey.from_file(args.key)
    plaintext = Path(args.input).read_bytes()
    ratio = Fraction(args.chaff).limit_denominator(10**6)
    placement_seed = int(substream(args.seed, "placement").integers(2**63))
    params = QepParams(group, ratio, placement_seed)
    frame = encrypt(params, key, plaintext, substream(args.seed, "chaff"))
    Path(args.out).write_bytes(serialize(frame))
    r = group.element_order(derive_generator(key, group))
    digits = digit_count(len(plaintext), r)
    _emit({
        "group": group.descriptor(),
        "plaintext_length": len(plaintext),
        "generator_order": r,
        "digit_count": digits,
        "chaff_count": chaff_count(digits, ratio),
        "element_count": frame.element_count,
    }, args)
    return EXIT_OK


def cmd_decrypt(args) -> int:
    key = SessionKey.from_file(args.key)
    frame = deserialize(Path(args.input).read_bytes())
    plaintext = decrypt(key, frame)
    Path(args.out).write_bytes(plaintext)
    _emit({"plaintext_length": len(plaintext), "element_count": frame.element_count}, args)
    return EXIT_OK


def _group_arg(text: str) -> AbelianGroup:
    try:
        return AbelianGroup.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _round_stats(rounds: list[int]) -> dict:
    return {
        "mean": float(np.mean(rounds)),
        "median": float(np.median(rounds)),
        "max": int(np.max(rounds)),
    }


def cmd_hsp(args) -> int:
    if args.trials < 1:
        raise UsageError("--trials must be positive")
    rng = substream(args.seed, "measurement")
    trials = []
    if args.wreath is not None:
        n = args.wreath
        if not 1 <= n <= 4:
            raise ValueError("--wreath must be between 1 and 4")
        fixed = w_closure(parse_generators(args.gens), n=n) if args.gens else None
        first_batch = 0
        for i in range(args.trials):
            u = fixed if fixed is not None else random_subgroup(n, rng)
            oracle = wreath_coset_oracle(u)
            try:
                report = solve_wn_hsp(n, oracle, rng, max_batches=args.max_batches)
            except BudgetExceeded as exc:
                report = exc.report
            truth = brute_force_hsp(WreathGroup(n), wreath_coset_oracle(u))
            report.success = report.recovered == truth
            first_batch += report.success and report.details["batches"] == 1
            trials.append({"trial": i, "hidden_order": u.order, **report.to_json()})
        summary = {
            "group": f"W_{n}",
            "iterations_per_batch": 4 * n,
            "first_batch_success_rate": first_batch / args.trials,
            "expected_rate_lower_bound": 1 - 2.0 ** -n,
        }
    else:
        if args.group is None:
            raise UsageError("hsp needs --group or --wreath")
        group = _group_arg(args.group)
        if group.order > 512:
            raise ValueError("hsp demonstrations are limited to |G| <= 512")
        fixed = Subgroup(group, tuple(_parse_abelian_gens(group, args.gens))) if args.gens else None
        for i in range(args.trials):
            h = fixed if fixed is not None else Subgroup(group, (group.random_element(rng),))
            report = solve_abelian_hsp(HspInstance(group, abelian_coset_oracle(h)), rng)
            baseline = abelian_coset_oracle(h)
            truth = brute_force_hsp(group, baseline)
            report.success = report.recovered == truth
            trials.append({"trial": i, "hidden_order": h.order, "brute_force_evaluations": baseline.evaluations,
                           **report.to_json()})
        summary = {"group": group.descriptor(), "rounds_reference": 4 * math.log2(group.order) + 8}
    rounds = [t["rounds"] for t in trials]
    summary.update({
        "trials": args.trials,
        "success_rate": sum(bool(t["success"]) for t in trials) / args.trials,
        "rounds": _round_stats(rounds),
        "mean_oracle_evaluations": float(np.mean([t["oracle_evaluations"] for t in trials])),
        "per_trial": trials,
    })
    _emit(summary, args)
    return EXIT_OK


def cmd_attack(args) -> int:
    if args.trials < 1:
        raise UsageError("--trials must be positive")
    frame = deserialize(Path(args.frame).read_bytes())
    key = SessionKey.from_file(args.key)
    truth = decrypt(key, frame)
    hidden = key_subgroup(key, frame.group)
    marker = args.marker.encode() if args.marker is not None else None
    reports = []
    for i in range(args.trials):
        rng = substream(args.seed, f"attack/{i}")
        reports.append(eve_attack(frame, args.oracle, rng, args.budget, hidden=hidden, truth=truth,
                                  marker=marker, suppress_header=args.suppress_header))
    summary = summarize(reports)
    _emit({"group": frame.group.descriptor(), "oracle_level": args.oracle.value,
           "element_count": frame.element_count, **summary}, args)
    if all(r.budget_exceeded for r in reports):
        return EXIT_BUDGET
    return EXIT_OK


def _oracle_level(text: str) -> OracleLevel:
    try:
        return OracleLevel.parse(text)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"invalid oracle level {text!r} (choose none, membership, coset-separating)") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--no-timestamp", action="store_true", help="omit the timestamp from the JSON report")

    p = _Parser(prog="hspcrypt", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    k = sub.add_parser("keygen", parents=[common], help="write a random session key")
    k.add_argument("--bytes", type=int, default=16)
    k.add_argument("--out", required=True)
    k.add_argument("--seed", type=int, default=None,
                   help="derive the key from a seed (reproducible, not secret); default uses the OS RNG")
    k.set_defaults(func=cmd_keygen)

    e = sub.add_parser("encrypt", parents=[common], help="encrypt a file into a ciphertext frame")
    e.add_argument("--group", required=True, help='invariant factors, e.g. "8,4,2"')
    e.add_argument("--key", required=True)
    e.add_argument("--in", dest="input", required=True)
    e.add_argument("--out", required=True)
    e.add_argument("--chaff", type=float, default=1.0, help="chaff elements per data element")
    e.add_argument("--seed", type=int, default=DEFAULT_SEED)
    e.set_defaults(func=cmd_encrypt)

    d = sub.add_parser("decrypt", parents=[common], help="decrypt a ciphertext frame")
    d.add_argument("--key", required=True)
    d.add_argument("--in", dest="input", required=True)
    d.add_argument("--out", required=True)
    d.set_defaults(func=cmd_decrypt)

    h = sub.add_parser("hsp", parents=[common], help="run hidden subgroup solvers against brute force")
    target = h.add_mutually_exclusive_group(required=True)
    target.add_argument("--group", help='abelian group, e.g. "8,2"')
    target.add_argument("--wreath", type=int, help="n for W_n (1..4)")
    h.add_argument("--gens", default=None,
                   help='hidden subgroup generators separated by ";" ("2,0" or "10|00|0"); random if omitted')
    h.add_argument("--trials", type=int, default=10)
    h.add_argument("--max-batches", type=int, default=5)
    h.add_argument("--seed", type=int, default=DEFAULT_SEED)
    h.set_defaults(func=cmd_hsp)

    a = sub.add_parser("attack", parents=[common], help="attack a frame with an oracle of the given level")
    a.add_argument("--frame", required=True)
    a.add_argument("--key", required=True, help="true key; builds Eve's oracle and scores the result")
    a.add_argument("--oracle", type=_oracle_level, default=OracleLevel.NONE,
                   help="none | membership | coset-separating")
    a.add_argument("--budget", type=int, default=10_000, help="max generators tried per trial")
    a.add_argument("--trials", type=int, default=1)
    a.add_argument("--marker", default=None, help="known plaintext prefix Eve can recognise")
    a.add_argument("--suppress-header", action="store_true", help="Eve must guess the invariant factors")
    a.add_argument("--seed", type=int, default=DEFAULT_SEED)
    a.set_defaults(func=cmd_attack)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"hspcrypt: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DegenerateKey as exc:
        print(f"hspcrypt: {exc}. Generate a new key with 'hspcrypt keygen'.", file=sys.stderr)
        return EXIT_DEGENERATE_KEY
    except (MalformedFrame, IntegrityError) as exc:
        print(f"hspcrypt: frame rejected: {exc}", file=sys.stderr)
        return EXIT_INTEGRITY
    except (OSError, ValueError, NoChaffSpace) as exc:
        print(f"hspcrypt: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
