"""Command-line interface: ``pingpong-eve {table1,enumerate,asymptotic,sample,converge}``.

Exit codes: 0 success, 1 ``--strict`` audit failure, 2 usage error,
3 enumeration over capacity.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .channel import (
    BITS,
    AttackKind,
    AttackSequence,
    BitString,
    InputError,
    ModelValidationError,
    Observer,
    default_channel,
    load_channel,
)
from .enumeration import MAX_OUTCOMES, CapacityError, enumerate_eve_batches, enumerate_joint_batches
from .formats import (
    convergence_to_csv,
    ensemble_to_csv,
    ensemble_to_json,
    format_mi,
    report_to_csv,
    report_to_dict,
)
from .metrics import AttackMix, asymptotic_mi, ensemble_metrics, mixture_joint, plugin_mutual_information, qber
from .montecarlo import SampleConfig, convergence_study, sample_batches
from .table1 import ALICE, ATTACKS, ETA_NOTE, KNOWN_DISCREPANCIES, MI_TOLERANCE, audit_table1, table1_report

EXIT_OK, EXIT_STRICT, EXIT_USAGE, EXIT_CAPACITY = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _probability(text: str) -> Fraction:
    try:
        p = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a probability: {text!r}") from None
    if not 0 <= p <= 1:
        raise argparse.ArgumentTypeError(f"probability must lie in [0, 1], got {text}")
    return p


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _seed(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return value


def _lengths(text: str) -> list:
    return [_positive_int(t) for t in text.split(",") if t.strip()]


def _bits(text: str) -> BitString:
    try:
        return BitString.parse(text)
    except InputError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _attacks(text: str) -> AttackSequence:
    try:
        return AttackSequence.parse(text)
    except InputError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("table", "csv", "json"), default="table")
    common.add_argument("--output", help="write to this file instead of standard output")
    common.add_argument("--strict", action="store_true", help="fail on unexpected table discrepancies")
    common.add_argument("--config", help="key=value file supplying flag defaults; flags win")
    common.add_argument("--channel", help="channel override file with lines 'x a b e p'")
    return common


def build_parser():
    parser = argparse.ArgumentParser(
        prog="pingpong-eve",
        description="Exact and sampled analysis of Eve's attack statistics on the ping-pong protocol.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common()
    subs = {}

    subs["table1"] = sub.add_parser("table1", parents=[common], help="reproduce and audit the published table")

    p = sub.add_parser("enumerate", parents=[common], help="enumerate every batch with its exact probability")
    p.add_argument("--alice", type=_bits, required=True)
    p.add_argument("--attacks", type=_attacks, required=True)
    p.add_argument("--mode", choices=("eve", "joint"), default="eve")
    p.add_argument("--cap", type=_positive_int, default=MAX_OUTCOMES)
    p.add_argument("--raw", action="store_true", help="emit the bare ensemble (prob_num/prob_den) without metrics")
    subs["enumerate"] = p

    p = sub.add_parser("asymptotic", parents=[common], help="channel mutual information for an attack mix")
    p.add_argument("--prob-s", type=_probability, default=Fraction(0))
    p.add_argument("--alice-prior", type=_probability, default=Fraction(1, 2))
    p.add_argument("--observer", choices=("eve", "bob"), default="eve")
    cond = p.add_mutually_exclusive_group()
    cond.add_argument("--conditioned", dest="conditioned", action="store_const", const=True)
    cond.add_argument("--unconditioned", dest="conditioned", action="store_const", const=False)
    p.set_defaults(conditioned=None)
    subs["asymptotic"] = p

    for name, help_text in (
        ("sample", "draw seeded batches"),
        ("converge", "finite-batch MI spread versus batch length"),
    ):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("--seed", type=_seed, default=0)
        p.add_argument("--trials", type=_positive_int, default=1 if name == "sample" else 1000)
        p.add_argument("--alice", type=_bits, help="fixed Alice string (otherwise drawn from --alice-prior)")
        p.add_argument("--attacks", type=_attacks, help="fixed attack sequence (otherwise drawn from --prob-s)")
        p.add_argument("--prob-s", type=_probability, default=Fraction(0))
        p.add_argument("--alice-prior", type=_probability, default=Fraction(1, 2))
        p.add_argument("--workers", type=_positive_int, default=1)
        if name == "sample":
            p.add_argument("--length", type=_positive_int, help="batch length when nothing is fixed")
        else:
            p.add_argument("--lengths", type=_lengths, help="comma-separated batch lengths (default 6,60,600,6000)")
            p.add_argument("--observer", choices=("eve", "bob"), default="eve")
        subs[name] = p
    return parser, subs


def _read_config(path: str) -> dict:
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        values[key.lstrip("-").replace("-", "_")] = value
    return values


def _apply_config(parser: argparse.ArgumentParser, values: dict) -> None:
    actions = {a.dest: a for a in parser._actions}
    defaults = {}
    for key, value in values.items():
        if key not in actions or key in ("help", "config"):
            raise UsageError(f"unknown config key {key!r}")
        action = actions[key]
        if isinstance(action, (argparse._StoreTrueAction, argparse._StoreConstAction)):
            defaults[key] = value.lower() in ("1", "true", "yes", "on")
        else:
            defaults[key] = value
    parser.set_defaults(**defaults)


# -- rendering -------------------------------------------------------------


def _render_table(header, rows) -> str:
    widths = [max(len(str(c)) for c in col) for col in zip(header, *rows)]
    lines = ["  ".join(str(c).ljust(w) for c, w in zip(r, widths)).rstrip() for r in [header] + rows]
    return "\n".join(lines) + "\n"


def _metrics_table(report) -> str:
    joint = bool(report.rows) and report.rows[0].bob is not None
    header = ["eve_bits", "prob", "qber", "mi_bits"]
    if joint:
        header += ["bob_bits", "bob_qber", "bob_mi_bits"]
    rows = []
    for r in report.rows:
        row = [str(r.eve), str(r.probability), str(r.qber), format_mi(r.mi_bits)]
        if joint:
            row += [str(r.bob), str(r.bob_qber), format_mi(r.bob_mi_bits)]
        rows.append(row)
    text = _render_table(header, rows)
    text += f"\nexpected QBER: {report.expected_qber}\n"
    text += f"expected MI (bits): {format_mi(report.expected_mi_bits)}\n"
    return text


def _channel(args):
    return load_channel(args.channel) if args.channel else default_channel()


def cmd_table1(args):
    report = table1_report(_channel(args))
    audit = audit_table1(report)
    mismatches = [d for d in audit if not d.match]
    unexpected = [d for d in mismatches if (d.eve_bits, d.field) not in KNOWN_DISCREPANCIES]
    if args.format == "csv":
        text = report_to_csv(report)
    elif args.format == "json":
        doc = report_to_dict(report, ALICE, ATTACKS)
        doc["note"] = ETA_NOTE
        doc["discrepancies"] = [d.__dict__ for d in audit]
        text = json.dumps(doc, indent=2) + "\n"
    else:
        text = f"alice={ALICE} attacks={ATTACKS}; {ETA_NOTE}\n\n"
        text += _metrics_table(report)
        text += f"\ndiscrepancies against the printed table (fractions exact, mi within {MI_TOLERANCE}):\n"
        if mismatches:
            text += _render_table(
                ["eve_bits", "field", "printed", "computed"],
                [[d.eve_bits, d.field, d.printed, d.computed] for d in mismatches],
            )
        else:
            text += "none\n"
    status = EXIT_STRICT if args.strict and unexpected else EXIT_OK
    if status:
        print(f"strict: {len(unexpected)} unexpected discrepancies", file=sys.stderr)
    return text, status


def cmd_enumerate(args):
    fn = enumerate_joint_batches if args.mode == "joint" else enumerate_eve_batches
    ensemble = fn(_channel(args), args.alice, args.attacks, cap=args.cap)
    if args.raw:
        if args.format == "json":
            return ensemble_to_json(ensemble) + "\n", EXIT_OK
        return ensemble_to_csv(ensemble), EXIT_OK
    report = ensemble_metrics(ensemble)
    if args.format == "csv":
        return report_to_csv(report), EXIT_OK
    if args.format == "json":
        return json.dumps(report_to_dict(report, ensemble.alice, ensemble.attacks), indent=2) + "\n", EXIT_OK
    head = f"alice={ensemble.alice} attacks={ensemble.attacks} mode={args.mode} outcomes={len(ensemble)}\n\n"
    return head + _metrics_table(report), EXIT_OK


def cmd_asymptotic(args):
    channel = _channel(args)
    mix = AttackMix(args.prob_s, args.alice_prior)
    observer = Observer.parse(args.observer)
    conditioned = args.conditioned if args.conditioned is not None else observer is Observer.EVE
    mi = asymptotic_mi(channel, mix, observer, conditioned)
    joint = mixture_joint(channel, mix, observer, conditioned)
    if conditioned:
        cells = [(str(x), a, o, joint[(x, a, o)]) for x in AttackKind for a in BITS for o in BITS]
    else:
        cells = [("mix", a, o, joint[(a, o)]) for a in BITS for o in BITS]
    if args.format == "json":
        doc = {
            "prob_s": str(mix.prob_s),
            "alice_prior": str(mix.alice_prior),
            "observer": str(observer),
            "conditioned_on_attack": conditioned,
            "mi_bits": mi,
            "joint": [{"attack": x, "a": a, "o": o, "p": str(p)} for x, a, o, p in cells],
        }
        return json.dumps(doc, indent=2) + "\n", EXIT_OK
    if args.format == "csv":
        return f"prob_s,alice_prior,observer,conditioned,mi_bits\n{mix.prob_s},{mix.alice_prior},{observer},{int(conditioned)},{format_mi(mi)}\n", EXIT_OK
    text = f"{format_mi(mi)}\n\n"
    text += f"observer={observer} prob_s={mix.prob_s} alice_prior={mix.alice_prior} conditioned={conditioned}\n"
    text += _render_table(["attack", "a", str(observer)[0], "p"], [[x, a, o, str(p)] for x, a, o, p in cells])
    return text, EXIT_OK


def _sample_config(args, length):
    n = length
    for fixed in (args.alice, args.attacks):
        if fixed is not None:
            if n is not None and len(fixed) != n:
                raise InputError(f"length mismatch: fixed string of length {len(fixed)} vs batch length {n}")
            n = len(fixed)
    if n is None:
        raise UsageError("give --alice, --attacks or a batch length")
    return SampleConfig(
        seed=args.seed,
        trials=args.trials,
        batch_length=n,
        mix=AttackMix(args.prob_s, args.alice_prior),
        attacks=args.attacks,
        alice=args.alice,
    )


def cmd_sample(args):
    config = _sample_config(args, args.length)
    res = sample_batches(_channel(args), config, workers=args.workers)
    header = ["trial", "alice_bits", "attacks", "bob_bits", "eve_bits", "eve_qber", "eve_mi_bits", "bob_qber", "bob_mi_bits"]
    rows = []
    for t in range(config.trials):
        alice = BitString(tuple(int(v) for v in res.alice[t]))
        attacks = "".join("us"[int(v)] for v in res.attacks[t])
        bob = BitString(tuple(int(v) for v in res.bob[t]))
        eve = BitString(tuple(int(v) for v in res.eve[t]))
        rows.append([
            t, str(alice), attacks, str(bob), str(eve),
            str(qber(alice, eve)), format_mi(plugin_mutual_information(alice, eve)),
            str(qber(alice, bob)), format_mi(plugin_mutual_information(alice, bob)),
        ])
    if args.format == "json":
        recs = [dict(zip(header, r)) for r in rows]
        return json.dumps({"seed": config.seed, "samples": recs}, indent=2) + "\n", EXIT_OK
    if args.format == "csv":
        return ",".join(header) + "\n" + "".join(",".join(map(str, r)) + "\n" for r in rows), EXIT_OK
    return _render_table(header, rows), EXIT_OK


def cmd_converge(args):
    lengths = args.lengths
    if not lengths:
        fixed = args.alice or args.attacks
        lengths = [len(fixed)] if fixed is not None else [6, 60, 600, 6000]
    config = _sample_config(args, lengths[0])
    report = convergence_study(config, lengths, _channel(args), args.observer, workers=args.workers)
    if args.format == "json":
        doc = {"seed": config.seed, "observer": args.observer, "rows": [r.__dict__ for r in report.rows]}
        return json.dumps(doc, indent=2) + "\n", EXIT_OK
    if args.format == "csv":
        return convergence_to_csv(report), EXIT_OK
    rows = [
        [r.n, r.trials, f"{r.mean_mi:.4f}", f"{r.std_mi:.4f}", f"{r.asymptotic_mi:.4f}", f"{r.mean_abs_dev:.4f}"]
        for r in report.rows
    ]
    return _render_table(["n", "trials", "mean_mi", "std_mi", "asymptotic_mi", "mean_abs_dev"], rows), EXIT_OK


COMMANDS = {
    "table1": cmd_table1,
    "enumerate": cmd_enumerate,
    "asymptotic": cmd_asymptotic,
    "sample": cmd_sample,
    "converge": cmd_converge,
}


def main(argv=None) -> int:
    parser, subs = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.config:
            _apply_config(subs[args.command], _read_config(args.config))
            args = parser.parse_args(argv)
        text, status = COMMANDS[args.command](args)
    except CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (InputError, ModelValidationError, UsageError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
