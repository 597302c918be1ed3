"""CSV and JSON forms of ensembles, metric reports and convergence reports."""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction

from .channel import AttackSequence, BitString
from .enumeration import BatchEnsemble, OutcomeBatch
from .metrics import DISPLAY_DECIMALS, MetricsReport
from .montecarlo import ConvergenceReport, ConvergenceRow

__all__ = [
    "ensemble_to_csv",
    "ensemble_from_csv",
    "ensemble_to_json",
    "ensemble_from_json",
    "report_to_csv",
    "report_from_csv",
    "report_to_dict",
    "report_to_json",
    "convergence_to_csv",
    "convergence_from_csv",
    "format_mi",
]


def format_mi(value: float, decimals: int = DISPLAY_DECIMALS) -> str:
    return f"{value + 0.0:.{decimals}f}"


def _write(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerows(rows)
    return buf.getvalue()


def ensemble_to_csv(ensemble: BatchEnsemble) -> str:
    joint = ensemble.joint
    header = ["eve_bits"] + (["bob_bits"] if joint else []) + ["prob_num", "prob_den"]
    rows = [header]
    for o in ensemble:
        p = o.probability
        rows.append([str(o.eve)] + ([str(o.bob)] if joint else []) + [p.numerator, p.denominator])
    return _write(rows)


def ensemble_from_csv(text: str, alice, attacks) -> BatchEnsemble:
    outcomes = []
    for rec in csv.DictReader(io.StringIO(text)):
        bob = rec.get("bob_bits")
        outcomes.append(
            OutcomeBatch(
                eve=BitString.parse(rec["eve_bits"]),
                probability=Fraction(int(rec["prob_num"]), int(rec["prob_den"])),
                bob=BitString.parse(bob) if bob else None,
            )
        )
    return BatchEnsemble(BitString.coerce(alice), AttackSequence.coerce(attacks), outcomes)


def ensemble_to_json(ensemble: BatchEnsemble) -> str:
    outcomes = []
    for o in ensemble:
        rec = {"eve": str(o.eve), "probability": str(o.probability)}
        if o.bob is not None:
            rec["bob"] = str(o.bob)
        outcomes.append(rec)
    doc = {"alice": str(ensemble.alice), "attacks": str(ensemble.attacks), "outcomes": outcomes}
    return json.dumps(doc, indent=2)


def ensemble_from_json(text: str) -> BatchEnsemble:
    doc = json.loads(text)
    outcomes = [
        OutcomeBatch(
            eve=BitString.parse(rec["eve"]),
            probability=Fraction(rec["probability"]),
            bob=BitString.parse(rec["bob"]) if "bob" in rec else None,
        )
        for rec in doc["outcomes"]
    ]
    return BatchEnsemble(BitString.parse(doc["alice"]), AttackSequence.parse(doc["attacks"]), outcomes)


def report_to_csv(report: MetricsReport) -> str:
    """``eve_bits,prob,qber,mi_bits``; joint reports add Bob's columns."""
    joint = bool(report.rows) and report.rows[0].bob is not None
    header = ["eve_bits", "prob", "qber", "mi_bits"]
    if joint:
        header += ["bob_bits", "bob_qber", "bob_mi_bits"]
    rows = [header]
    for r in report.rows:
        row = [str(r.eve), str(r.probability), str(r.qber), format_mi(r.mi_bits)]
        if joint:
            row += [str(r.bob), str(r.bob_qber), format_mi(r.bob_mi_bits)]
        rows.append(row)
    return _write(rows)


def report_from_csv(text: str) -> list:
    """Rows of ``(eve_bits, prob, qber, mi)`` with exact fractions and float MI."""
    return [
        (rec["eve_bits"], Fraction(rec["prob"]), Fraction(rec["qber"]), float(rec["mi_bits"]))
        for rec in csv.DictReader(io.StringIO(text))
    ]


def report_to_dict(report: MetricsReport, alice=None, attacks=None) -> dict:
    doc = {}
    if alice is not None:
        doc["alice"] = str(alice)
    if attacks is not None:
        doc["attacks"] = str(attacks)
    rows = []
    for r in report.rows:
        rec = {
            "eve": str(r.eve),
            "probability": str(r.probability),
            "qber": str(r.qber),
            "mi_bits": r.mi_bits,
        }
        if r.bob is not None:
            rec["bob"] = str(r.bob)
            rec["bob_qber"] = str(r.bob_qber)
            rec["bob_mi_bits"] = r.bob_mi_bits
        rows.append(rec)
    doc["rows"] = rows
    doc["expected_qber"] = str(report.expected_qber)
    doc["expected_mi_bits"] = report.expected_mi_bits
    doc["mi_histogram"] = [[mi, str(p)] for mi, p in report.mi_histogram]
    return doc


def report_to_json(report: MetricsReport, alice=None, attacks=None) -> str:
    return json.dumps(report_to_dict(report, alice, attacks), indent=2)


def convergence_to_csv(report: ConvergenceReport) -> str:
    rows = [ConvergenceReport.CSV_HEADER.split(",")]
    for r in report.rows:
        rows.append([r.n, r.trials, repr(r.mean_mi), repr(r.std_mi), repr(r.asymptotic_mi), repr(r.mean_abs_dev)])
    return _write(rows)


def convergence_from_csv(text: str) -> ConvergenceReport:
    rows = []
    for rec in csv.DictReader(io.StringIO(text)):
        rows.append(
            ConvergenceRow(
                n=int(rec["n"]),
                trials=int(rec["trials"]),
                mean_mi=float(rec["mean_mi"]),
                std_mi=float(rec["std_mi"]),
                asymptotic_mi=float(rec["asymptotic_mi"]),
                mean_abs_dev=float(rec["mean_abs_dev"]),
            )
        )
    return ConvergenceReport(tuple(rows))
