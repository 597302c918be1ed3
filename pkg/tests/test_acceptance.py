"""Exit criteria. Each test prints one PASS/FAIL line to the terminal."""

import time
from fractions import Fraction

import pytest
from hypothesis import given, settings

from conftest import bit_pairs, brute_force_channel_mi, scenarios
from pingpong_eve.channel import AttackKind, BitString, Observer, default_channel, slot_joint, slot_marginal
from pingpong_eve.cli import main
from pingpong_eve.enumeration import enumerate_eve_batches, enumerate_joint_batches, marginalize_bob
from pingpong_eve.metrics import AttackMix, asymptotic_mi, ensemble_metrics, plugin_mutual_information, qber
from pingpong_eve.montecarlo import SampleConfig, convergence_study, mi_histogram, sampled_mi_values, total_variation
from pingpong_eve.table1 import GOLDEN_TABLE1, audit_table1, table1_report

PRINTED_ORDER = [g.eve_bits for g in GOLDEN_TABLE1]

MATCHING_MI = {
    "100110": 1.0, "100111": 0.459, "100100": 0.459, "100101": 0.082,
    "100010": 0.459, "100011": 0.082, "101100": 0.082, "101101": 0.0,
    "101110": 0.459, "101000": 0.0, "101001": 0.082, "101010": 0.082,
    "101011": 0.0,
}
FLAGGED_MI = {"100000": 0.191, "100001": 0.000, "101111": 0.191}


@pytest.fixture
def report_line(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\n[criterion {number}] {'PASS' if ok else 'FAIL'}: {detail}")
    return emit


def test_criterion_1_possibilities(report_line, capsys):
    start = time.perf_counter()
    code = main(["table1", "--format", "csv"])
    out = capsys.readouterr().out
    report = table1_report()
    elapsed = time.perf_counter() - start
    rows = [line.split(",") for line in out.splitlines()[1:]]
    ok = (
        code == 0
        and [r[0] for r in rows] == PRINTED_ORDER
        and all(Fraction(r[1]) == Fraction(1, 16) for r in rows)
        and [str(r.eve) for r in report.rows] == PRINTED_ORDER
        and all(r.probability == Fraction(1, 16) for r in report.rows)
        and elapsed < 1.0
    )
    report_line(1, ok, f"16 batches in printed order, each 1/16, {elapsed:.3f}s")
    assert ok


def test_criterion_2_qber(report_line):
    audit = [d for d in audit_table1(table1_report()) if d.field == "qber"]
    matched = [d.eve_bits for d in audit if d.match]
    flagged = [d for d in audit if not d.match]
    # Hamming-distance oracle, independent of qber()
    hamming = {
        g.eve_bits: Fraction(sum(c1 != c2 for c1, c2 in zip("100110", g.eve_bits)), 6) for g in GOLDEN_TABLE1
    }
    computed = {d.eve_bits: Fraction(d.computed) for d in audit}
    ok = (
        len(matched) == 15
        and [(d.eve_bits, d.printed, d.computed) for d in flagged] == [("100001", "1/3", "1/2")]
        and computed == hamming
    )
    report_line(2, ok, f"{len(matched)}/16 QBER exact; flagged {[(d.eve_bits, d.printed, d.computed) for d in flagged]}")
    assert ok


def test_criterion_3_mutual_information(report_line):
    rows = {str(r.eve): r.mi_bits for r in table1_report().rows}
    match_ok = all(abs(rows[b] - v) <= 0.001 for b, v in MATCHING_MI.items())
    flagged_ok = all(abs(rows[b] - v) <= 0.0005 for b, v in FLAGGED_MI.items())
    audit = audit_table1(table1_report())
    flagged = sorted(d.eve_bits for d in audit if d.field == "mi" and not d.match)
    ok = match_ok and flagged_ok and flagged == sorted(FLAGGED_MI)
    report_line(3, ok, f"13 rows within 0.001; flagged {flagged} computed {[round(rows[b], 3) for b in sorted(FLAGGED_MI)]}")
    assert ok


def test_criterion_4_asymptotics(report_line):
    ch = default_channel()
    eve = asymptotic_mi(ch, AttackMix(0), "eve")
    bob = asymptotic_mi(ch, AttackMix(Fraction(1, 2)), "bob", conditioned_on_attack=False)
    worst = 0.0
    for k in range(11):
        ps = Fraction(k, 10)
        for observer in ("eve", "bob"):
            for conditioned in (True, False):
                got = asymptotic_mi(ch, AttackMix(ps), observer, conditioned)
                want = brute_force_channel_mi(ch, float(ps), 0.5, observer, conditioned)
                worst = max(worst, abs(got - want))
    ok = abs(eve - 0.311) <= 0.0005 and abs(bob - 0.189) <= 0.0005 and worst <= 1e-12
    report_line(4, ok, f"Eve pure-u {eve:.4f}, Bob balanced {bob:.4f}, max oracle gap {worst:.1e} over 11 mixes")
    assert ok


@settings(max_examples=150, deadline=None, database=None)
@given(scenarios(max_n=10))
def _enumeration_properties(scenario):
    alice, attacks = scenario
    ch = default_channel()
    for x in AttackKind:
        for a in (0, 1):
            assert sum(slot_joint(ch, x, a).values()) == 1
    eve = enumerate_eve_batches(ch, alice, attacks)
    assert sum(o.probability for o in eve) == 1
    slot_err = sum((slot_marginal(ch, x, a, Observer.EVE).get(1 - a, 0) for a, x in zip(alice, attacks)), Fraction(0))
    assert ensemble_metrics(eve).expected_qber == slot_err / len(alice)
    if len(alice) <= 7:
        joint = enumerate_joint_batches(ch, alice, attacks)
        assert sum(o.probability for o in joint) == 1
        assert {o.eve: o.probability for o in marginalize_bob(joint)} == {o.eve: o.probability for o in eve}


@settings(max_examples=300, deadline=None, database=None)
@given(bit_pairs(max_n=10))
def _mi_properties(pair):
    x, y = pair
    mi = plugin_mutual_information(x, y)
    n = len(x)

    def h(bits):
        k = sum(bits)
        from pingpong_eve.metrics import binary_entropy

        return binary_entropy(Fraction(k, n))

    assert abs(mi - plugin_mutual_information(y, x)) <= 1e-12
    assert -1e-12 <= mi <= min(h(x), h(y)) + 1e-12
    perm = list(range(n))[::-1]
    px = BitString(tuple(x[i] for i in perm))
    py = BitString(tuple(y[i] for i in perm))
    assert qber(px, py) == qber(x, y)
    assert abs(plugin_mutual_information(px, py) - mi) <= 1e-12


def test_criterion_5_properties(report_line):
    start = time.perf_counter()
    _enumeration_properties()
    _mi_properties()
    scenario = ensemble_metrics(enumerate_eve_batches(None, "100110", "susuus"))
    elapsed = time.perf_counter() - start
    ok = scenario.expected_qber == Fraction(1, 3) and elapsed < 30
    report_line(5, ok, f"property suites passed; Table 1 expected QBER {scenario.expected_qber}; {elapsed:.2f}s")
    assert ok


def test_criterion_6_monte_carlo(report_line):
    start = time.perf_counter()
    exact = {mi: float(p) for mi, p in table1_report().mi_histogram}
    cfg = SampleConfig(seed=20030415, trials=100_000, batch_length=6, alice="100110", attacks="susuus")
    tv = total_variation(mi_histogram(sampled_mi_values(None, cfg)), exact)
    long_cfg = SampleConfig(seed=20030415, trials=1, batch_length=100_000, mix=AttackMix(0))
    mi = convergence_study(long_cfg, [100_000]).rows[0].mean_mi
    elapsed = time.perf_counter() - start
    ok = tv < 0.02 and abs(mi - 0.311) < 0.01 and elapsed < 60
    report_line(6, ok, f"histogram TV {tv:.4f}; n=1e5 pure-u MI {mi:.4f}; {elapsed:.2f}s")
    assert ok
