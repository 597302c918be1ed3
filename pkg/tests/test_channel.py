from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from pingpong_eve.channel import (
    AttackChannel,
    AttackKind,
    AttackSequence,
    BitString,
    InputError,
    ModelValidationError,
    Observer,
    default_channel,
    dump_channel,
    load_channel,
    slot_joint,
    slot_marginal,
)

U, S = AttackKind.U, AttackKind.S
Q = Fraction(1, 4)


def test_default_channel_matches_published_table(channel):
    assert channel.table[(U, 0, 0, 0)] == 1
    assert channel.table[(S, 1, 1, 1)] == 1
    assert channel.table[(U, 1, 0, 1)] == Q
    for b, e in [(0, 1), (1, 0), (1, 1)]:
        assert channel.table[(U, 0, b, e)] == 0
    for b, e in [(0, 0), (0, 1), (1, 0), (1, 1)]:
        assert channel.table[(U, 1, b, e)] == Q
        assert channel.table[(S, 0, b, e)] == Q
    for b, e in [(0, 0), (0, 1), (1, 0)]:
        assert channel.table[(S, 1, b, e)] == 0


def test_getitem_accepts_text_attack(channel):
    assert channel[("u", 0, 0, 0)] == 1


@pytest.mark.parametrize(
    "x, a, expected",
    [
        (U, 0, {(0, 0): 1}),
        (S, 0, {(0, 0): Q, (0, 1): Q, (1, 0): Q, (1, 1): Q}),
        (S, 1, {(1, 1): 1}),
        (U, 1, {(0, 0): Q, (0, 1): Q, (1, 0): Q, (1, 1): Q}),
    ],
)
def test_slot_joint(channel, x, a, expected):
    assert slot_joint(channel, x, a) == expected


@pytest.mark.parametrize(
    "x, a, observer, expected",
    [
        (U, 0, "eve", {0: 1}),
        (U, 1, "eve", {0: Fraction(1, 2), 1: Fraction(1, 2)}),
        (S, 1, "bob", {1: 1}),
        (S, 0, Observer.BOB, {0: Fraction(1, 2), 1: Fraction(1, 2)}),
    ],
)
def test_slot_marginal(channel, x, a, observer, expected):
    assert slot_marginal(channel, x, a, observer) == expected


@pytest.mark.parametrize("x", [U, S])
@pytest.mark.parametrize("a", [0, 1])
def test_normalization_and_marginal_consistency(channel, x, a):
    joint = slot_joint(channel, x, a)
    assert sum(joint.values()) == 1
    eve, bob = {}, {}
    for (b, e), p in joint.items():
        eve[e] = eve.get(e, 0) + p
        bob[b] = bob.get(b, 0) + p
    assert slot_marginal(channel, x, a, "eve") == eve
    assert slot_marginal(channel, x, a, "bob") == bob


def test_support_shapes(channel):
    assert len(slot_joint(channel, U, 0)) == 1
    assert len(slot_joint(channel, S, 1)) == 1
    assert len(slot_joint(channel, U, 1)) == 4
    assert len(slot_joint(channel, S, 0)) == 4


def test_unnormalized_channel_rejected():
    table = dict(default_channel().table)
    table[(U, 0, 0, 0)] = Fraction(1, 2)
    with pytest.raises(ModelValidationError):
        AttackChannel(table)


def test_out_of_range_entry_rejected():
    with pytest.raises(ModelValidationError):
        AttackChannel({(U, 0, 0, 0): Fraction(3, 2)})


def test_channel_is_immutable(channel):
    with pytest.raises(TypeError):
        channel.table[(U, 0, 0, 0)] = 0


def test_channel_equality(channel):
    assert channel == default_channel()
    assert hash(channel) == hash(default_channel())


@given(st.lists(st.sampled_from("01"), min_size=1, max_size=30).map("".join))
def test_bitstring_round_trip(text):
    assert str(BitString.parse(text)) == text
    assert BitString.parse(str(BitString.parse(text))) == BitString.parse(text)


@given(st.lists(st.sampled_from("usUS"), min_size=1, max_size=30).map("".join))
def test_attack_round_trip(text):
    seq = AttackSequence.parse(text)
    assert str(seq) == text.lower()
    assert AttackSequence.parse(str(seq)) == seq


@pytest.mark.parametrize("bad", ["", "102", "abc"])
def test_bitstring_rejects_bad_text(bad):
    with pytest.raises(InputError):
        BitString.parse(bad)


def test_attack_rejects_bad_text():
    with pytest.raises(InputError):
        AttackSequence.parse("sux")


def test_bitstring_complement():
    assert str(BitString.parse("1001").complement()) == "0110"


def test_load_channel_round_trip(tmp_path, channel):
    path = tmp_path / "ch.txt"
    path.write_text("# header\n" + dump_channel(channel))
    assert load_channel(path) == channel


def test_load_channel_sparse_and_decimal(tmp_path):
    path = tmp_path / "ch.txt"
    path.write_text(
        "u 0 0 0 1\n"
        "u 1 1 1 0.5\nu 1 0 0 1/2\n"
        "s 0 0 0 1\n"
        "S 1 1 1 1  # trailing comment\n"
    )
    ch = load_channel(path)
    assert ch[(U, 1, 1, 1)] == Fraction(1, 2)
    assert ch[(U, 1, 0, 1)] == 0


def test_load_channel_reports_bad_lines(tmp_path):
    path = tmp_path / "ch.txt"
    path.write_text("u 0 0 1\n")
    with pytest.raises(InputError):
        load_channel(path)
    path.write_text("u 0 0 0 1\nu 0 0 0 1\n")
    with pytest.raises(InputError):
        load_channel(path)
    path.write_text("u 0 0 0 1\n")
    with pytest.raises(ModelValidationError):
        load_channel(path)
