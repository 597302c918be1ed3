import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import strategies as st

from pingpong_eve.channel import AttackKind, AttackSequence, BitString, default_channel


@pytest.fixture
def channel():
    return default_channel()


@st.composite
def scenarios(draw, max_n=10):
    n = draw(st.integers(1, max_n))
    alice = draw(st.lists(st.sampled_from([0, 1]), min_size=n, max_size=n))
    attacks = draw(st.lists(st.sampled_from([AttackKind.U, AttackKind.S]), min_size=n, max_size=n))
    return BitString(tuple(alice)), AttackSequence(tuple(attacks))


@st.composite
def bit_pairs(draw, max_n=40):
    n = draw(st.integers(1, max_n))
    x = draw(st.lists(st.sampled_from([0, 1]), min_size=n, max_size=n))
    y = draw(st.lists(st.sampled_from([0, 1]), min_size=n, max_size=n))
    return BitString(tuple(x)), BitString(tuple(y))


def brute_force_joint(channel, alice, attacks):
    """Expand every (b, e) choice for every slot, including zero-weight cells.

    Independent of the enumerator: walks all 4**n paths and multiplies raw
    table entries, dropping zero-probability paths at the end.
    """
    alice = [int(c) for c in str(alice)]
    attacks = [AttackKind(str(x)) for x in attacks]
    out = {}
    cells = [(b, e) for b in (0, 1) for e in (0, 1)]
    for path in itertools.product(cells, repeat=len(alice)):
        p = Fraction(1)
        for (b, e), a, x in zip(path, alice, attacks):
            p *= channel.table[(x, a, b, e)]
        if p:
            eve = "".join(str(e) for _, e in path)
            bob = "".join(str(b) for b, _ in path)
            out[(eve, bob)] = out.get((eve, bob), Fraction(0)) + p
    return out


def numpy_plugin_mi(x, y):
    """Plug-in MI as H(X) + H(Y) - H(X, Y) from a numpy 2x2 histogram."""
    x = np.array(list(x), dtype=int)
    y = np.array(list(y), dtype=int)
    hist, _, _ = np.histogram2d(x, y, bins=2, range=[[0, 2], [0, 2]])
    pxy = hist / hist.sum()

    def h(p):
        p = p[p > 0]
        return float(-(p * np.log2(p)).sum())

    return h(pxy.sum(axis=1)) + h(pxy.sum(axis=0)) - h(pxy.ravel())


def brute_force_channel_mi(channel, prob_s, prior, observer, conditioned):
    """Term-by-term MI over a dense numpy array p[x, a, b, e]."""
    p = np.zeros((2, 2, 2, 2))
    for xi, x in enumerate((AttackKind.U, AttackKind.S)):
        wx = prob_s if x is AttackKind.S else 1 - prob_s
        for a in (0, 1):
            wa = prior if a == 1 else 1 - prior
            for b in (0, 1):
                for e in (0, 1):
                    p[xi, a, b, e] = wx * wa * float(channel.table[(x, a, b, e)])
    pao = p.sum(axis=3) if observer == "bob" else p.sum(axis=2)  # shape (x, a, o)
    total = 0.0
    if conditioned:
        for xi in range(2):
            px = pao[xi].sum()
            for a in range(2):
                for o in range(2):
                    pj = pao[xi, a, o]
                    if pj > 0:
                        pa = pao[xi, a, :].sum()
                        po = pao[xi, :, o].sum()
                        total += pj * math.log2(pj * px / (pa * po))
        return total
    q = pao.sum(axis=0)
    for a in range(2):
        for o in range(2):
            if q[a, o] > 0:
                total += q[a, o] * math.log2(q[a, o] / (q[a, :].sum() * q[:, o].sum()))
    return total
