import itertools

import numpy as np
import pytest
from conftest import support_rows
from hypothesis import given, settings
from hypothesis import strategies as st
from test_tableau import css_codes

from gnarsil import gf2
from gnarsil.distance import (
    DistanceQuery,
    DistanceRefused,
    bare_distance,
    dressed_distance,
    min_weight_logical,
    stabilizer_distance,
)
from gnarsil.pauli import parse_pauli, pauli_weight, symplectic_gram
from gnarsil.tableau import build_css_tableau, center_of

BS_GAUGES = ["X1X4", "X2X5", "X3X6", "X4X7", "X5X8", "X6X9",
             "Z1Z2", "Z2Z3", "Z4Z5", "Z5Z6", "Z7Z8", "Z8Z9"]
BS_STABS = ["X1X2X3X4X5X6", "X4X5X6X7X8X9", "Z1Z2Z4Z5Z7Z8", "Z2Z3Z5Z6Z8Z9"]


def paulis(strings, n):
    return np.array([parse_pauli(s, n).vector for s in strings], np.uint8)


def naive_distance(S, G, n, limit):
    """Loop over every Pauli up to ``limit`` and test it directly."""
    for w in range(1, limit + 1):
        for support in itertools.combinations(range(n), w):
            for types in itertools.product("XYZ", repeat=w):
                v = paulis(["".join(f"{t}{q + 1}" for t, q in zip(types, support))], n)[0]
                in_g = len(G) and gf2.in_row_space(G, v)
                if not symplectic_gram(S, v[None]).any() and not in_g:
                    return w
    return None


def test_shor(shor):
    assert stabilizer_distance(shor, 4) == 3
    assert stabilizer_distance(shor, 2) is None


def test_bacon_shor_dressed_and_bare():
    G = paulis(BS_GAUGES, 9)
    S = paulis(BS_STABS, 9)
    assert dressed_distance(S, G, 9, 4) == 3
    assert bare_distance(G, 9, 3) == 3


def test_surface_subsystem():
    S = paulis(["X1X2X4X5", "X5X6X8X9", "X2X3", "Z2Z3Z5Z6", "Z4Z5Z7Z8", "Z6Z9"], 9)
    G = np.vstack([S, paulis(["X1X2X3", "X1X7X8", "Z1Z4Z7", "Z6Z7Z9"], 9)])
    assert dressed_distance(S, G, 9, 3) == 2


def test_single_check():
    S = paulis(["Z1Z2"], 2)
    w, v = min_weight_logical(S, S, 2, 2)
    assert w == 1 and pauli_weight(v) == 1
    assert v.tolist() == [0, 0, 1, 0]


def test_witness_is_logical(shor):
    w, v = min_weight_logical(shor.stabilizers, shor.stabilizers, 9, 3)
    assert w == pauli_weight(v) == 3
    assert not symplectic_gram(shor.stabilizers, v[None]).any()
    assert not gf2.in_row_space(shor.stabilizers, v)


def test_refusal():
    S = np.zeros((0, 2 * 151), np.uint8)
    with pytest.raises(DistanceRefused):
        dressed_distance(S, S, 151, 2)
    with pytest.raises(DistanceRefused):
        dressed_distance(S[:, :18], S[:, :18], 9, 5)
    assert dressed_distance(S[:, :18], S[:, :18], 9, 5, force=True) == 1


def test_bad_arguments(shor):
    with pytest.raises(ValueError):
        min_weight_logical(shor.stabilizers, shor.stabilizers, 9, 2, mode="sideways")
    with pytest.raises(ValueError):
        dressed_distance(np.zeros((0, 4), np.uint8), np.zeros((0, 4), np.uint8), 2, 3)


def test_query_round_trip(surface):
    q = DistanceQuery.from_tableau(surface, 3)
    assert q.run() == 3 == q.run(css_only=True)


@settings(max_examples=150, deadline=None)
@given(css_codes(max_n=6))
def test_matches_naive_scan(code):
    T = build_css_tableau(code)
    S = T.stabilizers
    limit = min(3, T.n)
    got = stabilizer_distance(T, limit)
    assert got == naive_distance(S, S, T.n, limit)
    assert stabilizer_distance(T, limit, css_only=True) == got


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 3))
def test_dressed_at_most_bare(extra):
    G = paulis(BS_GAUGES[: 8 + extra], 9)
    S = center_of(G, 9)
    d = dressed_distance(S, G, 9, 4)
    b = bare_distance(G, 9, 4)
    assert d is not None
    assert b is None or d <= b


def test_limit_monotone(shor):
    seen = [stabilizer_distance(shor, w) for w in range(1, 5)]
    assert seen == [None, None, 3, 3]


def test_support_rows_helper():
    assert support_rows([[9]], 9)[0, 8] == 1
