import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from shorlab.circuit import (
    CPHASE,
    CSWAP,
    Circuit,
    Gate,
    GateKind,
    H,
    PHASE,
    SWAP,
    X,
    append,
    control,
    gate_count,
    new_circuit,
)
from shorlab.errors import UnsupportedGateError, ValidationError
from shorlab.modexp import build_sota, effective_permutation
from shorlab.simulator import circuit_unitary, iqft_circuit


def test_new_circuit():
    assert len(new_circuit(4)) == 0
    assert new_circuit(12).width == 12
    assert len(new_circuit(1).append(H(0))) == 1


def test_zero_width_rejected():
    with pytest.raises(ValidationError):
        new_circuit(0)


def test_append_counts_and_validates():
    c = new_circuit(4)
    assert len(append(c, SWAP(2, 3))) == 1
    with pytest.raises(ValidationError):
        c.append(SWAP(3, 3))
    with pytest.raises(ValidationError):
        c.append(H(5))


def test_append_leaves_input_unchanged():
    c = new_circuit(3).append(H(0))
    before = c.gates
    c2 = c.append(X(2))
    assert c.gates == before and c.width == 3
    assert c2.gates[:1] == before


@pytest.mark.parametrize(
    "make",
    [lambda: Gate(GateKind.H, (0, 1)), lambda: PHASE(0, float("nan")), lambda: Gate(GateKind.X, (0,), 1.0)],
)
def test_malformed_gates(make):
    with pytest.raises(ValidationError):
        make()


def test_control_maps_swaps():
    c = Circuit(3, [SWAP(1, 2)])
    cc = control(c, 0)
    assert cc.gates == (CSWAP(0, 1, 2),)
    assert len(control(new_circuit(2), 5)) == 0
    assert control(new_circuit(2), 5).width == 6


def test_control_of_cascade():
    cc = build_sota(1, 4).embed(1, 5).control(0)
    counts = gate_count(cc)
    assert counts["CSWAP"] == 6 and counts["SWAP"] == 0


def test_control_rejects_other_gates_and_collisions():
    with pytest.raises(UnsupportedGateError):
        Circuit(2, [H(0)]).control(3)
    with pytest.raises(ValidationError):
        Circuit(3, [SWAP(0, 1)]).control(1)


def test_gate_count():
    assert set(gate_count(new_circuit(2)).values()) == {0}
    assert gate_count(build_sota(3, 4))["SWAP"] == 24
    counts = gate_count(iqft_circuit(3))
    assert (counts["H"], counts["CPHASE"], counts["SWAP"]) == (3, 3, 1)


@pytest.mark.parametrize("k", range(1, 9))
def test_iqft_gate_count_formula(k):
    counts = gate_count(iqft_circuit(k))
    assert counts["H"] == k
    assert counts["CPHASE"] == k * (k - 1) // 2
    assert counts["SWAP"] == k // 2


def test_json_roundtrip():
    c = Circuit(3, [H(0), CPHASE(0, 2, -0.5), CSWAP(2, 0, 1), X(1)])
    d = json.loads(c.to_json())
    assert d["width"] == 3
    assert d["gates"][1] == {"kind": "CPHASE", "qubits": [0, 2], "angle": -0.5}
    assert Circuit.from_json(c.to_json()) == c


perm_gate = st.integers(2, 6).flatmap(
    lambda n: st.tuples(
        st.just(n),
        st.lists(
            st.one_of(
                st.permutations(range(n)).map(lambda p: SWAP(p[0], p[1])),
                st.permutations(range(n)).map(lambda p: CSWAP(p[0], p[1], p[2])) if n >= 3 else st.nothing(),
                st.integers(0, n - 1).map(X),
            ),
            max_size=12,
        ),
    )
)


@settings(max_examples=60, deadline=None)
@given(perm_gate)
def test_permutation_circuits_are_permutation_matrices(case):
    n, gates = case
    c = Circuit(n, gates)
    u = circuit_unitary(c)
    assert set(np.unique(u.real)) <= {0.0, 1.0}
    assert np.allclose(u.imag, 0)
    assert (u.real.sum(axis=0) == 1).all() and (u.real.sum(axis=1) == 1).all()
    perm = effective_permutation(c)
    assert np.array_equal(np.argmax(u.real, axis=0), perm)
