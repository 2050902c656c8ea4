import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from shorlab.circuit import SWAP, CSWAP, Circuit, H, X
from shorlab.errors import CapacityError, DomainError, UnsupportedGateError
from shorlab.modexp import (
    ExponentConvention,
    build_proposed,
    build_sota,
    effective_permutation,
    proposed_multiplier,
    rotate_left,
    sota_layer_gate_count,
)


def rotl1(x, k):
    # one cyclic left rotation, bit by bit
    bits = [(x >> i) & 1 for i in range(k)]
    bits = [bits[-1]] + bits[:-1]
    return sum(b << i for i, b in enumerate(bits))


def test_sota_small_examples():
    assert [g.qubits for g in build_sota(0, 4)] == [(2, 3), (1, 2), (0, 1)]
    assert len(build_sota(2, 4)) == 12
    assert [g.qubits for g in build_sota(0, 2)] == [(0, 1)]


@pytest.mark.parametrize("k", [2, 5, 16])
@pytest.mark.parametrize("b", [0, 3, 12])
def test_sota_gate_count(b, k):
    assert len(build_sota(b, k)) == 2**b * (k - 1)


def test_sota_budget():
    with pytest.raises(CapacityError):
        build_sota(15, 16, gate_budget=1000)


def test_sota_bad_args():
    with pytest.raises(DomainError):
        build_sota(0, 1)


@pytest.mark.parametrize("k", range(2, 9))
def test_sota_is_repeated_rotation(k):
    for b in range(7):
        expected = []
        for x in range(2**k):
            y = x
            for _ in range(2**b):
                y = rotl1(y, k)
            expected.append(y)
        assert effective_permutation(build_sota(b, k)).tolist() == expected


def test_rotate_left_helper():
    assert rotate_left(1, 4) == 2
    assert rotate_left(8, 4) == 1
    assert rotate_left(0b0011, 4, 3) == 0b1001


@pytest.mark.parametrize(
    "b,k,n,gates,fallback",
    [
        (1, 4, 15, [(0, 2)], False),
        (2, 4, 15, [], False),
        (3, 12, 771, [(0, 8)], False),
    ],
)
def test_proposed_examples(b, k, n, gates, fallback):
    c = build_proposed(b, k, n)
    assert [g.qubits for g in c] == gates
    assert c.fallback is fallback


def test_proposed_fallback_example():
    # 2**8 = 256 = 6*39 + 22
    assert proposed_multiplier(3, 39) == 22
    c = build_proposed(3, 6, 39)
    assert c.fallback
    assert c == build_sota(3, 6)


def test_proposed_top_bit_falls_back():
    # m = 2**(k-1) is outside the range(k - 1) search
    c = build_proposed(1, 3, 15)  # m = 4 = 2**2, k - 1 = 2
    assert c.fallback


def test_literal_convention():
    assert proposed_multiplier(3, 15, ExponentConvention.LITERAL) == 8
    assert [g.qubits for g in build_proposed(2, 4, 15, "literal")] == [(0, 2)]
    assert len(build_proposed(0, 4, 15, ExponentConvention.LITERAL)) == 0


def test_effective_permutation_examples():
    assert effective_permutation(Circuit(2, [SWAP(0, 1)])).tolist() == [0, 2, 1, 3]
    perm = effective_permutation(build_sota(0, 4))
    assert [int(perm[x]) for x in (1, 2, 4, 8)] == [2, 4, 8, 1]
    assert effective_permutation(build_proposed(1, 4, 15))[1] == 4


def test_effective_permutation_mixed_gates():
    c = Circuit(3, [X(0), CSWAP(0, 1, 2), SWAP(0, 2)])
    # |000> -X-> |001> -CSWAP(no-op, targets equal)-> |001> -SWAP(0,2)-> |100>
    assert effective_permutation(c)[0] == 4


def test_effective_permutation_rejects_h():
    with pytest.raises(UnsupportedGateError):
        effective_permutation(Circuit(1, [H(0)]))


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 11), st.integers(2, 12), st.integers(3, 5000), st.sampled_from(list(ExponentConvention)))
def test_shortcut_maps_one_to_m(b, k, n, conv):
    c = build_proposed(b, k, n, conv, gate_budget=1 << 16) if 2**b * (k - 1) <= 1 << 16 else None
    if c is None or c.fallback:
        return
    assert len(c) <= 1
    assert effective_permutation(c)[1] == c.multiplier
    # deterministic decision
    again = build_proposed(b, k, n, conv, gate_budget=1 << 16)
    assert again == c and again.fallback == c.fallback


def test_layer_gate_counts():
    assert sum(len(build_sota(b, 8)) for b in range(8)) == sota_layer_gate_count(8) == 1785
    assert sum(len(build_proposed(b, 8, 51)) for b in range(8)) <= 8
