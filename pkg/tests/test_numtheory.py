import math

import pytest
from hypothesis import given, strategies as st

from shorlab.errors import DomainError
from shorlab.numtheory import (
    FactorPair,
    case_catalog,
    catalog_json,
    extract_factors,
    FactoringCase,
    gcd,
    mod_pow,
    multiplicative_order,
    pow2_exponent,
)


def brute_gcd(a, b):
    return max(d for d in range(1, max(a, b) + 1) if a % d == 0 and b % d == 0)


def naive_pow(base, exp, modulus):
    acc = 1
    for _ in range(exp):
        acc = acc * base % modulus
    return acc % modulus


def brute_order(a, n):
    return next(r for r in range(1, n + 1) if naive_pow(a, r, n) == 1)


@pytest.mark.parametrize("a,b,expected", [(3, 15, 3), (0, 7, 7), (255, 771, 3)])
def test_gcd_examples(a, b, expected):
    assert gcd(a, b) == expected
    assert brute_gcd(a, b) == expected


def test_gcd_both_zero():
    with pytest.raises(DomainError):
        gcd(0, 0)


@given(st.integers(0, 10**6), st.integers(0, 10**6))
def test_gcd_matches_math(a, b):
    if a == b == 0:
        return
    g = gcd(a, b)
    assert g == math.gcd(a, b)
    assert a % g == 0 and b % g == 0


@pytest.mark.parametrize("args,expected", [((2, 4, 15), 1), ((2, 0, 771), 1), ((2, 16, 771), 1)])
def test_mod_pow_examples(args, expected):
    assert mod_pow(*args) == expected
    assert naive_pow(*args) == expected


def test_mod_pow_small_modulus():
    with pytest.raises(DomainError):
        mod_pow(2, 3, 1)


@given(st.integers(0, 2**10), st.integers(0, 2**10), st.integers(2, 2**16))
def test_mod_pow_matches_naive(a, e, n):
    assert mod_pow(a, e, n) == naive_pow(a, e, n)


def test_mod_pow_big_operands():
    n = case_catalog()[-1].N
    assert mod_pow(2, 8192, n) == 1
    assert mod_pow(7, 12345, n) == pow(7, 12345, n)


@pytest.mark.parametrize("m,expected", [(256, 8), (1, 0), (253, None), (2**4096, 4096)])
def test_pow2_exponent(m, expected):
    assert pow2_exponent(m) == expected


def test_pow2_exponent_zero():
    with pytest.raises(DomainError):
        pow2_exponent(0)


@given(st.integers(1, 2**80))
def test_pow2_exponent_iff_single_bit(m):
    bits = [i for i in range(m.bit_length()) if m >> i & 1]
    expected = bits[0] if len(bits) == 1 else None
    assert pow2_exponent(m) == expected


@pytest.mark.parametrize("a,n,expected", [(2, 15, 4), (2, 771, 16), (2, 51, 8)])
def test_multiplicative_order_examples(a, n, expected):
    assert multiplicative_order(a, n) == expected
    assert brute_order(a, n) == expected


def test_order_requires_coprime():
    with pytest.raises(DomainError):
        multiplicative_order(3, 15)


def test_order_large_unstructured_rejected():
    with pytest.raises(DomainError):
        multiplicative_order(2, (1 << 61) - 1)


@pytest.mark.parametrize(
    "a,r,n,expected", [(2, 4, 15, (3, 5)), (2, 16, 771, (3, 257)), (2, 2, 15, (3, 5))]
)
def test_extract_factors_examples(a, r, n, expected):
    pair = extract_factors(a, r, n)
    assert (pair.p, pair.q) == expected


def test_extract_factors_odd_period_is_empty():
    assert extract_factors(2, 3, 15) is None


def test_extract_factors_trivial_is_empty():
    # h = 2**8 = 1 mod 15 -> gcd(0, 15) = 15 and gcd(2, 15) = 1
    assert extract_factors(2, 16, 15) is None


def test_factor_pair_ordering():
    with pytest.raises(DomainError):
        FactorPair(5, 3)
    with pytest.raises(DomainError):
        FactorPair(1, 15)


# N values as printed in the case appendix
PRINTED_N = {
    1: 15,
    2: 51,
    3: 771,
    4: 196611,
    5: 12884901891,
    6: 55340232221128654851,
    7: 1020847100762815390390123822295304634371,
    8: 347376267711948586270712955026063723559809953996921692118372752023739388919811,
}
PRINTED_Q = {4: 65537, 5: 4294967297, 6: 18446744073709551617}


def test_catalog_matches_printed_values():
    cases = case_catalog()
    assert len(cases) == 12
    for idx, n in PRINTED_N.items():
        assert cases[idx - 1].N == n
    for idx, q in PRINTED_Q.items():
        assert cases[idx - 1].q == q


def test_catalog_register_widths():
    cases = case_catalog()
    assert [c.k_proposed for c in cases] == [4, 8] + [12] * 9 + [13]
    assert [c.e for c in cases] == [2**i for i in range(1, 13)]
    assert all(c.k_sota == 2 * c.e for c in cases)
    assert cases[2].qubits("proposed") == 24


def test_catalog_label_bits_differ_from_bit_length():
    c = case_catalog()[2]
    assert c.label_bits == 16
    assert c.bits_of_n == 10


@pytest.mark.parametrize("case", case_catalog(), ids=lambda c: f"case{c.index}")
def test_catalog_invariants(case):
    assert case.q == 2**case.e + 1
    assert case.N == 3 * case.q == case.p * case.q
    assert case.expected_r == 2 * case.e
    if case.e <= 64:
        assert multiplicative_order(2, case.N) == case.expected_r
        pair = extract_factors(2, multiplicative_order(2, case.N), case.N)
    else:
        assert multiplicative_order(2, case.N) == case.expected_r
        pair = extract_factors(2, case.expected_r, case.N)
    assert (pair.p, pair.q) == (3, case.N // 3)


def test_catalog_json_roundtrip():
    import json

    data = json.loads(catalog_json())
    assert data[0]["N"] == "15"
    assert all(isinstance(v, str) for v in data[-1].values())
    assert [FactoringCase.from_dict(d) for d in data] == case_catalog()
