"""Arbitrary-precision classical arithmetic for the Shor pipeline.

Everything here works on Python ints, so the 8192-bit catalog moduli are
handled without any fixed-width intermediate.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

from .errors import DomainError

# brute-force order search is only allowed below this modulus
ORDER_SCAN_LIMIT = 1 << 20


@dataclass(frozen=True)
class FactorPair:
    p: int
    q: int

    def __post_init__(self):
        if not 1 < self.p <= self.q:
            raise DomainError(f"factor pair must satisfy 1 < p <= q, got ({self.p}, {self.q})")

    @property
    def product(self) -> int:
        return self.p * self.q


@dataclass(frozen=True)
class FactoringCase:
    """One benchmark instance N = 3 * (2**e + 1)."""

    index: int
    e: int
    p: int
    q: int
    N: int
    label_bits: int
    k_proposed: int
    k_sota: int
    expected_r: int

    @property
    def bits_of_n(self) -> int:
        return self.N.bit_length()

    def qubits(self, method: str) -> int:
        k = self.k_proposed if method.lower() == "proposed" else self.k_sota
        return 2 * k

    def to_dict(self) -> dict:
        return {
            "index": str(self.index),
            "e": str(self.e),
            "p": str(self.p),
            "q": str(self.q),
            "N": str(self.N),
            "k_proposed": str(self.k_proposed),
            "k_sota": str(self.k_sota),
            "expected_r": str(self.expected_r),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "FactoringCase":
        e = int(d["e"])
        return cls(
            index=int(d["index"]),
            e=e,
            p=int(d["p"]),
            q=int(d["q"]),
            N=int(d["N"]),
            label_bits=2 * e,
            k_proposed=int(d["k_proposed"]),
            k_sota=int(d["k_sota"]),
            expected_r=int(d["expected_r"]),
        )


def gcd(a: int, b: int) -> int:
    """Euclid's algorithm on non-negative integers."""
    if a < 0 or b < 0:
        raise DomainError("gcd arguments must be non-negative")
    if a == 0 and b == 0:
        raise DomainError("gcd(0, 0) is undefined")
    while b:
        a, b = b, a % b
    return a


def mod_pow(base: int, exp: int, modulus: int) -> int:
    """Right-to-left square-and-multiply; returns base**exp mod modulus."""
    if modulus < 2:
        raise DomainError(f"modulus must be >= 2, got {modulus}")
    if exp < 0:
        raise DomainError("exponent must be non-negative")
    result = 1
    base %= modulus
    while exp:
        if exp & 1:
            result = result * base % modulus
        base = base * base % modulus
        exp >>= 1
    return result


def pow2_exponent(m: int) -> Optional[int]:
    """Return i if m == 2**i, else None."""
    if m < 1:
        raise DomainError(f"pow2_exponent needs m >= 1, got {m}")
    if m & (m - 1):
        return None
    return m.bit_length() - 1


def fermat_form_exponent(N: int) -> Optional[int]:
    """Return e when N == 3 * (2**e + 1) with e >= 1, else None."""
    if N % 3:
        return None
    q = N // 3
    if q < 3:
        return None
    return pow2_exponent(q - 1)


def _divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def multiplicative_order(a: int, N: int) -> int:
    """Smallest r >= 1 with a**r = 1 (mod N).

    Scans directly for N below 2**20. Larger N must have the structured
    form 3 * (2**e + 1), where only the divisors of 2e are tested.
    """
    if N < 2:
        raise DomainError(f"modulus must be >= 2, got {N}")
    if gcd(a % N, N) != 1:
        raise DomainError(f"gcd({a}, {N}) != 1, order undefined")
    if N < ORDER_SCAN_LIMIT:
        x, r = a % N, 1
        while x != 1:
            x = x * a % N
            r += 1
        return r
    e = fermat_form_exponent(N)
    if e is None:
        raise DomainError("order oracle only handles N < 2**20 or N = 3*(2**e + 1)")
    for d in _divisors(2 * e):
        if mod_pow(a, d, N) == 1:
            return d
    raise DomainError(f"order of {a} mod N does not divide 2e = {2 * e}")


def extract_factors(a: int, r: int, N: int) -> Optional[FactorPair]:
    """Turn a period guess into a factor pair via gcd(a**(r/2) -+ 1, N).

    Returns None for odd r or when neither gcd is a proper divisor.
    """
    if r < 1:
        raise DomainError(f"period must be >= 1, got {r}")
    if gcd(a % N, N) != 1:
        raise DomainError(f"gcd({a}, {N}) != 1")
    if r % 2:
        return None
    h = mod_pow(a, r // 2, N)
    for d in (gcd(h - 1, N), gcd(h + 1, N)):
        if 1 < d < N:
            other = N // d
            return FactorPair(min(d, other), max(d, other))
    return None


# first-register widths used for the proposed method, by case index
_K_PROPOSED = {1: 4, 2: 8, 12: 13}


def make_case(index: int) -> FactoringCase:
    if not 1 <= index <= 12:
        raise DomainError(f"case index must be in 1..12, got {index}")
    e = 1 << index
    q = (1 << e) + 1
    return FactoringCase(
        index=index,
        e=e,
        p=3,
        q=q,
        N=3 * q,
        label_bits=2 * e,
        k_proposed=_K_PROPOSED.get(index, 12),
        k_sota=2 * e,
        expected_r=2 * e,
    )


def case_catalog() -> list[FactoringCase]:
    return [make_case(i) for i in range(1, 13)]


def find_case(N: int) -> Optional[FactoringCase]:
    for case in case_catalog():
        if case.N == N:
            return case
    return None


def catalog_json(cases: Optional[list[FactoringCase]] = None) -> str:
    cases = case_catalog() if cases is None else cases
    return json.dumps([c.to_dict() for c in cases], indent=2)
