"""Embedded invariant checks run by ``shor-lab selftest``."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .modexp import build_sota, effective_permutation, rotate_left
from .numtheory import case_catalog, extract_factors, multiplicative_order
from .pipeline import Backend, ShorConfig, build_shor_circuit, exact_distribution, run_shor
from .simulator import circuit_unitary, iqft_circuit


@dataclass(frozen=True)
class Check:
    module: str
    name: str
    fn: Callable[[], None]


def _iqft_matches_dft(k: int) -> Callable[[], None]:
    def check():
        K = 1 << k
        j = np.arange(K)
        dft_inv = np.exp(-2j * np.pi * np.outer(j, j) / K) / np.sqrt(K)
        err = np.abs(circuit_unitary(iqft_circuit(k)) - dft_inv).max()
        assert err < 1e-9, f"max abs error {err:.3e}"

    return check


def _backend_agreement(case_index: int) -> Callable[[], None]:
    def check():
        case = case_catalog()[case_index - 1]
        cfg = ShorConfig(k=case.k_proposed)
        circuit = build_shor_circuit(case.N, cfg)
        dense = exact_distribution(circuit, cfg, Backend.DENSE)
        fast = exact_distribution(circuit, cfg, Backend.FAST)
        tv = 0.5 * np.abs(dense - fast).sum()
        assert tv < 1e-9, f"total variation {tv:.3e}"

    return check


def _sota_rotation(k: int) -> Callable[[], None]:
    def check():
        x = np.arange(1 << k, dtype=np.int64)
        for b in range(4):
            perm = effective_permutation(build_sota(b, k))
            assert np.array_equal(perm, rotate_left(x, k, 1 << b)), f"b={b}"

    return check


def _golden_support(N: int, k: int, expected: set) -> Callable[[], None]:
    def check():
        cfg = ShorConfig(k=k, backend=Backend.FAST)
        probs = exact_distribution(build_shor_circuit(N, cfg), cfg, Backend.FAST)
        support = set(np.flatnonzero(probs > 1e-12).tolist())
        assert support == expected, f"support {sorted(support)}"

    return check


def _golden_factor(N: int, k: int, p: int, q: int) -> Callable[[], None]:
    def check():
        res = run_shor(N, ShorConfig(k=k, seed=0))
        assert res.factors is not None and (res.factors.p, res.factors.q) == (p, q), res.status

    return check


def _catalog_orders() -> None:
    for case in case_catalog():
        assert case.N == 3 * case.q
        if case.e <= 64:
            assert multiplicative_order(2, case.N) == case.expected_r, f"case {case.index}"
        pair = extract_factors(2, case.expected_r, case.N)
        assert pair is not None and (pair.p, pair.q) == (3, case.q), f"case {case.index}"


def checks() -> list[Check]:
    out = [Check("simulator", f"iqft_matches_dft_k{k}", _iqft_matches_dft(k)) for k in range(1, 7)]
    out += [Check("simulator", f"backend_agreement_case{i}", _backend_agreement(i)) for i in (1, 2)]
    out += [Check("modexp", f"sota_is_rotation_k{k}", _sota_rotation(k)) for k in (2, 4, 8)]
    out += [
        Check("numtheory", "catalog_orders_and_factors", _catalog_orders),
        Check("pipeline", "golden_n15_support", _golden_support(15, 4, {0, 4, 8, 12})),
        Check("pipeline", "golden_n771_support", _golden_support(771, 12, set(range(0, 4096, 256)))),
        Check("pipeline", "golden_n15_factor", _golden_factor(15, 4, 3, 5)),
        Check("pipeline", "golden_n771_factor", _golden_factor(771, 12, 3, 257)),
    ]
    return out


def run_selftest(echo: Callable[[str], None] = print) -> bool:
    ok = True
    for check in checks():
        try:
            check.fn()
        except Exception as exc:  # report every failure, keep going
            ok = False
            echo(f"FAIL {check.module}.{check.name}: {exc}")
        else:
            echo(f"PASS {check.module}.{check.name}")
    return ok
