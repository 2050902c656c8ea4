"""Controlled modular-multiplication circuits for one control qubit b.

Two builders produce work-register circuits made of SWAP gates only:

* ``build_sota``: the swap cascade repeated 2**b times. One cascade is a
  cyclic left rotation of the k work bits (multiply by 2 mod 2**k - 1).
* ``build_proposed``: computes the multiplier m classically and, when m is
  a power of two that fits, emits a single SWAP(0, i). Otherwise it falls
  back to the cascade.

The caller embeds the result on the work register and applies ``control``.
"""
from __future__ import annotations

from enum import Enum
from typing import Optional

import numpy as np

from .circuit import Circuit, Gate, GateKind, PERMUTATION_KINDS
from .errors import CapacityError, DomainError, UnsupportedGateError
from .numtheory import mod_pow, pow2_exponent

DEFAULT_GATE_BUDGET = 1 << 18
MAX_PERMUTATION_WIDTH = 20


class ExponentConvention(str, Enum):
    ITERATED_SQUARING = "squaring"  # m = 2**(2**b) mod N
    LITERAL = "literal"  # m = 2**b mod N


class ModexpCircuit(Circuit):
    """A builder's output circuit plus how it was chosen."""

    __slots__ = ("multiplier", "fallback")

    def __init__(self, width, gates=(), multiplier: Optional[int] = None, fallback: bool = False):
        super().__init__(width, gates)
        self.multiplier = multiplier
        self.fallback = fallback


def sota_gate_count(b: int, k: int) -> int:
    return (1 << b) * (k - 1)


def sota_layer_gate_count(k: int) -> int:
    """SWAPs across all control qubits b = 0..k-1 for the cascade builder."""
    return ((1 << k) - 1) * (k - 1)


def build_sota(b: int, k: int, gate_budget: int = DEFAULT_GATE_BUDGET) -> ModexpCircuit:
    if k < 2:
        raise DomainError(f"work register needs k >= 2, got {k}")
    if b < 0:
        raise DomainError(f"control index must be >= 0, got {b}")
    n_gates = sota_gate_count(b, k)
    if n_gates > gate_budget:
        raise CapacityError(f"cascade for b={b}, k={k} needs {n_gates} SWAPs > budget {gate_budget}")
    cascade = tuple(Gate(GateKind.SWAP, (k - i - 2, k - i - 1)) for i in range(k - 1))
    c = ModexpCircuit(k, (), multiplier=None, fallback=False)
    c._gates = cascade * (1 << b)
    return c


def proposed_multiplier(b: int, N: int, convention=ExponentConvention.ITERATED_SQUARING) -> int:
    convention = ExponentConvention(convention)
    if convention is ExponentConvention.ITERATED_SQUARING:
        return mod_pow(2, 1 << b, N)
    return mod_pow(2, b, N)


def proposed_shift(m: int, k: int) -> Optional[int]:
    """Swap partner i for multiplier m, 0 for the identity, None for fallback.

    Only i in 1..k-2 is accepted, the same range the loop over range(k - 1)
    visits; m = 2**(k-1) therefore falls back.
    """
    i = pow2_exponent(m) if m > 0 else None
    if i is None or i > k - 2:
        return None
    return i


def build_proposed(
    b: int,
    k: int,
    N: int,
    convention=ExponentConvention.ITERATED_SQUARING,
    gate_budget: int = DEFAULT_GATE_BUDGET,
) -> ModexpCircuit:
    if k < 2:
        raise DomainError(f"work register needs k >= 2, got {k}")
    if N < 3:
        raise DomainError(f"modulus must be >= 3, got {N}")
    m = proposed_multiplier(b, N, convention)
    i = proposed_shift(m, k)
    if i is None:
        c = build_sota(b, k, gate_budget)
        c.multiplier = m
        c.fallback = True
        return c
    gates = () if i == 0 else (Gate(GateKind.SWAP, (0, i)),)
    return ModexpCircuit(k, gates, multiplier=m, fallback=False)


def rotate_left(x, k: int, shift: int = 1):
    """Cyclic left rotation of k-bit values (ints or integer arrays)."""
    shift %= k
    mask = (1 << k) - 1
    return ((x << shift) | (x >> (k - shift))) & mask


def wire_permutation(gates, width: int) -> list[int]:
    """Destination wire of each input wire after a run of SWAP gates."""
    # pos[w] = wire currently holding the content that started on w
    pos = list(range(width))
    where = list(range(width))  # where[wire] = original wire whose content sits there
    for g in gates:
        if g.kind is not GateKind.SWAP:
            raise UnsupportedGateError(f"wire permutation needs SWAP gates, found {g.kind.value}")
        a, b = g.qubits
        wa, wb = where[a], where[b]
        where[a], where[b] = wb, wa
        pos[wa], pos[wb] = b, a
    return pos


def permute_bits(values: np.ndarray, dest: list[int]) -> np.ndarray:
    """Move bit w of every value to bit dest[w]."""
    out = np.zeros_like(values)
    for w, d in enumerate(dest):
        out |= ((values >> w) & 1) << d
    return out


def effective_permutation(c: Circuit) -> np.ndarray:
    """Basis permutation of a SWAP/CSWAP/X circuit: ``perm[x]`` is the image of |x>."""
    width = c.width
    if width > MAX_PERMUTATION_WIDTH:
        raise DomainError(f"effective_permutation limited to {MAX_PERMUTATION_WIDTH} qubits")
    for g in c.gates:
        if g.kind not in PERMUTATION_KINDS:
            raise UnsupportedGateError(f"{g.kind.value} is not a permutation gate")

    state = np.arange(1 << width, dtype=np.int64)
    run = []

    def flush():
        nonlocal state
        if run:
            state = permute_bits(state, wire_permutation(run, width))
            run.clear()

    for g in c.gates:
        if g.kind is GateKind.SWAP:
            run.append(g)
            continue
        flush()
        if g.kind is GateKind.X:
            state ^= 1 << g.qubits[0]
        else:
            ctl, a, b = g.qubits
            differ = (((state >> a) ^ (state >> b)) & 1).astype(bool)
            hit = differ & ((state >> ctl) & 1).astype(bool)
            state[hit] ^= (1 << a) | (1 << b)
    flush()
    return state
