"""Circuit execution: dense statevector backend, grouped-FFT fast path, sampling."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from .circuit import Circuit, Gate, GateKind
from .errors import CapacityError, DomainError, UnsupportedGateError, ValidationError
from .modexp import permute_bits, wire_permutation

DEFAULT_MEMORY_BUDGET = 4 * 2**30
BYTES_PER_AMPLITUDE = 16
_SQRT1_2 = 1 / math.sqrt(2)


@dataclass
class StateVector:
    num_qubits: int
    amplitudes: np.ndarray

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def copy(self) -> "StateVector":
        return StateVector(self.num_qubits, self.amplitudes.copy())


def state_bytes(n: int) -> int:
    return (1 << n) * BYTES_PER_AMPLITUDE


def init_state(n: int, memory_budget: int = DEFAULT_MEMORY_BUDGET) -> StateVector:
    if n < 1:
        raise DomainError(f"need at least one qubit, got {n}")
    need = state_bytes(n)
    if need > memory_budget:
        raise CapacityError(f"{n} qubits need {need} bytes > memory budget {memory_budget}")
    amps = np.zeros(1 << n, dtype=np.complex128)
    amps[0] = 1.0
    return StateVector(n, amps)


def _index(n: int, fixed: dict) -> tuple:
    # reshape((2,)*n) puts qubit q on axis n - 1 - q
    idx = [slice(None)] * n
    for q, bit in fixed.items():
        idx[n - 1 - q] = bit
    return tuple(idx)


def _apply_gate(psi: np.ndarray, n: int, g: Gate) -> None:
    kind, qs = g.kind, g.qubits
    if kind is GateKind.H:
        i0, i1 = _index(n, {qs[0]: 0}), _index(n, {qs[0]: 1})
        a = psi[i0].copy()
        psi[i0] += psi[i1]
        psi[i0] *= _SQRT1_2
        psi[i1] -= a
        psi[i1] *= -_SQRT1_2
    elif kind is GateKind.X:
        i0, i1 = _index(n, {qs[0]: 0}), _index(n, {qs[0]: 1})
        tmp = psi[i0].copy()
        psi[i0] = psi[i1]
        psi[i1] = tmp
    elif kind is GateKind.SWAP or kind is GateKind.CSWAP:
        ctl = {qs[0]: 1} if kind is GateKind.CSWAP else {}
        a, b = qs[-2:]
        i01 = _index(n, {**ctl, a: 0, b: 1})
        i10 = _index(n, {**ctl, a: 1, b: 0})
        tmp = psi[i01].copy()
        psi[i01] = psi[i10]
        psi[i10] = tmp
    elif kind is GateKind.PHASE:
        psi[_index(n, {qs[0]: 1})] *= np.exp(1j * g.angle)
    elif kind is GateKind.CPHASE:
        psi[_index(n, {qs[0]: 1, qs[1]: 1})] *= np.exp(1j * g.angle)
    else:  # pragma: no cover
        raise UnsupportedGateError(kind)


def apply(state: StateVector, c: Circuit) -> StateVector:
    """Apply ``c`` to a copy of ``state``."""
    if c.width != state.num_qubits:
        raise ValidationError(f"circuit width {c.width} != state width {state.num_qubits}")
    out = state.copy()
    n = out.num_qubits
    psi = out.amplitudes.reshape((2,) * n)
    for g in c.gates:
        _apply_gate(psi, n, g)
    return out


def run_dense(c: Circuit, memory_budget: int = DEFAULT_MEMORY_BUDGET) -> StateVector:
    return apply(init_state(c.width, memory_budget), c)


def circuit_unitary(c: Circuit) -> np.ndarray:
    """Dense unitary of a small circuit; column j is the image of |j>."""
    if c.width > 10:
        raise DomainError("circuit_unitary is limited to 10 qubits")
    dim = 1 << c.width
    cols = []
    for j in range(dim):
        basis = np.zeros(dim, dtype=np.complex128)
        basis[j] = 1.0
        cols.append(apply(StateVector(c.width, basis), c).amplitudes)
    return np.stack(cols, axis=1)


def iqft_gates(k: int, offset: int = 0) -> list[Gate]:
    if k < 1:
        raise DomainError(f"IQFT width must be >= 1, got {k}")
    gates = [Gate(GateKind.SWAP, (offset + j, offset + k - 1 - j)) for j in range(k // 2)]
    for j in range(k):
        for m in range(j):
            gates.append(
                Gate(GateKind.CPHASE, (offset + m, offset + j), -math.pi / 2 ** (j - m))
            )
        gates.append(Gate(GateKind.H, (offset + j,)))
    return gates


def iqft_circuit(k: int, offset: int = 0, width: int | None = None) -> Circuit:
    """Inverse QFT on qubits offset..offset+k-1, qubit ``offset`` least significant."""
    width = offset + k if width is None else width
    return Circuit(width, iqft_gates(k, offset))


@dataclass
class Histogram:
    register_width: int
    counts: dict = field(default_factory=dict)
    shots: int = 0

    def __post_init__(self):
        total = 0
        for key, n in self.counts.items():
            if len(key) != self.register_width:
                raise ValidationError(f"bitstring {key!r} has wrong length")
            if n < 0:
                raise ValidationError("negative count")
            total += n
        if total != self.shots:
            raise ValidationError(f"counts sum to {total}, expected {self.shots} shots")

    def outcome_counts(self) -> dict[int, int]:
        return {int(k, 2): n for k, n in self.counts.items()}

    def frequencies(self) -> dict[str, float]:
        return {k: n / self.shots for k, n in self.counts.items()}

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["bitstring", "count", "probability"])
        for key in sorted(self.counts):
            n = self.counts[key]
            w.writerow([key, n, repr(n / self.shots)])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "Histogram":
        rows = list(csv.DictReader(io.StringIO(text)))
        counts = {r["bitstring"]: int(r["count"]) for r in rows}
        width = len(rows[0]["bitstring"]) if rows else 0
        return cls(width, counts, sum(counts.values()))

    def to_dict(self) -> dict:
        return {
            "register_width": self.register_width,
            "shots": self.shots,
            "counts": {k: self.counts[k] for k in sorted(self.counts)},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, d: dict) -> "Histogram":
        return cls(int(d["register_width"]), {k: int(v) for k, v in d["counts"].items()}, int(d["shots"]))


def marginal_probabilities(state: StateVector, register: range) -> np.ndarray:
    """Distribution of the contiguous qubit range ``register``, others traced out."""
    register = _as_range(register)
    n = state.num_qubits
    if len(register) == 0:
        raise ValidationError("empty measurement register")
    if register.step != 1 or register.start < 0 or register.stop > n:
        raise ValidationError(f"register {register} not a contiguous range within {n} qubits")
    lo, w = register.start, len(register)
    probs = state.probabilities().reshape(1 << (n - lo - w), 1 << w, 1 << lo)
    return probs.sum(axis=(0, 2))


def _as_range(register) -> range:
    if isinstance(register, range):
        return register
    start, stop = register
    return range(start, stop)


def sample_distribution(probs: np.ndarray, width: int, shots: int, seed: int) -> Histogram:
    """Draw ``shots`` samples of a ``width``-bit outcome from ``probs``."""
    if shots < 1:
        raise ValidationError(f"shots must be positive, got {shots}")
    p = np.clip(np.asarray(probs, dtype=np.float64), 0.0, None)
    p = p / p.sum()
    rng = np.random.default_rng(seed)
    draws = rng.multinomial(shots, p)
    counts = {format(int(y), f"0{width}b"): int(draws[y]) for y in np.flatnonzero(draws)}
    return Histogram(width, counts, shots)


def sample(state: StateVector, register, shots: int, seed: int) -> Histogram:
    register = _as_range(register)
    probs = marginal_probabilities(state, register)
    return sample_distribution(probs, len(register), shots, seed)


WorkMap = Union[np.ndarray, Callable[[np.ndarray], np.ndarray]]


def exact_distribution_fast(k: int, work_map: WorkMap) -> np.ndarray:
    """First-register outcome distribution after the inverse QFT.

    The pre-IQFT state is sum_i |i>|f(i)> / sqrt(2**k). Each distinct label
    f(i) is an orthogonal work-register branch, so the outcome probabilities
    are the summed squared DFT magnitudes of each label's indicator vector.
    """
    K = 1 << k
    labels = work_map(np.arange(K, dtype=np.int64)) if callable(work_map) else np.asarray(work_map)
    if labels.shape != (K,):
        raise ValidationError(f"work map must cover all {K} first-register values")
    _, inverse = np.unique(labels, return_inverse=True)
    groups = int(inverse.max()) + 1
    probs = np.zeros(K, dtype=np.float64)
    chunk = max(1, (1 << 22) // K)
    for start in range(0, groups, chunk):
        ids = np.arange(start, min(groups, start + chunk))
        indicator = (inverse[None, :] == ids[:, None]).astype(np.float64)
        spectrum = np.fft.fft(indicator, axis=1)
        probs += (spectrum.real**2 + spectrum.imag**2).sum(axis=0)
    return probs / (K * K)


def shor_work_map(c: Circuit, k: int) -> np.ndarray:
    """Work-register basis value reached for every first-register value i.

    Accepts circuits of the Shor family over 2k qubits: H on each counting
    qubit, permutation gates on the work register (CSWAPs controlled from
    the counting register, plain SWAP/X), and a trailing inverse QFT on the
    counting register. Anything else raises UnsupportedGateError.
    """
    if c.width != 2 * k:
        raise ValidationError(f"expected width {2 * k}, got {c.width}")
    tail = iqft_gates(k)
    gates = c.gates
    if len(gates) < len(tail) or list(gates[len(gates) - len(tail):]) != tail:
        raise UnsupportedGateError("fast backend needs a trailing inverse QFT on the counting register")
    body = gates[: len(gates) - len(tail)]

    K = 1 << k
    i = np.arange(K, dtype=np.int64)
    work = np.zeros(K, dtype=np.int64)
    hadamards = set()
    ctl = None
    run: list[Gate] = []

    def flush():
        nonlocal work
        if not run:
            return
        dest = wire_permutation(run, k)
        if ctl is None:
            work = permute_bits(work, dest)
        else:
            hit = ((i >> ctl) & 1).astype(bool)
            work[hit] = permute_bits(work[hit], dest)
        run.clear()

    for g in body:
        qs = g.qubits
        if g.kind is GateKind.H and qs[0] < k:
            if qs[0] in hadamards or ctl is not None:
                raise UnsupportedGateError("counting-register H must come once, before any control")
            hadamards.add(qs[0])
            continue
        if g.kind is GateKind.X and qs[0] >= k:
            flush()
            ctl = None
            work ^= 1 << (qs[0] - k)
            continue
        if g.kind is GateKind.SWAP and min(qs) >= k:
            if ctl is not None:
                flush()
                ctl = None
            run.append(Gate(GateKind.SWAP, (qs[0] - k, qs[1] - k)))
            continue
        if g.kind is GateKind.CSWAP and qs[0] < k and min(qs[1:]) >= k:
            if qs[0] not in hadamards:
                raise UnsupportedGateError("control qubit used before its H")
            if ctl != qs[0]:
                flush()
                ctl = qs[0]
            run.append(Gate(GateKind.SWAP, (qs[1] - k, qs[2] - k)))
            continue
        raise UnsupportedGateError(f"{g.kind.value}{qs} is outside the Shor circuit family")
    flush()
    if len(hadamards) != k:
        raise UnsupportedGateError("every counting qubit needs an H")
    return work
