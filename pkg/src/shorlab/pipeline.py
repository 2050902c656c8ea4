"""End-to-end Shor runs: circuit assembly, execution, period and factor extraction."""
from __future__ import annotations

import json
import time
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from typing import Optional

import numpy as np

from .circuit import Circuit, Gate, GateKind
from .errors import CapacityError, DomainError, NotApplicableError, ValidationError
from .modexp import DEFAULT_GATE_BUDGET, ExponentConvention, build_proposed, build_sota
from .numtheory import FactorPair, extract_factors, gcd
from .simulator import (
    DEFAULT_MEMORY_BUDGET,
    Histogram,
    exact_distribution_fast,
    iqft_gates,
    marginal_probabilities,
    run_dense,
    sample_distribution,
    shor_work_map,
    state_bytes,
)

SCHEMA = "shor-lab/v1"
# AUTO picks the dense backend only up to this many qubits
AUTO_DENSE_MAX_QUBITS = 16


class Method(str, Enum):
    PROPOSED = "proposed"
    SOTA = "sota"


class Backend(str, Enum):
    DENSE = "dense"
    FAST = "fast"
    AUTO = "auto"


class Status(str, Enum):
    SUCCESS = "SUCCESS"
    NO_FACTOR = "NO_FACTOR"
    NOT_APPLICABLE = "NOT_APPLICABLE"
    CAPACITY = "CAPACITY"


@dataclass(frozen=True)
class ShorConfig:
    k: int
    method: Method = Method.PROPOSED
    a: int = 2
    shots: int = 10_000
    seed: int = 0
    convention: ExponentConvention = ExponentConvention.ITERATED_SQUARING
    backend: Backend = Backend.AUTO
    qubit_limit: Optional[int] = None
    memory_budget: int = DEFAULT_MEMORY_BUDGET
    gate_budget: int = DEFAULT_GATE_BUDGET

    def __post_init__(self):
        object.__setattr__(self, "method", Method(self.method))
        object.__setattr__(self, "backend", Backend(self.backend))
        object.__setattr__(self, "convention", ExponentConvention(self.convention))
        if self.k < 2:
            raise ValidationError(f"k must be >= 2, got {self.k}")
        if self.a != 2:
            # both builders only realize multiplication by powers of two
            raise ValidationError(f"only base a = 2 is supported, got {self.a}")
        if self.shots < 1:
            raise ValidationError(f"shots must be positive, got {self.shots}")
        if self.qubit_limit is not None and self.qubit_limit < 1:
            raise ValidationError("qubit_limit must be positive")

    @property
    def total_qubits(self) -> int:
        return 2 * self.k


@dataclass(frozen=True)
class Candidate:
    y: int
    fraction: Fraction
    r: int
    count: int = 0


@dataclass
class FactoringResult:
    N: int
    method: Method
    status: Status
    qubits: int
    histogram: Optional[Histogram] = None
    candidates: list = field(default_factory=list)
    r_selected: Optional[int] = None
    factors: Optional[FactorPair] = None
    gen_time_s: Optional[float] = None
    exec_time_s: Optional[float] = None
    backend: Optional[Backend] = None
    message: str = ""

    def to_dict(self, include_histogram: bool = True) -> dict:
        d = {
            "schema": SCHEMA,
            "N": str(self.N),
            "method": self.method.value,
            "status": self.status.value,
            "qubits": str(self.qubits),
            "backend": self.backend.value if self.backend else None,
            "r_selected": None if self.r_selected is None else str(self.r_selected),
            "factors": None
            if self.factors is None
            else {"p": str(self.factors.p), "q": str(self.factors.q)},
            "candidates": [
                {
                    "y": str(c.y),
                    "fraction": f"{c.fraction.numerator}/{c.fraction.denominator}",
                    "r": str(c.r),
                    "count": str(c.count),
                }
                for c in self.candidates
            ],
            "gen_time_s": self.gen_time_s,
            "exec_time_s": self.exec_time_s,
            "message": self.message,
        }
        if include_histogram:
            d["histogram"] = None if self.histogram is None else self.histogram.to_dict()
        return d

    def to_json(self, include_histogram: bool = True) -> str:
        return json.dumps(self.to_dict(include_histogram), indent=2)

    @classmethod
    def from_dict(cls, d: dict) -> "FactoringResult":
        if d.get("schema") != SCHEMA:
            raise ValidationError(f"unknown schema {d.get('schema')!r}")
        f = d.get("factors")
        h = d.get("histogram")
        return cls(
            N=int(d["N"]),
            method=Method(d["method"]),
            status=Status(d["status"]),
            qubits=int(d["qubits"]),
            histogram=None if h is None else Histogram.from_dict(h),
            candidates=[
                Candidate(int(c["y"]), Fraction(c["fraction"]), int(c["r"]), int(c["count"]))
                for c in d.get("candidates", [])
            ],
            r_selected=None if d.get("r_selected") is None else int(d["r_selected"]),
            factors=None if f is None else FactorPair(int(f["p"]), int(f["q"])),
            gen_time_s=d.get("gen_time_s"),
            exec_time_s=d.get("exec_time_s"),
            backend=None if d.get("backend") is None else Backend(d["backend"]),
            message=d.get("message", ""),
        )


def check_qubit_limit(cfg: ShorConfig) -> None:
    if cfg.qubit_limit is not None and cfg.total_qubits > cfg.qubit_limit:
        raise NotApplicableError(cfg.total_qubits, cfg.qubit_limit)


def modexp_circuit(b: int, N: int, cfg: ShorConfig) -> Circuit:
    if cfg.method is Method.PROPOSED:
        return build_proposed(b, cfg.k, N, cfg.convention, cfg.gate_budget)
    return build_sota(b, cfg.k, cfg.gate_budget)


def build_shor_circuit(N: int, cfg: ShorConfig) -> Circuit:
    """Full circuit over 2k qubits: counting register q0..q(k-1), work register above it."""
    check_qubit_limit(cfg)
    if N < 3:
        raise DomainError(f"N must be >= 3, got {N}")
    if gcd(cfg.a, N) != 1:
        raise DomainError(f"gcd({cfg.a}, {N}) != 1")
    k = cfg.k
    width = 2 * k
    gates = [Gate(GateKind.H, (q,)) for q in range(k)]
    gates.append(Gate(GateKind.X, (k,)))
    for b in range(k):
        block = modexp_circuit(b, N, cfg).embed(k, width).control(b)
        gates.extend(block.gates)
    gates.extend(iqft_gates(k))
    return Circuit._trusted(width, tuple(gates))


def period_candidates(h: Histogram, k: int) -> list[Candidate]:
    """Read each nonzero outcome y as y / 2**k; the reduced denominator is the guess."""
    if h.register_width != k:
        raise ValidationError(f"histogram width {h.register_width} != k {k}")
    out = []
    for y, count in h.outcome_counts().items():
        if y == 0:
            continue
        frac = Fraction(y, 1 << k)
        out.append(Candidate(y, frac, frac.denominator, count))
    out.sort(key=lambda c: (-c.count, c.r, c.y))
    return out


def select_and_extract(candidates, a: int, N: int) -> tuple[Optional[int], Optional[FactorPair]]:
    """First candidate r (or 2r) that yields a verified factor pair."""
    tried = set()
    for cand in candidates:
        r = cand.r if isinstance(cand, Candidate) else int(cand)
        for guess in (r, 2 * r):
            if guess in tried:
                continue
            tried.add(guess)
            pair = extract_factors(a, guess, N)
            if pair is not None and pair.p * pair.q == N:
                return guess, pair
    return None, None


def resolve_backend(cfg: ShorConfig) -> Backend:
    if cfg.backend is not Backend.AUTO:
        return cfg.backend
    if cfg.total_qubits <= AUTO_DENSE_MAX_QUBITS and state_bytes(cfg.total_qubits) <= cfg.memory_budget:
        return Backend.DENSE
    return Backend.FAST


def exact_distribution(circuit: Circuit, cfg: ShorConfig, backend: Backend) -> np.ndarray:
    """Exact counting-register distribution of a built Shor circuit."""
    if backend is Backend.DENSE:
        state = run_dense(circuit, cfg.memory_budget)
        return marginal_probabilities(state, range(cfg.k))
    return exact_distribution_fast(cfg.k, shor_work_map(circuit, cfg.k))


def run_shor(N: int, cfg: ShorConfig) -> FactoringResult:
    result = FactoringResult(N=N, method=cfg.method, status=Status.NO_FACTOR, qubits=cfg.total_qubits)
    try:
        check_qubit_limit(cfg)
    except NotApplicableError as exc:
        result.status = Status.NOT_APPLICABLE
        result.message = str(exc)
        return result

    t0 = time.perf_counter()
    try:
        circuit = build_shor_circuit(N, cfg)
    except CapacityError as exc:
        result.status = Status.CAPACITY
        result.message = str(exc)
        return result
    result.gen_time_s = time.perf_counter() - t0

    backend = resolve_backend(cfg)
    result.backend = backend
    t0 = time.perf_counter()
    try:
        probs = exact_distribution(circuit, cfg, backend)
    except CapacityError as exc:
        result.status = Status.CAPACITY
        result.message = str(exc)
        return result
    result.histogram = sample_distribution(probs, cfg.k, cfg.shots, cfg.seed)
    result.exec_time_s = time.perf_counter() - t0

    result.candidates = period_candidates(result.histogram, cfg.k)
    r, pair = select_and_extract(result.candidates, cfg.a, N)
    if pair is not None and 1 < pair.p <= pair.q < N and pair.p * pair.q == N:
        result.status = Status.SUCCESS
        result.r_selected = r
        result.factors = pair
    else:
        result.message = "no candidate period produced a nontrivial factor"
    return result
