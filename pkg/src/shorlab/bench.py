"""Per-case, per-method benchmark records and report emission."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass
from enum import Enum
from typing import Iterable, Optional

from .modexp import DEFAULT_GATE_BUDGET, ExponentConvention, sota_layer_gate_count
from .numtheory import FactoringCase
from .pipeline import Backend, Method, ShorConfig, Status, run_shor
from .simulator import DEFAULT_MEMORY_BUDGET

DEFAULT_QUBIT_LIMIT = 31
CSV_COLUMNS = ["case", "method", "qubits", "gen_time_s", "exec_time_s", "shots", "status"]


class BenchStatus(str, Enum):
    OK = "OK"
    NOT_APPLICABLE = "NOT_APPLICABLE"
    CAPACITY = "CAPACITY"
    SKIPPED = "SKIPPED"
    NO_FACTOR = "NO_FACTOR"


_FROM_RUN = {
    Status.SUCCESS: BenchStatus.OK,
    Status.NOT_APPLICABLE: BenchStatus.NOT_APPLICABLE,
    Status.CAPACITY: BenchStatus.CAPACITY,
    Status.NO_FACTOR: BenchStatus.NO_FACTOR,
}


@dataclass(frozen=True)
class BenchRecord:
    case_index: int
    method: Method
    qubits: int
    gen_time_s: Optional[float]
    exec_time_s: Optional[float]
    shots: int
    status: BenchStatus

    def to_dict(self) -> dict:
        d = asdict(self)
        d["method"] = self.method.value
        d["status"] = self.status.value
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "BenchRecord":
        return cls(
            case_index=int(d["case_index"]),
            method=Method(d["method"]),
            qubits=int(d["qubits"]),
            gen_time_s=d["gen_time_s"],
            exec_time_s=d["exec_time_s"],
            shots=int(d["shots"]),
            status=BenchStatus(d["status"]),
        )


def sota_gate_total(case: FactoringCase) -> int:
    """SWAP count the cascade builder would emit for the case, without building it."""
    return sota_layer_gate_count(case.k_sota)


def run_bench(
    cases: Iterable[FactoringCase],
    methods: Iterable = (Method.PROPOSED, Method.SOTA),
    shots: int = 10_000,
    qubit_limit: Optional[int] = DEFAULT_QUBIT_LIMIT,
    memory_budget: int = DEFAULT_MEMORY_BUDGET,
    seed: int = 0,
    backend=Backend.AUTO,
    convention=ExponentConvention.ITERATED_SQUARING,
    gate_budget: int = DEFAULT_GATE_BUDGET,
) -> list[BenchRecord]:
    cases = sorted(cases, key=lambda c: c.index)
    if not cases:
        raise ValueError("run_bench needs at least one case")
    methods = sorted({Method(m) for m in methods}, key=list(Method).index)
    records = []
    for case in cases:
        for method in methods:
            k = case.k_proposed if method is Method.PROPOSED else case.k_sota
            qubits = 2 * k
            if qubit_limit is not None and qubits > qubit_limit:
                records.append(
                    BenchRecord(case.index, method, qubits, None, None, shots, BenchStatus.NOT_APPLICABLE)
                )
                continue
            cfg = ShorConfig(
                k=k,
                method=method,
                shots=shots,
                seed=seed,
                backend=backend,
                convention=convention,
                qubit_limit=qubit_limit,
                memory_budget=memory_budget,
                gate_budget=gate_budget,
            )
            res = run_shor(case.N, cfg)
            status = _FROM_RUN[res.status]
            timed = status in (BenchStatus.OK, BenchStatus.NO_FACTOR)
            records.append(
                BenchRecord(
                    case.index,
                    method,
                    qubits,
                    res.gen_time_s if timed else None,
                    res.exec_time_s if timed else None,
                    shots,
                    status,
                )
            )
    return records


def bench_ok(records: Iterable[BenchRecord]) -> bool:
    allowed = (BenchStatus.OK, BenchStatus.NOT_APPLICABLE, BenchStatus.SKIPPED)
    return all(r.status in allowed for r in records)


def _fmt_time(t: Optional[float]) -> str:
    return "" if t is None else repr(t)


def _parse_time(s: str) -> Optional[float]:
    return None if s == "" else float(s)


def emit_report(records: Iterable[BenchRecord], fmt: str = "csv") -> str:
    records = list(records)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in records:
            w.writerow(
                [
                    r.case_index,
                    r.method.value,
                    r.qubits,
                    _fmt_time(r.gen_time_s),
                    _fmt_time(r.exec_time_s),
                    r.shots,
                    r.status.value,
                ]
            )
        return buf.getvalue()
    if fmt == "json":
        return json.dumps([r.to_dict() for r in records], indent=2)
    if fmt == "markdown":
        return _markdown(records)
    raise ValueError(f"unknown report format {fmt!r}; use csv, json or markdown")


def parse_report(text: str, fmt: str = "csv") -> list[BenchRecord]:
    if fmt == "csv":
        return [
            BenchRecord(
                case_index=int(row["case"]),
                method=Method(row["method"]),
                qubits=int(row["qubits"]),
                gen_time_s=_parse_time(row["gen_time_s"]),
                exec_time_s=_parse_time(row["exec_time_s"]),
                shots=int(row["shots"]),
                status=BenchStatus(row["status"]),
            )
            for row in csv.DictReader(io.StringIO(text))
        ]
    if fmt == "json":
        return [BenchRecord.from_dict(d) for d in json.loads(text)]
    raise ValueError(f"cannot parse report format {fmt!r}")


def _cell(r: Optional[BenchRecord], attr: str) -> str:
    if r is None:
        return "-"
    if r.status is BenchStatus.NOT_APPLICABLE and attr != "qubits":
        return "Not applicable"
    value = getattr(r, attr)
    if value is None:
        return r.status.value
    return f"{value:.4f}" if isinstance(value, float) else str(value)


def _markdown(records: list[BenchRecord]) -> str:
    by_case: dict[int, dict] = {}
    for r in records:
        by_case.setdefault(r.case_index, {})[r.method] = r
    lines = [
        "| Case | Qubits (proposed) | Qubits (SOTA) | Gen time s (proposed) | Gen time s (SOTA) "
        "| Exec time s (proposed) | Exec time s (SOTA) |",
        "|---|---|---|---|---|---|---|",
    ]
    for idx in sorted(by_case):
        pr = by_case[idx].get(Method.PROPOSED)
        so = by_case[idx].get(Method.SOTA)
        cells = [f"Case {idx}"]
        for attr in ("qubits", "gen_time_s", "exec_time_s"):
            cells += [_cell(pr, attr), _cell(so, attr)]
        lines.append("| " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"
