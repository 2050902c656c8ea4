"""Gate-level circuit representation.

Qubit ``i`` is bit ``i`` of a basis-state index. Only six gate kinds exist;
every circuit in the Shor pipeline is built from them.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional

from .errors import UnsupportedGateError, ValidationError


class GateKind(str, Enum):
    H = "H"
    X = "X"
    SWAP = "SWAP"
    CSWAP = "CSWAP"
    PHASE = "PHASE"
    CPHASE = "CPHASE"


_ARITY = {
    GateKind.H: 1,
    GateKind.X: 1,
    GateKind.SWAP: 2,
    GateKind.CSWAP: 3,
    GateKind.PHASE: 1,
    GateKind.CPHASE: 2,
}
_ANGLED = {GateKind.PHASE, GateKind.CPHASE}
PERMUTATION_KINDS = frozenset({GateKind.SWAP, GateKind.CSWAP, GateKind.X})


@dataclass(frozen=True, slots=True)
class Gate:
    """A single gate. For controlled kinds the control comes first in ``qubits``."""

    kind: GateKind
    qubits: tuple[int, ...]
    angle: Optional[float] = None

    def __post_init__(self):
        kind = GateKind(self.kind)
        if kind is not self.kind:
            object.__setattr__(self, "kind", kind)
        qubits = self.qubits
        if len(qubits) != _ARITY[kind]:
            raise ValidationError(f"{kind.value} takes {_ARITY[kind]} qubit(s), got {len(qubits)}")
        if any(q < 0 for q in qubits):
            raise ValidationError(f"negative qubit index in {kind.value}{qubits}")
        if len(set(qubits)) != len(qubits):
            raise ValidationError(f"duplicate qubit index in {kind.value}{qubits}")
        if kind in _ANGLED:
            if self.angle is None or not math.isfinite(self.angle):
                raise ValidationError(f"{kind.value} needs a finite angle")
        elif self.angle is not None:
            raise ValidationError(f"{kind.value} takes no angle")

    def shifted(self, offset: int) -> "Gate":
        return Gate(self.kind, tuple(q + offset for q in self.qubits), self.angle)

    def to_dict(self) -> dict:
        d = {"kind": self.kind.value, "qubits": list(self.qubits)}
        if self.angle is not None:
            d["angle"] = self.angle
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Gate":
        return cls(GateKind(d["kind"]), tuple(int(q) for q in d["qubits"]), d.get("angle"))


def H(target: int) -> Gate:
    return Gate(GateKind.H, (target,))


def X(target: int) -> Gate:
    return Gate(GateKind.X, (target,))


def SWAP(a: int, b: int) -> Gate:
    return Gate(GateKind.SWAP, (a, b))


def CSWAP(control: int, a: int, b: int) -> Gate:
    return Gate(GateKind.CSWAP, (control, a, b))


def PHASE(target: int, angle: float) -> Gate:
    return Gate(GateKind.PHASE, (target,), float(angle))


def CPHASE(control: int, target: int, angle: float) -> Gate:
    return Gate(GateKind.CPHASE, (control, target), float(angle))


class Circuit:
    """Immutable ordered gate list over a fixed number of qubits."""

    __slots__ = ("_width", "_gates")

    def __init__(self, width: int, gates: Iterable[Gate] = ()):
        if width < 1:
            raise ValidationError(f"circuit width must be >= 1, got {width}")
        gates = tuple(gates)
        for g in gates:
            _check_fits(g, width)
        self._width = width
        self._gates = gates

    @classmethod
    def _trusted(cls, width: int, gates: tuple) -> "Circuit":
        c = cls.__new__(cls)
        c._width = width
        c._gates = gates
        return c

    @property
    def width(self) -> int:
        return self._width

    @property
    def gates(self) -> tuple[Gate, ...]:
        return self._gates

    def __len__(self) -> int:
        return len(self._gates)

    def __iter__(self):
        return iter(self._gates)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Circuit):
            return NotImplemented
        return self._width == other._width and self._gates == other._gates

    def __hash__(self):
        return hash((self._width, self._gates))

    def __repr__(self) -> str:
        return f"Circuit(width={self._width}, gates={len(self._gates)})"

    def append(self, gate: Gate) -> "Circuit":
        _check_fits(gate, self._width)
        return Circuit._trusted(self._width, self._gates + (gate,))

    def extend(self, gates: Iterable[Gate]) -> "Circuit":
        gates = tuple(gates)
        for g in gates:
            _check_fits(g, self._width)
        return Circuit._trusted(self._width, self._gates + gates)

    def compose(self, other: "Circuit") -> "Circuit":
        """Append all of ``other``'s gates; ``other`` must not be wider."""
        if other.width > self._width:
            raise ValidationError(f"cannot compose width {other.width} into width {self._width}")
        return Circuit._trusted(self._width, self._gates + other.gates)

    def embed(self, offset: int, width: int) -> "Circuit":
        """Relabel qubit q as q + offset inside a circuit of the given width."""
        if offset < 0 or offset + self._width > width:
            raise ValidationError(
                f"cannot embed width {self._width} at offset {offset} into width {width}"
            )
        if offset == 0:
            return Circuit._trusted(width, self._gates)
        return Circuit._trusted(width, tuple(g.shifted(offset) for g in self._gates))

    def control(self, control_index: int) -> "Circuit":
        """Turn every SWAP(a, b) into CSWAP(control_index, a, b).

        The result is wide enough to hold ``control_index``.
        """
        if control_index < 0:
            raise ValidationError(f"negative control index {control_index}")
        out = []
        for g in self._gates:
            if g.kind is not GateKind.SWAP:
                raise UnsupportedGateError(f"control() only accepts SWAP gates, found {g.kind.value}")
            if control_index in g.qubits:
                raise ValidationError(f"control qubit {control_index} collides with SWAP{g.qubits}")
            out.append(Gate(GateKind.CSWAP, (control_index,) + g.qubits))
        return Circuit._trusted(max(self._width, control_index + 1), tuple(out))

    def gate_count(self) -> dict[str, int]:
        counts = {k.value: 0 for k in GateKind}
        for g in self._gates:
            counts[g.kind.value] += 1
        return counts

    def inverse(self) -> "Circuit":
        """Reverse gate order and negate phase angles."""
        out = []
        for g in reversed(self._gates):
            if g.angle is not None:
                out.append(Gate(g.kind, g.qubits, -g.angle))
            else:
                out.append(g)
        return Circuit._trusted(self._width, tuple(out))

    def to_dict(self) -> dict:
        return {"width": self._width, "gates": [g.to_dict() for g in self._gates]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "Circuit":
        return cls(int(d["width"]), (Gate.from_dict(g) for g in d["gates"]))

    @classmethod
    def from_json(cls, text: str) -> "Circuit":
        return cls.from_dict(json.loads(text))


def _check_fits(gate: Gate, width: int) -> None:
    if not isinstance(gate, Gate):
        raise ValidationError(f"expected a Gate, got {type(gate).__name__}")
    if max(gate.qubits) >= width:
        raise ValidationError(f"{gate.kind.value}{gate.qubits} exceeds circuit width {width}")


def new_circuit(width: int) -> Circuit:
    return Circuit(width)


def append(c: Circuit, g: Gate) -> Circuit:
    return c.append(g)


def control(c: Circuit, control_index: int) -> Circuit:
    return c.control(control_index)


def gate_count(c: Circuit) -> dict[str, int]:
    return c.gate_count()
