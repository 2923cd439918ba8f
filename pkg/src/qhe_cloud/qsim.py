"""Basis-state quantum register simulator.

X, Z, CNOT and multi-controlled X all send a computational basis state to a
basis state times +/-1, so a register is fully described by its bit string
and a global sign. That is exact for everything the one-time pad needs and
avoids a 2**n statevector.

Gates mutate the register(s) in place and return them for chaining.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, List, Sequence, Tuple


@dataclass
class BasisRegister:
    """A register in state ``phase * |bits>``; ``bits[0]`` is least significant."""

    bits: List[int]
    phase: int = 1

    def __post_init__(self):
        self.bits = [int(b) for b in self.bits]
        if not self.bits:
            raise ValueError("register needs at least one qubit")
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("register bits must be 0 or 1")
        if self.phase not in (1, -1):
            raise ValueError("phase must be +1 or -1")

    @classmethod
    def from_int(cls, value: int, width: int) -> "BasisRegister":
        if value < 0 or value >> width:
            raise ValueError(f"{value} does not fit in {width} qubits")
        return cls([(value >> i) & 1 for i in range(width)])

    def __len__(self):
        return len(self.bits)

    def measure(self) -> int:
        """Integer read-out; deterministic because the state is a basis state."""
        return sum(b << i for i, b in enumerate(self.bits))

    def _check(self, i: int):
        if not 0 <= i < len(self.bits):
            raise IndexError(f"qubit {i} out of range for {len(self.bits)}-qubit register")


Qubit = Tuple[BasisRegister, int]


def apply_x(r: BasisRegister, i: int) -> BasisRegister:
    r._check(i)
    r.bits[i] ^= 1
    return r


def apply_z(r: BasisRegister, i: int) -> BasisRegister:
    r._check(i)
    if r.bits[i]:
        r.phase = -r.phase
    return r


def _same(a: Qubit, b: Qubit) -> bool:
    return a[0] is b[0] and a[1] == b[1]


def apply_mcx(controls: Sequence[Qubit], target: Qubit):
    """Flip ``target`` iff every control qubit is 1 (Toffoli for two controls)."""
    if not controls:
        raise ValueError("multi-controlled X needs at least one control")
    for reg, i in (*controls, target):
        reg._check(i)
    for n, c in enumerate(controls):
        if _same(c, target):
            raise ValueError("control and target must be distinct qubits")
        if any(_same(c, other) for other in controls[n + 1:]):
            raise ValueError("duplicate control qubit")
    if all(reg.bits[i] for reg, i in controls):
        reg, i = target
        reg.bits[i] ^= 1
    return tuple(reg for reg, _ in controls) + (target[0],)


def apply_cnot(control: Qubit, target: Qubit):
    return apply_mcx([control], target)


def run_program(reg: BasisRegister, program: Iterable[tuple]) -> BasisRegister:
    """Apply a gate list to one register.

    Each gate is ``("x", i)``, ``("z", i)``, ``("cnot", c, t)`` or
    ``("mcx", (c0, c1, ...), t)``.
    """
    for gate in program:
        name = gate[0]
        if name == "x":
            apply_x(reg, gate[1])
        elif name == "z":
            apply_z(reg, gate[1])
        elif name == "cnot":
            apply_cnot((reg, gate[1]), (reg, gate[2]))
        elif name == "mcx":
            apply_mcx([(reg, c) for c in gate[1]], (reg, gate[2]))
        else:
            raise ValueError(f"unknown gate {name!r}")
    return reg
