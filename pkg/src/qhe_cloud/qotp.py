"""Quantum one-time pad with transversal-CNOT parity addition.

Summand registers are masked qubit-by-qubit with ``X^a Z^b`` (first summand)
and ``X^c Z^d`` (second). The cloud applies CNOT from register 1 onto
register 2, which leaves ``Enc(m1) xor Enc(m2)`` in register 2; the client
undoes it with ``X^(a xor c) Z^d`` and adds the carry it computed up front
with Toffoli gates.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List

import numpy as np

from . import ShapeError
from . import wire
from .qsim import BasisRegister, apply_cnot, apply_mcx, apply_x, apply_z


@dataclass(frozen=True)
class QotpKeys:
    a: List[int]  # X mask, summand 1
    b: List[int]  # Z mask, summand 1
    c: List[int]  # X mask, summand 2
    d: List[int]  # Z mask, summand 2

    def __post_init__(self):
        lists = (self.a, self.b, self.c, self.d)
        if len({len(v) for v in lists}) != 1 or not self.a:
            raise ShapeError("key lists must be non-empty and of equal length")
        if any(bit not in (0, 1) for v in lists for bit in v):
            raise ValueError("key entries must be bits")

    @property
    def width(self) -> int:
        return len(self.a)


@dataclass(frozen=True)
class QotpCipherPair:
    x_bits: List[int]
    y_bits: List[int]
    x_phase: int = 1
    y_phase: int = 1

    def __post_init__(self):
        if len(self.x_bits) != len(self.y_bits):
            raise ShapeError("cipher registers must have equal width")

    @property
    def nbytes(self) -> int:
        # one byte per qubit, per register
        return len(self.x_bits)


def width_for(*values: int) -> int:
    return max(1, *(int(v).bit_length() for v in values))


def keygen(w: int, rng: np.random.Generator) -> QotpKeys:
    if w < 1:
        raise ValueError("width must be >= 1")
    # one (a, b, c, d) draw per qubit, as the encryption loop consumes them
    draws = rng.integers(0, 2, size=(w, 4))
    a, b, c, d = (draws[:, j].tolist() for j in range(4))
    return QotpKeys(a, b, c, d)


def _load(value: int, w: int) -> BasisRegister:
    if value < 0:
        raise ValueError("summands must be non-negative")
    if value >> w:
        raise ValueError(f"{value} overflows a {w}-qubit register")
    return BasisRegister.from_int(value, w)


def bit_carry(m1: int, m2: int, w: int) -> int:
    """Carry ``(m1 & m2) << 1`` computed with one Toffoli per bit position."""
    r1, r2 = _load(m1, w), _load(m2, w)
    carry = BasisRegister([0] * w)
    for i in range(w):
        apply_mcx([(r1, i), (r2, i)], (carry, i))
    return carry.measure() << 1


def encrypt(m1: int, m2: int, keys: QotpKeys) -> QotpCipherPair:
    w = keys.width
    r1, r2 = _load(m1, w), _load(m2, w)
    for i in range(w):
        if keys.a[i]:
            apply_x(r1, i)
        if keys.b[i]:
            apply_z(r1, i)
        if keys.c[i]:
            apply_x(r2, i)
        if keys.d[i]:
            apply_z(r2, i)
    return QotpCipherPair(r1.bits, r2.bits, r1.phase, r2.phase)


def cloud_parity_add(pair: QotpCipherPair) -> BasisRegister:
    """Transversal CNOT (register 1 controls register 2); returns register 2.

    The returned sign is the product of both register signs, i.e. the global
    sign of the two-register product state.
    """
    r1 = BasisRegister(list(pair.x_bits), pair.x_phase)
    r2 = BasisRegister(list(pair.y_bits), pair.y_phase)
    for i in range(len(r1)):
        apply_cnot((r1, i), (r2, i))
    r2.phase = r1.phase * r2.phase
    return r2


def decrypt(result_bits, keys: QotpKeys, carry: int, phase: int = 1) -> int:
    if len(result_bits) != keys.width:
        raise ShapeError(f"expected {keys.width} result qubits, got {len(result_bits)}")
    res = BasisRegister(list(result_bits), phase)
    for i in range(keys.width):
        if keys.a[i] != keys.c[i]:
            apply_x(res, i)
        if keys.d[i]:
            apply_z(res, i)
    return carry + res.measure()


def to_payload(pair: QotpCipherPair) -> wire.QotpPayload:
    return wire.QotpPayload(list(pair.x_bits), list(pair.y_bits), pair.x_phase, pair.y_phase)


def he_add(m1: int, m2: int, cloud, rng: np.random.Generator) -> int:
    if not (0 <= m1 < 2**63 and 0 <= m2 < 2**63):
        raise ValueError("summands must lie in [0, 2**63)")
    w = width_for(m1, m2)
    carry = bit_carry(m1, m2, w)
    keys = keygen(w, rng)
    pair = encrypt(m1, m2, keys)
    result = cloud.process("qotp", to_payload(pair))
    return decrypt(result.bits, keys, carry, result.phase)
