"""Shared fixtures and an independent dense-matrix oracle.

The oracle builds every unitary from literal 2x2 matrices and explicit
Kronecker products, with no code shared with the package kernels, so
agreement between the two is meaningful.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np
import pytest

from merminsim.transpile import DeviceModel

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

# Device each valid fixture is meant to be lowered for.  star_illegal is
# absent on purpose; it has no legal hub.
FIXTURE_DEVICES = {
    "fig1_xxy": DeviceModel(3, cnot_target=1),
    "fig1_yyy": DeviceModel(3, cnot_target=1),
    "fig2_yyxx": DeviceModel(4, cnot_target=2),
    "fig2_xyxxy": DeviceModel(5, cnot_target=2),
    "ghz2_bell": DeviceModel(2, cnot_target=0),
    "ghz3_plain": DeviceModel(3, cnot_target=0),
    "ghz3_imag": DeviceModel(3, cnot_target=0),
    "ghz4_alt_phase": DeviceModel(4, cnot_target=0),
    "ghz5_plain": DeviceModel(5, cnot_target=0),
    "ghz5_max_phase": DeviceModel(5, cnot_target=0),
    "ghz3_xxy_ideal": DeviceModel(3, cnot_target=0),
    "ghz3_yyy_ideal": DeviceModel(3, cnot_target=0),
    "ghz4_yyxx_ideal": DeviceModel(4, cnot_target=0),
    "ghz5_xyxxy_ideal": DeviceModel(5, cnot_target=0),
    "peephole_pairs": DeviceModel(3, cnot_target=1),
    "reversed_single": DeviceModel(2, cnot_target=0),
}

_SQ = 1.0 / math.sqrt(2.0)

ORACLE_1Q = {
    "h": np.array([[_SQ, _SQ], [_SQ, -_SQ]], dtype=complex),
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "s": np.array([[1, 0], [0, 1j]], dtype=complex),
    "sdg": np.array([[1, 0], [0, -1j]], dtype=complex),
    "t": np.array([[1, 0], [0, (1 + 1j) * _SQ]], dtype=complex),
    "tdg": np.array([[1, 0], [0, (1 - 1j) * _SQ]], dtype=complex),
}

ORACLE_PAULI = {
    "i": np.eye(2, dtype=complex),
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def kron_chain(mats) -> np.ndarray:
    out = np.array([[1.0]], dtype=complex)
    for m in mats:
        out = np.kron(out, m)
    return out


def embed_1q(mat: np.ndarray, qubit: int, n: int) -> np.ndarray:
    # qubit 0 is the leftmost Kronecker factor (most significant bit)
    factors = [np.eye(2, dtype=complex)] * n
    factors[qubit] = mat
    return kron_chain(factors)


def oracle_cnot(control: int, target: int, n: int) -> np.ndarray:
    dim = 1 << n
    u = np.zeros((dim, dim), dtype=complex)
    for i in range(dim):
        if (i >> (n - 1 - control)) & 1:
            u[i ^ (1 << (n - 1 - target)), i] = 1.0
        else:
            u[i, i] = 1.0
    return u


def oracle_unitary(circuit) -> np.ndarray:
    n = circuit.n_qubits
    u = np.eye(1 << n, dtype=complex)
    for gate in circuit.gates:
        if gate.kind == "cnot":
            g = oracle_cnot(gate.qubits[0], gate.qubits[1], n)
        else:
            g = embed_1q(ORACLE_1Q[gate.kind], gate.qubits[0], n)
        u = g @ u
    return u


def oracle_state(circuit) -> np.ndarray:
    e0 = np.zeros(1 << circuit.n_qubits, dtype=complex)
    e0[0] = 1.0
    return oracle_unitary(circuit) @ e0


def oracle_pauli_matrix(label: str) -> np.ndarray:
    return kron_chain([ORACLE_PAULI[ch] for ch in label.lower()])


def oracle_expectation(vec: np.ndarray, label: str) -> float:
    val = np.vdot(vec, oracle_pauli_matrix(label) @ vec)
    return float(val.real)


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


def valid_fixture_names() -> list[str]:
    return sorted(p.stem for p in (FIXTURES / "valid").glob("*.qc"))


ACCEPTANCE_LINES: list[str] = []


def record_acceptance(num: int, name: str, ok: bool, detail: str) -> None:
    line = f"ACCEPTANCE {num} {'PASS' if ok else 'FAIL'} {name}: {detail}"
    ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(line)
