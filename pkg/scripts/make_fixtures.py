"""Regenerate the circuit fixtures under fixtures/.

Everything in fixtures/valid is produced deterministically from the circuit
builders and the transpiler, so a change in either shows up as a fixture diff.
Run from anywhere; paths are resolved relative to this file.
"""

from __future__ import annotations

import math
from pathlib import Path

from merminsim import (
    Circuit,
    DeviceModel,
    MeasurementSetting,
    ghz_circuit,
    serialize_circuit,
    transpile,
    with_setting,
)
from merminsim.circuits import cnot, h, s, sdg, t, tdg, x

ROOT = Path(__file__).resolve().parent.parent
VALID = ROOT / "fixtures" / "valid"
BAD = ROOT / "fixtures" / "bad"


def measured(n: int, phase: float, mask: int, hub: int) -> Circuit:
    prep = ghz_circuit(n, phase, control=hub)
    return with_setting(prep, MeasurementSetting(n, mask))


def lowered(n: int, phase: float, mask: int, hub: int) -> Circuit:
    out, _ = transpile(measured(n, phase, mask, hub), DeviceModel(n, cnot_target=hub))
    return out


# (name, header comment, circuit)
def build_valid() -> list[tuple[str, str, Circuit]]:
    entries = [
        (
            "fig1_xxy",
            "3-qubit XXY measurement circuit lowered for hub qubit 1",
            lowered(3, math.pi / 2, 0b001, hub=1),
        ),
        (
            "fig1_yyy",
            "3-qubit YYY measurement circuit lowered for hub qubit 1",
            lowered(3, math.pi / 2, 0b111, hub=1),
        ),
        (
            "fig2_yyxx",
            "4-qubit YYXX measurement circuit lowered for hub qubit 2",
            lowered(4, 7 * math.pi / 4, 0b1100, hub=2),
        ),
        (
            "fig2_xyxxy",
            "5-qubit XYXXY measurement circuit lowered for hub qubit 2",
            lowered(5, 0.0, 0b01001, hub=2),
        ),
        ("ghz2_bell", "Bell pair preparation", ghz_circuit(2)),
        ("ghz3_plain", "3-qubit GHZ preparation, no phase", ghz_circuit(3)),
        ("ghz3_imag", "3-qubit GHZ with quarter phase on the branch", ghz_circuit(3, math.pi / 2)),
        ("ghz4_alt_phase", "4-qubit GHZ at seven eighth-turns", ghz_circuit(4, 7 * math.pi / 4)),
        ("ghz5_plain", "5-qubit GHZ preparation, no phase", ghz_circuit(5)),
        ("ghz5_max_phase", "5-qubit GHZ at half turn", ghz_circuit(5, math.pi)),
        (
            "ghz3_xxy_ideal",
            "unlowered XXY measurement circuit",
            measured(3, math.pi / 2, 0b001, hub=0),
        ),
        (
            "ghz3_yyy_ideal",
            "unlowered YYY measurement circuit",
            measured(3, math.pi / 2, 0b111, hub=0),
        ),
        (
            "ghz4_yyxx_ideal",
            "unlowered YYXX measurement circuit",
            measured(4, 7 * math.pi / 4, 0b1100, hub=0),
        ),
        (
            "ghz5_xyxxy_ideal",
            "unlowered XYXXY measurement circuit",
            measured(5, 0.0, 0b01001, hub=0),
        ),
        (
            "peephole_pairs",
            "adjacent inverse pairs around a hub-legal CNOT",
            Circuit(
                3,
                (
                    h(0), h(0),
                    s(2), sdg(2),
                    cnot(0, 1), cnot(0, 1),
                    t(1), tdg(1),
                    x(2), x(2),
                    h(0), s(0),
                ),
            ),
        ),
        (
            "reversed_single",
            "single CNOT that must be reversed for hub qubit 0",
            Circuit(2, (cnot(0, 1),)),
        ),
        (
            "star_illegal",
            "CNOT pair with no common qubit; rejected by any single-hub device",
            Circuit(4, (h(0), cnot(0, 1), cnot(2, 3))),
        ),
    ]
    return entries


BAD_FILES = {
    "err_dup_qubit": "qubits 3\ncnot 1 1\n",
    "err_unknown": "qubits 2\nfoo 0\n",
    "err_badindex": "qubits 2\nh zero\n",
    "err_range": "qubits 2\nh 5\n",
    "err_noheader": "h 0\n",
    "err_measure_len": "qubits 3\nh 0\nmeasure x x\n",
}


def main() -> None:
    VALID.mkdir(parents=True, exist_ok=True)
    BAD.mkdir(parents=True, exist_ok=True)
    for name, note, circ in build_valid():
        path = VALID / f"{name}.qc"
        path.write_text(f"# {note}\n" + serialize_circuit(circ))
        print(f"wrote {path.relative_to(ROOT)}")
    for name, text in BAD_FILES.items():
        path = BAD / f"{name}.qc"
        path.write_text(text)
        print(f"wrote {path.relative_to(ROOT)}")


if __name__ == "__main__":
    main()
