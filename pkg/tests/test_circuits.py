import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from merminsim.circuits import (
    Circuit,
    CircuitFormatError,
    Gate,
    MeasurementSetting,
    cnot,
    ghz_circuit,
    h,
    mask_bit,
    parse_circuit,
    phase_gates,
    phase_step_count,
    s,
    serialize_circuit,
    with_setting,
)
from merminsim.statevector import simulate_circuit

from conftest import FIXTURES, oracle_state


def test_gate_validation():
    with pytest.raises(ValueError):
        cnot(1, 1)
    with pytest.raises(ValueError):
        Gate("h", (0, 1))
    with pytest.raises(ValueError):
        Gate("cnot", (0,))
    with pytest.raises(ValueError):
        Gate("rz", (0,))
    with pytest.raises(ValueError):
        h(-1)


def test_circuit_validation():
    with pytest.raises(ValueError):
        Circuit(2, (h(3),))
    with pytest.raises(ValueError):
        Circuit(2, (), measure_basis=("x",))
    with pytest.raises(ValueError):
        Circuit(11, ())
    c = Circuit(2, (h(0),))
    assert c.measure_basis == ("z", "z")


@pytest.mark.parametrize(
    "angle,k",
    [
        (0.0, 0),
        (math.pi / 4, 1),
        (math.pi / 2, 2),
        (3 * math.pi / 4, 3),
        (math.pi, 4),
        (7 * math.pi / 4, 7),
        (2 * math.pi, 0),
        (-math.pi / 4, 7),
    ],
)
def test_phase_step_count(angle, k):
    assert phase_step_count(angle) == k


def test_phase_step_count_rejects_off_grid():
    with pytest.raises(ValueError, match="multiple of pi/4"):
        phase_step_count(math.pi / 3)


def test_phase_gates_decomposition():
    assert phase_gates(0, 0) == []
    assert [g.kind for g in phase_gates(1, 0)] == ["t"]
    assert [g.kind for g in phase_gates(2, 0)] == ["s"]
    assert [g.kind for g in phase_gates(5, 1)] == ["s", "s", "t"]
    assert [g.kind for g in phase_gates(7, 2)] == ["s", "s", "s", "t"]
    assert all(g.qubits == (2,) for g in phase_gates(7, 2))


def test_ghz_circuit_structure():
    c = ghz_circuit(3)
    assert [(g.kind, g.qubits) for g in c.gates] == [
        ("h", (0,)),
        ("cnot", (0, 1)),
        ("cnot", (0, 2)),
    ]
    c2 = ghz_circuit(3, control=2)
    assert [(g.kind, g.qubits) for g in c2.gates] == [
        ("h", (2,)),
        ("cnot", (2, 0)),
        ("cnot", (2, 1)),
    ]
    c3 = ghz_circuit(3, math.pi / 2)
    assert c3.gates[-1].kind == "s"


def test_ghz_circuit_rejects_bad_input():
    with pytest.raises(ValueError):
        ghz_circuit(1)
    with pytest.raises(ValueError):
        ghz_circuit(3, math.pi / 5)
    with pytest.raises(ValueError):
        ghz_circuit(3, control=3)


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
@pytest.mark.parametrize("k", range(8))
def test_ghz_circuit_reaches_target_state(n, k):
    state = simulate_circuit(ghz_circuit(n, k * math.pi / 4))
    target = np.zeros(1 << n, dtype=complex)
    target[0] = 1 / math.sqrt(2)
    target[-1] = np.exp(1j * k * math.pi / 4) / math.sqrt(2)
    fid = abs(np.vdot(target, state.amplitudes)) ** 2
    assert fid >= 1 - 1e-10


def test_mask_bit_is_msb_first():
    # party 0 is the leftmost character, so mask bit n-1-party
    assert mask_bit(0b001, 2, 3) == 1
    assert mask_bit(0b001, 0, 3) == 0
    assert mask_bit(0b100, 0, 3) == 1


def test_measurement_setting_label():
    assert MeasurementSetting(3, 0b001).label() == "XXY"
    assert MeasurementSetting(3, 0b111).label() == "YYY"
    assert MeasurementSetting(5, 0b01001).label() == "XYXXY"
    with pytest.raises(ValueError):
        MeasurementSetting(3, 0b1000)


def test_with_setting_gate_counts():
    base = ghz_circuit(4, 7 * math.pi / 4)
    for mask in (0b0000, 0b1100, 0b1111):
        c = with_setting(base, MeasurementSetting(4, mask))
        added = c.gates[len(base.gates):]
        assert sum(1 for g in added if g.kind == "sdg") == bin(mask).count("1")
        assert sum(1 for g in added if g.kind == "h") == 4
        assert c.measure_basis == ("z",) * 4


def test_with_setting_order():
    c = with_setting(ghz_circuit(3, math.pi / 2), MeasurementSetting(3, 0b001))
    tail = [(g.kind, g.qubits[0]) for g in c.gates[-4:]]
    assert tail == [("h", 0), ("h", 1), ("sdg", 2), ("h", 2)]


def test_parse_minimal():
    c = parse_circuit("qubits 2\nh 0\ncnot 0 1\n")
    assert c.n_qubits == 2
    assert [(g.kind, g.qubits) for g in c.gates] == [("h", (0,)), ("cnot", (0, 1))]
    assert c.measure_basis == ("z", "z")


def test_parse_comments_case_and_blank_lines():
    text = "# leading note\nQUBITS 3\n\nH 0\n  # indented comment\nCNOT 0 2\nMEASURE X Z Y\n"
    c = parse_circuit(text)
    assert c.n_qubits == 3
    assert c.measure_basis == ("x", "z", "y")


@pytest.mark.parametrize(
    "text,what,line",
    [
        ("h 0\n", "missing qubits header", 1),
        ("", "missing qubits header", 1),
        ("qubits x\n", "bad qubit count", 1),
        ("qubits 0\n", "bad qubit count", 1),
        ("qubits 99\n", "bad qubit count", 1),
        ("qubits 2\nqubits 2\n", "duplicate qubits header", 2),
        ("qubits 2\nmeasure z z\nh 0\n", "gate after measure", 3),
        ("qubits 2\nmeasure z\n", "qubit count mismatch", 2),
        ("qubits 2\nmeasure z q\n", "bad basis", 2),
        ("qubits 2\nfoo 0\n", "unknown mnemonic", 2),
        ("qubits 2\nh zero\n", "bad index", 2),
        ("qubits 2\nh 0 1\n", "bad index", 2),
        ("qubits 2\nh 5\n", "bad index", 2),
        ("qubits 2\ncnot 1 1\n", "duplicate qubit", 2),
    ],
)
def test_parse_errors(text, what, line):
    with pytest.raises(CircuitFormatError) as err:
        parse_circuit(text)
    assert err.value.what == what
    assert err.value.line == line
    assert str(err.value) == f"{what}, line {line}"


@pytest.mark.parametrize(
    "name,what,line",
    [
        ("err_dup_qubit", "duplicate qubit", 2),
        ("err_unknown", "unknown mnemonic", 2),
        ("err_badindex", "bad index", 2),
        ("err_range", "bad index", 2),
        ("err_noheader", "missing qubits header", 1),
        ("err_measure_len", "qubit count mismatch", 3),
    ],
)
def test_bad_fixture_files(name, what, line):
    text = (FIXTURES / "bad" / f"{name}.qc").read_text()
    with pytest.raises(CircuitFormatError) as err:
        parse_circuit(text)
    assert str(err.value) == f"{what}, line {line}"


def test_serialize_emits_measure_line():
    out = serialize_circuit(Circuit(2, (h(0),)))
    assert out == "qubits 2\nh 0\nmeasure z z\n"


_GATE_STRATEGY = st.one_of(
    st.tuples(st.sampled_from(["h", "x", "s", "sdg", "t", "tdg"]), st.integers(0, 3)),
    st.tuples(st.just("cnot"), st.integers(0, 3), st.integers(0, 3)),
)


@st.composite
def circuits(draw, max_qubits=4):
    n = draw(st.integers(1, max_qubits))
    raw = draw(st.lists(_GATE_STRATEGY, max_size=12))
    gates = []
    for item in raw:
        if item[0] == "cnot":
            ctrl, tgt = item[1] % n, item[2] % n
            if ctrl == tgt:
                continue
            gates.append(cnot(ctrl, tgt))
        else:
            gates.append(Gate(item[0], (item[1] % n,)))
    basis = draw(
        st.one_of(st.none(), st.lists(st.sampled_from("xyz"), min_size=n, max_size=n))
    )
    return Circuit(n, tuple(gates), tuple(basis) if basis else None)


@given(circuits())
def test_round_trip_parse_of_serialize(c):
    assert parse_circuit(serialize_circuit(c)) == c


@given(circuits())
def test_serialize_of_parse_is_textually_stable(c):
    text = serialize_circuit(c)
    assert serialize_circuit(parse_circuit(text)) == text


def test_round_trip_on_all_valid_fixtures():
    for path in sorted((FIXTURES / "valid").glob("*.qc")):
        c = parse_circuit(path.read_text())
        assert parse_circuit(serialize_circuit(c)) == c


def test_fixture_goldens_match_builders():
    """The lowered figure circuits are regenerable from the builders."""
    from merminsim.transpile import transpile
    from conftest import FIXTURE_DEVICES

    cases = {
        "fig1_xxy": (3, math.pi / 2, 0b001),
        "fig1_yyy": (3, math.pi / 2, 0b111),
        "fig2_yyxx": (4, 7 * math.pi / 4, 0b1100),
        "fig2_xyxxy": (5, 0.0, 0b01001),
    }
    for name, (n, phase, mask) in cases.items():
        device = FIXTURE_DEVICES[name]
        raw = with_setting(
            ghz_circuit(n, phase, control=device.cnot_target),
            MeasurementSetting(n, mask),
        )
        rebuilt, _ = transpile(raw, device)
        stored = parse_circuit((FIXTURES / "valid" / f"{name}.qc").read_text())
        assert rebuilt == stored


def test_ghz_state_matches_oracle():
    c = ghz_circuit(3, math.pi / 2)
    vec = oracle_state(c)
    amp = 1 / math.sqrt(2)
    assert abs(vec[0] - amp) < 1e-12
    assert abs(vec[7] - 1j * amp) < 1e-12
    assert np.allclose(vec, simulate_circuit(c).amplitudes, atol=1e-12)
