import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.errors import DomainError, ScenarioError, UnsupportedGateError
from src.models.circuit import Circuit, GateKind, GateSpec, StateId
from src.models.noise_config import NoiseConfig
from src.models.states import DensityMatrix
from src.quantum.circuits import (
    HADAMARD,
    canonicalize_phase,
    circuit_unitary,
    clifford_cardinality,
    clifford_index,
    clifford_matrices,
    gate_matrix,
    m_state_amplitudes,
    paper_state,
    prepare_state,
    run_circuit,
    rz,
    single_qubit_clifford_group,
)
from src.quantum.noise import survival_for_purity
from src.quantum.qcore import purity


class TestCliffordGroup:
    def test_has_24_elements(self):
        group = single_qubit_clifford_group()
        assert len(group) == 24
        assert [el.canonical_id for el in group] == list(range(24))

    def test_identity_first(self):
        assert_allclose(single_qubit_clifford_group()[0].matrix, np.eye(2))

    def test_elements_are_unitary(self):
        for u in clifford_matrices():
            assert_allclose(u @ u.conj().T, np.eye(2), atol=1e-12)

    def test_closed_under_multiplication(self):
        mats = clifford_matrices()
        for a in mats:
            for b in mats:
                assert clifford_index(a @ b) is not None

    def test_t_gate_is_not_clifford(self):
        assert clifford_index(rz(math.pi / 4)) is None

    def test_lookup_ignores_global_phase(self):
        assert clifford_index(np.exp(0.7j) * HADAMARD) == clifford_index(HADAMARD)

    def test_canonical_phase(self):
        assert_allclose(canonicalize_phase(-1j * HADAMARD), HADAMARD, atol=1e-12)

    @pytest.mark.parametrize("n,order", [(1, 24), (2, 11520)])
    def test_cardinality(self, n, order):
        assert clifford_cardinality(n) == order

    def test_cardinality_domain(self):
        with pytest.raises(DomainError):
            clifford_cardinality(0)


class TestGates:
    def test_cnot_matrix(self):
        cnot = gate_matrix(GateSpec(kind=GateKind.CNOT, qubits=(0, 1)))
        expected = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
        assert_allclose(cnot, expected, atol=1e-12)

    def test_reversed_cnot(self):
        circuit = Circuit(num_qubits=2, gates=[GateSpec(kind=GateKind.CNOT, qubits=(1, 0))])
        expected = np.array([[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0]])
        assert_allclose(circuit_unitary(circuit), expected, atol=1e-12)

    def test_t_is_rz_quarter_pi(self):
        assert_allclose(gate_matrix(GateSpec(kind=GateKind.T, qubits=(0,))), rz(math.pi / 4))

    def test_rxy_reduces_to_rx(self):
        rxy = gate_matrix(GateSpec(kind=GateKind.RXY, qubits=(0,), angles=(0.3, 0.0)))
        rx = gate_matrix(GateSpec(kind=GateKind.RX, qubits=(0,), angles=(0.3,)))
        assert_allclose(rxy, rx)

    def test_wrong_arity(self):
        with pytest.raises(UnsupportedGateError):
            GateSpec(kind=GateKind.CZ, qubits=(0,))
        with pytest.raises(UnsupportedGateError):
            GateSpec(kind=GateKind.RZ, qubits=(0,))
        with pytest.raises(UnsupportedGateError):
            GateSpec(kind=GateKind.CNOT, qubits=(1, 1))

    def test_qubit_out_of_register(self):
        with pytest.raises(UnsupportedGateError):
            Circuit(num_qubits=2, gates=[GateSpec(kind=GateKind.H, qubits=(2,))])


class TestRunCircuit:
    def test_bell_state(self):
        rho, circuit = prepare_state(StateId.PSI4)
        expected = DensityMatrix.from_statevector([1, 0, 0, 1])
        assert_allclose(rho.matrix, expected.matrix, atol=1e-12)
        assert circuit.count_cz() == 1

    def test_m_state_matches_reference_amplitudes(self):
        rho, _ = prepare_state(StateId.M)
        expected = DensityMatrix.from_statevector(m_state_amplitudes())
        assert_allclose(rho.matrix, expected.matrix, atol=1e-12)

    def test_m_erased_is_rz_on_qubit_zero(self):
        erased, _ = prepare_state(StateId.M_ERASED, {"erase": 0.0})
        plain, _ = prepare_state(StateId.M)
        assert_allclose(erased.matrix, plain.matrix, atol=1e-12)

    def test_nlm_amplitudes(self):
        theta = 0.6
        rho, _ = prepare_state(StateId.NLM, {"theta": theta})
        psi = [math.cos(theta / 2), 0, 0, -1j * math.sin(theta / 2)]
        assert_allclose(rho.matrix, DensityMatrix.from_statevector(psi).matrix, atol=1e-12)

    def test_lm_erased_adds_second_t(self):
        assert len(paper_state(StateId.LM_ERASED).gates) == len(paper_state(StateId.LM).gates) + 1

    def test_t_variants(self):
        plain = paper_state(StateId.PSI3)
        with_t = paper_state(StateId.PSI3, {"t": 1})
        assert len(with_t.gates) == len(plain.gates) + 2

    def test_depolarizing_after_each_cz(self):
        p = survival_for_purity(0.94, 4, n_cz=1)
        rho, _ = prepare_state(StateId.LM, p_dep_cz=p)
        assert purity(rho) == pytest.approx(0.94, abs=1e-12)

    def test_cnot_counts_as_one_cz(self):
        circuit = Circuit(
            num_qubits=2,
            gates=[GateSpec(kind=GateKind.CNOT, qubits=(0, 1)), GateSpec(kind=GateKind.CZ, qubits=(0, 1))],
        )
        assert circuit.count_cz() == 2
        rho = run_circuit(circuit, NoiseConfig(p_dep_cz=0.9))
        survival = 0.9 ** 2
        assert purity(rho) == pytest.approx(survival ** 2 + (1 - survival ** 2) / 4, abs=1e-12)

    def test_single_qubit_circuits_are_noise_free(self):
        rho = run_circuit(paper_state(StateId.PSI1), NoiseConfig(p_dep_cz=0.5))
        assert purity(rho) == pytest.approx(1.0)

    def test_unknown_state(self):
        with pytest.raises(ScenarioError):
            paper_state("Psi9")
