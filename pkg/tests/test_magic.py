import math

import numpy as np
import pytest

from src.errors import DimensionMismatchError, DomainError, InconsistencyError, OutOfModelError
from src.models.circuit import StateId
from src.models.states import DensityMatrix
from src.quantum.circuits import CZ_MATRIX, HADAMARD, PHASE_S, clifford_matrices, prepare_state
from src.quantum.magic import (
    check_distillation_lemma,
    local_magic,
    magic_report,
    nonlocal_magic_from_rdm_purity,
    nonlocal_magic_noisy,
    nonlocal_magic_schmidt,
    nonlocal_magic_theta,
    pauli_spectrum_sum,
    rdm_purity_depolarized,
    schmidt_spectrum,
    schmidt_weight_from_noisy_rdm_purity,
    sre_exact,
    sre_nlm_depolarized,
    stabilizer_purity_exact,
)
from src.quantum.noise import depolarize
from src.quantum.qcore import partial_trace, purity, tensor
from tests.conftest import T_PLUS_M2, random_mixed_state, random_pure_state

I2 = np.eye(2, dtype=complex)
SWAP = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)
CNOT = np.kron(I2, HADAMARD) @ CZ_MATRIX @ np.kron(I2, HADAMARD)
TWO_QUBIT_GENERATORS = [
    np.kron(HADAMARD, I2),
    np.kron(I2, HADAMARD),
    np.kron(PHASE_S, I2),
    np.kron(I2, PHASE_S),
    CZ_MATRIX,
    CNOT,
]


class TestStabilizerEntropy:
    def test_t_plus_anchor(self, t_plus):
        assert sre_exact(t_plus) == pytest.approx(T_PLUS_M2, abs=1e-10)
        assert stabilizer_purity_exact(t_plus) == pytest.approx(0.375, abs=1e-12)

    def test_zero_state(self, zero_state):
        assert stabilizer_purity_exact(zero_state) == pytest.approx(0.5)
        assert sre_exact(zero_state) == pytest.approx(0.0, abs=1e-12)

    def test_stabilizer_states_have_no_magic(self, bell):
        assert sre_exact(bell) == pytest.approx(0.0, abs=1e-12)
        plus, _ = prepare_state(StateId.PSI3)
        assert sre_exact(plus) == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("num_qubits", [1, 2, 3])
    def test_maximally_mixed(self, num_qubits):
        rho = DensityMatrix.maximally_mixed(num_qubits)
        assert stabilizer_purity_exact(rho) == pytest.approx(1.0 / rho.dim ** 2)
        assert sre_exact(rho) == pytest.approx(0.0, abs=1e-12)

    def test_nonnegative_on_random_states(self, rng):
        for n in (1, 2):
            for _ in range(5):
                assert sre_exact(random_pure_state(rng, n)) >= -1e-12
                assert sre_exact(random_mixed_state(rng, n)) >= -1e-12

    def test_invariant_under_local_cliffords(self, rng):
        rho = random_mixed_state(rng, 2)
        cliffords = clifford_matrices()
        for a, b in [(3, 7), (11, 20), (23, 1)]:
            rotated = rho.evolve(tensor(cliffords[a], cliffords[b]))
            assert sre_exact(rotated) == pytest.approx(sre_exact(rho), abs=1e-10)

    def test_additive_on_products(self, t_plus):
        assert sre_exact(t_plus.tensor(t_plus)) == pytest.approx(2 * T_PLUS_M2, abs=1e-10)

    def test_pauli_spectrum_sum(self, zero_state):
        assert pauli_spectrum_sum(zero_state, 2) == pytest.approx(2.0)
        with pytest.raises(DomainError):
            pauli_spectrum_sum(zero_state, 0)


class TestNonlocalMagic:
    @pytest.mark.parametrize("theta", [0.0, 0.3, math.pi / 8, math.pi / 4, 1.2])
    def test_schmidt_matches_theta_form(self, theta):
        lam = math.cos(theta / 2) ** 2
        assert nonlocal_magic_schmidt(lam) == pytest.approx(nonlocal_magic_theta(theta), abs=1e-12)

    @pytest.mark.parametrize("lam", [0.5, 0.6, 0.75, 0.9, 1.0])
    def test_rdm_purity_form(self, lam):
        p_a = lam ** 2 + (1 - lam) ** 2
        assert nonlocal_magic_from_rdm_purity(p_a) == pytest.approx(nonlocal_magic_schmidt(lam), abs=1e-12)

    def test_maximum_at_quarter_pi(self):
        assert nonlocal_magic_theta(math.pi / 4) == pytest.approx(T_PLUS_M2, abs=1e-12)
        assert nonlocal_magic_schmidt(0.5) == pytest.approx(0.0)
        assert nonlocal_magic_schmidt(1.0) == pytest.approx(0.0)

    def test_domains(self):
        with pytest.raises(DomainError):
            nonlocal_magic_schmidt(1.2)
        with pytest.raises(DomainError):
            nonlocal_magic_from_rdm_purity(0.3)

    def test_schmidt_spectrum_of_nlm(self):
        theta = 0.7
        rho, _ = prepare_state(StateId.NLM, {"theta": theta})
        spectrum = schmidt_spectrum(rho)
        assert spectrum.lam == pytest.approx(math.cos(theta / 2) ** 2, abs=1e-12)
        assert spectrum.theta == pytest.approx(theta, abs=1e-9)

    def test_schmidt_spectrum_needs_two_qubits(self, t_plus):
        with pytest.raises(DimensionMismatchError):
            schmidt_spectrum(t_plus)


class TestNoisyInversion:
    def test_pure_limit(self):
        assert rdm_purity_depolarized(0.8, 1.0) == pytest.approx(0.68)
        assert rdm_purity_depolarized(0.8, 0.0) == pytest.approx(0.5)

    @pytest.mark.parametrize("lam,p", [(0.8, 0.9), (0.5, 0.95), (1.0, 0.7), (0.65, 1.0)])
    def test_inverse(self, lam, p):
        p_a = rdm_purity_depolarized(lam, p)
        assert schmidt_weight_from_noisy_rdm_purity(p_a, p) == pytest.approx(lam, abs=1e-9)

    def test_matches_simulated_reduced_purity(self, rng):
        pure = random_pure_state(rng, 2)
        p = 0.9
        noisy = depolarize(pure, p)
        lam = schmidt_spectrum(pure).lam
        assert purity(partial_trace(noisy, {0})) == pytest.approx(rdm_purity_depolarized(lam, p), abs=1e-12)
        assert nonlocal_magic_noisy(purity(partial_trace(noisy, {1})), p) == pytest.approx(
            nonlocal_magic_schmidt(lam), abs=1e-9)

    def test_out_of_model(self):
        ceiling = (1 + 0.9 ** 2) / 2
        with pytest.raises(OutOfModelError):
            schmidt_weight_from_noisy_rdm_purity(ceiling + 0.01, 0.9)
        with pytest.raises(OutOfModelError):
            schmidt_weight_from_noisy_rdm_purity(0.45, 0.9)

    def test_survival_domain(self):
        with pytest.raises(DomainError):
            schmidt_weight_from_noisy_rdm_purity(0.6, 0.0)


class TestDepolarizedClosedForm:
    @pytest.mark.parametrize("theta", [0.0, 0.4, math.pi / 8, math.pi / 4])
    def test_noise_free_limit(self, theta):
        assert sre_nlm_depolarized(0.0, theta) == pytest.approx(nonlocal_magic_theta(theta), abs=1e-12)

    @pytest.mark.parametrize("theta", [0.0, 0.3, math.pi / 4])
    @pytest.mark.parametrize("p", [1.0, 0.95, 0.8])
    def test_matches_simulation(self, theta, p):
        rho, circuit = prepare_state(StateId.NLM, {"theta": theta}, p)
        p_err = 1.0 - p ** circuit.count_cz()
        assert sre_exact(rho) == pytest.approx(sre_nlm_depolarized(p_err, theta), abs=1e-10)

    def test_increasing_on_first_octant(self):
        values = [sre_nlm_depolarized(0.08, t) for t in np.linspace(0.0, math.pi / 4, 10)]
        assert all(b > a for a, b in zip(values, values[1:]))

    def test_domain(self):
        with pytest.raises(DomainError):
            sre_nlm_depolarized(1.5, 0.1)


class TestMagicSplit:
    def test_lm_is_purely_local(self):
        rho, _ = prepare_state(StateId.LM)
        report = magic_report(rho)
        assert report.m2 == pytest.approx(T_PLUS_M2, abs=1e-10)
        assert report.m2_nonlocal == pytest.approx(0.0, abs=1e-10)
        assert report.m2_local == pytest.approx(T_PLUS_M2, abs=1e-10)

    def test_nlm_is_purely_nonlocal(self):
        rho, _ = prepare_state(StateId.NLM, {"theta": math.pi / 4})
        report = magic_report(rho)
        assert report.m2_nonlocal == pytest.approx(T_PLUS_M2, abs=1e-10)
        assert report.m2_local == pytest.approx(0.0, abs=1e-10)

    def test_noisy_split_uses_reduced_purity(self):
        p = 0.95
        rho, _ = prepare_state(StateId.NLM, {"theta": math.pi / 4}, p)
        report = magic_report(rho, p_dep=p)
        assert report.m2_nonlocal == pytest.approx(T_PLUS_M2, abs=1e-9)

    def test_mixed_without_survival_has_no_split(self):
        rho, _ = prepare_state(StateId.LM, p_dep_cz=0.9)
        assert magic_report(rho).m2_nonlocal is None

    def test_single_qubit_report(self, t_plus):
        report = magic_report(t_plus)
        assert report.m2_nonlocal is None
        assert report.purity == pytest.approx(1.0)

    def test_local_magic_consistency(self, bell):
        assert local_magic(bell, 0.0) == pytest.approx(0.0, abs=1e-12)
        with pytest.raises(InconsistencyError):
            local_magic(bell, 0.2)


def _random_two_qubit_clifford(rng: np.random.Generator) -> np.ndarray:
    u = np.eye(4, dtype=complex)
    for k in rng.integers(0, len(TWO_QUBIT_GENERATORS), size=12):
        u = TWO_QUBIT_GENERATORS[k] @ u
    return u


class TestDistillationLemma:
    def test_identity_leaves_ancilla_clean(self):
        rho, _ = prepare_state(StateId.LM)
        assert check_distillation_lemma(rho, I2, np.eye(4)) is True

    def test_swap_moves_local_magic(self):
        product, _ = prepare_state(StateId.PSI3, {"t": 1})
        assert check_distillation_lemma(product, I2, SWAP) is True

    def test_entangling_output_is_not_applicable(self, bell):
        assert check_distillation_lemma(bell, I2, SWAP) is None

    def test_needs_pure_input(self):
        rho, _ = prepare_state(StateId.LM, p_dep_cz=0.9)
        with pytest.raises(DomainError):
            check_distillation_lemma(rho, I2, np.eye(4))

    def test_shape_check(self, bell):
        with pytest.raises(DimensionMismatchError):
            check_distillation_lemma(bell, np.eye(4), np.eye(4))

    @pytest.mark.parametrize("state,params", [(StateId.LM, {}), (StateId.NLM, {"theta": math.pi / 4})])
    def test_random_factorized_cliffords(self, rng, state, params):
        rho, _ = prepare_state(state, params)
        cliffords = clifford_matrices()
        outcomes = []
        for _ in range(300):
            c_a = cliffords[rng.integers(24)]
            outcome = check_distillation_lemma(rho, c_a, _random_two_qubit_clifford(rng))
            assert outcome is not False
            outcomes.append(outcome)
        assert any(o is True for o in outcomes)
