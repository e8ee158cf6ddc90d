"""
Gate set, circuit execution, single-qubit Clifford group and the named preparation circuits
"""

import logging
import math
from collections import deque
from functools import lru_cache
from typing import Dict, Iterator, List, Mapping, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, field_serializer

from src.errors import DomainError, ScenarioError, UnsupportedGateError
from src.models.circuit import Circuit, GateKind, GateSpec, StateId
from src.models.noise_config import NoiseConfig
from src.models.states import PAULI_MATRICES, DensityMatrix
from src.quantum.noise import depolarize_matrix
from src.quantum.qcore import embed_operator

logger = logging.getLogger(__name__)

_I2 = PAULI_MATRICES["I"]
_X = PAULI_MATRICES["X"]
_Y = PAULI_MATRICES["Y"]
_Z = PAULI_MATRICES["Z"]
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
PHASE_S = np.array([[1, 0], [0, 1j]], dtype=complex)
CZ_MATRIX = np.diag([1, 1, 1, -1]).astype(complex)

PHASE_KEY_DECIMALS = 9


def _rotation(generator: np.ndarray, theta: float) -> np.ndarray:
    """exp(-iθσ/2) for a Pauli-like generator σ with σ² = I."""
    return math.cos(theta / 2) * _I2 - 1j * math.sin(theta / 2) * generator


def rz(theta: float) -> np.ndarray:
    return _rotation(_Z, theta)


def ry(theta: float) -> np.ndarray:
    return _rotation(_Y, theta)


def rx(theta: float) -> np.ndarray:
    return _rotation(_X, theta)


def gate_matrix(g: GateSpec) -> np.ndarray:
    """
    Unitary of a gate on its own qubits, in the order listed in g.qubits.

    T is Rz(π/4); CNOT is (I ⊗ H)·CZ·(I ⊗ H) with qubits (control, target).
    """
    kind = g.kind
    if kind == GateKind.RX:
        return rx(g.angles[0])
    if kind == GateKind.RY:
        return ry(g.angles[0])
    if kind == GateKind.RZ:
        return rz(g.angles[0])
    if kind == GateKind.RXY:
        theta, phi = g.angles
        return _rotation(math.cos(phi) * _X + math.sin(phi) * _Y, theta)
    if kind == GateKind.H:
        return HADAMARD.copy()
    if kind == GateKind.S:
        return PHASE_S.copy()
    if kind == GateKind.T:
        return rz(math.pi / 4)
    if kind == GateKind.X:
        return _X.copy()
    if kind == GateKind.Y:
        return _Y.copy()
    if kind == GateKind.Z:
        return _Z.copy()
    if kind == GateKind.CZ:
        return CZ_MATRIX.copy()
    if kind == GateKind.CNOT:
        ih = np.kron(_I2, HADAMARD)
        return ih @ CZ_MATRIX @ ih
    raise UnsupportedGateError(f"Unsupported gate kind: {kind}")


def expand_gates(circuit: Circuit) -> Iterator[GateSpec]:
    """Primitive gate stream: every CNOT becomes H(target), CZ, H(target)."""
    for gate in circuit.gates:
        if gate.kind == GateKind.CNOT:
            control, target = gate.qubits
            yield GateSpec(kind=GateKind.H, qubits=(target,))
            yield GateSpec(kind=GateKind.CZ, qubits=(control, target))
            yield GateSpec(kind=GateKind.H, qubits=(target,))
        else:
            yield gate


def circuit_unitary(circuit: Circuit) -> np.ndarray:
    """Noise-free unitary of the whole circuit."""
    d = 2 ** circuit.num_qubits
    unitary = np.eye(d, dtype=complex)
    for gate in expand_gates(circuit):
        unitary = embed_operator(gate_matrix(gate), gate.qubits, circuit.num_qubits) @ unitary
    return unitary


def run_circuit(c: Circuit, noise: Optional[NoiseConfig] = None) -> DensityMatrix:
    """
    Evolve |0...0⟩ through the circuit.

    Every CZ, including the one inside each CNOT, is followed by the global
    depolarizing channel with survival probability noise.p_dep_cz.
    """
    noise = noise or NoiseConfig.noiseless()
    d = 2 ** c.num_qubits
    rho = np.zeros((d, d), dtype=complex)
    rho[0, 0] = 1.0
    for gate in expand_gates(c):
        u = embed_operator(gate_matrix(gate), gate.qubits, c.num_qubits)
        rho = u @ rho @ u.conj().T
        if gate.kind == GateKind.CZ and noise.p_dep_cz < 1.0:
            rho = depolarize_matrix(rho, noise.p_dep_cz)
    return DensityMatrix.from_array(rho)


def canonicalize_phase(u: np.ndarray) -> np.ndarray:
    """Fix the global phase so the first nonzero entry (row-major) is real positive."""
    flat = u.reshape(-1)
    pivot = flat[np.argmax(np.abs(flat) > 1e-9)]
    return u * (abs(pivot) / pivot)


def _phase_key(u: np.ndarray) -> Tuple[float, ...]:
    canon = canonicalize_phase(u).reshape(-1)
    # +0.0 folds negative zeros produced by rounding
    return tuple(np.round(np.concatenate([canon.real, canon.imag]), PHASE_KEY_DECIMALS) + 0.0)


class CliffordElement(BaseModel):
    """Single-qubit Clifford unitary with its phase fixed canonically."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    matrix: np.ndarray
    canonical_id: int

    @field_serializer("matrix")
    def _serialize_matrix(self, matrix: np.ndarray) -> List[List[List[float]]]:
        return [[[float(z.real), float(z.imag)] for z in row] for row in matrix]


@lru_cache(maxsize=1)
def single_qubit_clifford_group() -> Tuple[CliffordElement, ...]:
    """
    The 24 single-qubit Cliffords modulo phase, by breadth-first closure over {H, S}.

    Id 0 is the identity; ids follow discovery order.
    """
    identity = canonicalize_phase(_I2.copy())
    seen: Dict[Tuple[float, ...], int] = {_phase_key(identity): 0}
    elements: List[np.ndarray] = [identity]
    queue = deque([identity])
    while queue:
        current = queue.popleft()
        for generator in (HADAMARD, PHASE_S):
            candidate = canonicalize_phase(generator @ current)
            key = _phase_key(candidate)
            if key not in seen:
                seen[key] = len(elements)
                elements.append(candidate)
                queue.append(candidate)
    logger.debug("Generated %d single-qubit Cliffords", len(elements))
    group = []
    for idx, matrix in enumerate(elements):
        matrix.setflags(write=False)
        group.append(CliffordElement(matrix=matrix, canonical_id=idx))
    return tuple(group)


@lru_cache(maxsize=1)
def _clifford_lookup() -> Dict[Tuple[float, ...], int]:
    return {_phase_key(el.matrix): el.canonical_id for el in single_qubit_clifford_group()}


def clifford_index(u: np.ndarray) -> Optional[int]:
    """Canonical id of a 2×2 unitary modulo phase, or None if it is not a Clifford."""
    return _clifford_lookup().get(_phase_key(np.asarray(u, dtype=complex)))


@lru_cache(maxsize=1)
def clifford_matrices() -> np.ndarray:
    """(24, 2, 2) array indexed by canonical id."""
    stack = np.array([el.matrix for el in single_qubit_clifford_group()])
    stack.setflags(write=False)
    return stack


def clifford_cardinality(n: int) -> int:
    """|C_N / U(1)| = 2^(N²+2N) · Π_{k=1..N} (4^k − 1)."""
    if n <= 0:
        raise DomainError(f"Clifford group order needs n >= 1, got {n}")
    order = 2 ** (n * n + 2 * n)
    for k in range(1, n + 1):
        order *= 4 ** k - 1
    return order


# Angle that rotates the π/8 phase of the M state's first qubit onto the Y axis.
DEFAULT_M_ERASE_ANGLE = math.radians(67.5)


def _g(kind: GateKind, *qubits: int, angles: Tuple[float, ...] = ()) -> GateSpec:
    return GateSpec(kind=kind, qubits=qubits, angles=angles)


def _with_t(circuit: Circuit, params: Mapping[str, float], qubits: Tuple[int, ...]) -> Circuit:
    if params.get("t", 0.0):
        return circuit.then(*(_g(GateKind.T, q) for q in qubits))
    return circuit


def paper_state(state_id: StateId, params: Optional[Mapping[str, float]] = None) -> Circuit:
    """
    Named preparation circuits.

    params (radians unless noted):
      NLM: theta; Fig4: gamma, phi; M_erased: erase (default 67.5°);
      Psi0..Psi4: t = 1 appends T gates.
    """
    params = dict(params or {})
    try:
        state_id = StateId(state_id)
    except ValueError as exc:
        raise ScenarioError(f"Unknown state id: {state_id}") from exc

    if state_id == StateId.PSI0:
        return _with_t(Circuit(num_qubits=1), params, (0,))
    if state_id == StateId.PSI1:
        return _with_t(Circuit(num_qubits=1, gates=[_g(GateKind.H, 0)]), params, (0,))
    if state_id == StateId.PSI2:
        base = Circuit(num_qubits=1, gates=[_g(GateKind.X, 0), _g(GateKind.H, 0)])
        return _with_t(base, params, (0,))
    if state_id == StateId.PSI3:
        base = Circuit(num_qubits=2, gates=[_g(GateKind.H, 0), _g(GateKind.H, 1)])
        return _with_t(base, params, (0, 1))
    if state_id == StateId.PSI4:
        base = Circuit(num_qubits=2, gates=[_g(GateKind.H, 0), _g(GateKind.CNOT, 0, 1)])
        return _with_t(base, params, (0,))

    if state_id in (StateId.LM, StateId.LM_ERASED):
        lm = Circuit(
            num_qubits=2,
            gates=[_g(GateKind.H, 0), _g(GateKind.CNOT, 0, 1), _g(GateKind.T, 0)],
        )
        return lm.then(_g(GateKind.T, 0)) if state_id == StateId.LM_ERASED else lm

    if state_id in (StateId.M, StateId.M_ERASED, StateId.FIG4):
        # CZ on |+⟩|0⟩ acts trivially but carries the depolarizing channel
        m = Circuit(
            num_qubits=2,
            gates=[
                _g(GateKind.H, 0),
                _g(GateKind.CZ, 0, 1),
                _g(GateKind.RZ, 0, angles=(math.pi / 8,)),
                _g(GateKind.RX, 1, angles=(math.pi / 8,)),
            ],
        )
        if state_id == StateId.M_ERASED:
            return m.then(_g(GateKind.RZ, 0, angles=(params.get("erase", DEFAULT_M_ERASE_ANGLE),)))
        if state_id == StateId.FIG4:
            return m.then(
                _g(GateKind.RZ, 0, angles=(params.get("gamma", 0.0),)),
                _g(GateKind.RZ, 1, angles=(params.get("phi", 0.0),)),
            )
        return m

    if state_id == StateId.NLM:
        theta = params.get("theta", math.pi / 4)
        return Circuit(
            num_qubits=2,
            gates=[_g(GateKind.RX, 0, angles=(theta,)), _g(GateKind.CNOT, 0, 1)],
        )

    raise ScenarioError(f"Unknown state id: {state_id}")


def m_state_amplitudes() -> np.ndarray:
    """Reference amplitudes 2^{-3/2}(c₊(|00⟩+e^{iπ/8}|10⟩) − i·c₋(|01⟩+e^{iπ/8}|11⟩))."""
    root = math.sqrt(2 + math.sqrt(2))
    c_plus, c_minus = math.sqrt(2 + root), math.sqrt(2 - root)
    phase = np.exp(1j * math.pi / 8)
    # basis order |00⟩, |01⟩, |10⟩, |11⟩ with qubit 0 leftmost
    return 2 ** -1.5 * np.array([c_plus, -1j * c_minus, c_plus * phase, -1j * c_minus * phase])


def prepare_state(
    state_id: StateId,
    params: Optional[Mapping[str, float]] = None,
    p_dep_cz: float = 1.0,
) -> Tuple[DensityMatrix, Circuit]:
    """Run a named preparation circuit under CZ depolarizing noise; returns (ρ, circuit)."""
    circuit = paper_state(state_id, params)
    return run_circuit(circuit, NoiseConfig(p_dep_cz=p_dep_cz)), circuit
