"""
MCP tools for exact magic, erasure, mitigation and benchmarking queries
"""

from typing import Any, Dict, List, Optional

from src.services.benchmark_service import BenchmarkService
from src.services.erasure_service import ErasureService
from src.services.magic_service import MagicService
from src.services.mitigation_service import MitigationService


def register_query_tools(
    mcp,
    magic_service: MagicService,
    erasure_service: ErasureService,
    mitigation_service: MitigationService,
    benchmark_service: BenchmarkService,
):
    """
    Register computation MCP tools.

    Args:
        mcp: FastMCP instance
        magic_service: MagicService instance
        erasure_service: ErasureService instance
        mitigation_service: MitigationService instance
        benchmark_service: BenchmarkService instance
    """

    @mcp.tool()
    def magic_exact(state: str, params_deg: Optional[Dict[str, float]] = None, p_dep_cz: float = 1.0) -> Dict[str, Any]:
        """
        Exact purity, stabilizer purity and stabilizer Rényi entropy of a prepared state

        Args:
            state: Psi0..Psi4, LM, LM_erased, M, M_erased, NLM or Fig4
            params_deg: State parameters in degrees, e.g. {"theta": 45}
            p_dep_cz: Depolarizing survival probability after each CZ

        Returns:
            Magic summary with local / non-local split for two-qubit states
        """
        return magic_service.magic_exact(state, params_deg, p_dep_cz)

    @mcp.tool()
    def erase_sweep(state: str, params_deg: Optional[Dict[str, float]] = None, p_dep_cz: float = 1.0,
                    step_deg: float = 7.5) -> Dict[str, Any]:
        """
        Sweep Rz(γ) ⊗ Rz(φ) and report the residual magic landscape

        Returns:
            Landscape minimum, its angles and the landscape as CSV
        """
        return erasure_service.sweep(state, params_deg, p_dep_cz, step_deg)

    @mcp.tool()
    def erase_optimize(state: str, params_deg: Optional[Dict[str, float]] = None, p_dep_cz: float = 1.0,
                       seed: int = 0) -> Dict[str, Any]:
        """
        Find the local unitaries that erase the most magic

        Returns:
            Residual magic and Euler angles in degrees
        """
        return erasure_service.optimize(state, params_deg, p_dep_cz, seed)

    @mcp.tool()
    def calibrate_readout(counts: List[List[int]], n_shot: int) -> Dict[str, Any]:
        """
        Build the readout calibration matrix from initialization counts

        Args:
            counts: Row i = outcome counts after preparing basis state i
            n_shot: Shots per prepared state

        Returns:
            Calibration matrix and readout fidelity
        """
        return mitigation_service.calibrate(counts, n_shot)

    @mcp.tool()
    def mitigate(probs: List[float], lambda_rows: Optional[List[List[float]]] = None,
                 counts: Optional[List[List[int]]] = None, n_shot: Optional[int] = None) -> Dict[str, Any]:
        """
        Least-squares readout mitigation of a measured distribution

        Returns:
            Mitigated probabilities on the simplex
        """
        return mitigation_service.mitigate(probs, lambda_rows, counts, n_shot)

    @mcp.tool()
    def fit_rb(n_cliffords: List[int], survival: List[float], d: int = 2,
               interleaved_survival: Optional[List[float]] = None) -> Dict[str, Any]:
        """
        Fit randomized-benchmarking decays and derive gate fidelities

        Returns:
            Decay parameters, Clifford / average fidelity and the interleaved gate fidelity
        """
        return benchmark_service.fit_rb(n_cliffords, survival, d, interleaved_survival)

    @mcp.tool()
    def mw_crosstalk(a_jj: float, t_jj: float, a_ij: float, t_ij: float) -> Dict[str, Any]:
        """
        Microwave crosstalk coefficient from drive amplitudes and Rabi durations

        Returns:
            Coefficient as a fraction and in percent
        """
        return benchmark_service.crosstalk(a_jj, t_jj, a_ij, t_ij)
