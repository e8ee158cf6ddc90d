"""
MCP tools for reproduction reports
"""

from typing import Any, Dict, List, Optional

from src.services.report_service import ReportService


def register_report_tools(mcp, report_service: ReportService):
    """
    Register report MCP tools.

    Args:
        mcp: FastMCP instance
        report_service: ReportService instance
    """

    @mcp.tool()
    def report_table1(p_dep: Optional[float] = None, seed: int = 0, exhaustive: bool = False) -> Dict[str, Any]:
        """
        Purity and magic of LM, LM_erased, M and M_erased with RCM estimates

        Args:
            p_dep: Per-CZ survival probability (default: calibrated to purity 0.94)
            seed: Sampling seed
            exhaustive: Use all 576 local Clifford pairs with exact probabilities

        Returns:
            Report with estimates, oracle values, anchors and checks
        """
        options = {"exhaustive": True, "n_shot": None} if exhaustive else {}
        return report_service.report_table1(p_dep, seed, **options)

    @mcp.tool()
    def report_fig3(theta_grid_deg: Optional[List[float]] = None, p_dep: Optional[float] = None,
                    seed: int = 0) -> Dict[str, Any]:
        """
        Stabilizer entropy of the NLM(θ) family against the depolarized closed form

        Returns:
            Report with one row per θ
        """
        return report_service.report_fig3(theta_grid_deg, p_dep, seed)

    @mcp.tool()
    def report_fig4(seed: int = 0) -> Dict[str, Any]:
        """
        Rz ⊗ Rz erasure landscape of the M state at the frozen noise level

        Returns:
            Report with the landscape minimum and the noise-free optimizer check
        """
        return report_service.report_fig4(seed=seed)

    @mcp.tool()
    def get_report(name: str, fmt: str = "json") -> Dict[str, Any]:
        """
        Fetch a report built in this session

        Args:
            name: table1, fig3, fig4 or a scenario name
            fmt: json, or csv for the curve / landscape

        Returns:
            Stored report
        """
        return report_service.get_report(name, fmt)

    @mcp.tool()
    def list_reports() -> Dict[str, Any]:
        """
        List reports built in this session

        Returns:
            Report names with pass flags
        """
        return report_service.list_reports()
