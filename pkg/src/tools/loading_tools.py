"""
MCP tools for loading and running scenarios
"""

from typing import Any, Dict

from src.services.rcm_service import RcmService


def register_loading_tools(mcp, rcm_service: RcmService):
    """
    Register scenario-related MCP tools.

    Args:
        mcp: FastMCP instance
        rcm_service: RcmService instance
    """

    @mcp.tool()
    async def run_scenario(source: str) -> Dict[str, Any]:
        """
        Load a scenario file (path or URL, JSON or YAML) and run the RCM pipeline

        Args:
            source: Local path or http(s) URL of the scenario document

        Returns:
            Report with estimates, oracle values and pass/fail checks
        """
        return await rcm_service.run_scenario_source(source)

    @mcp.tool()
    def list_datasets() -> Dict[str, Any]:
        """
        List datasets collected in this session

        Returns:
            Dataset names with size and mitigation status
        """
        return rcm_service.list_datasets()

    @mcp.tool()
    def export_dataset(name: str) -> Dict[str, Any]:
        """
        Export a collected dataset for offline re-analysis

        Args:
            name: Dataset name (the scenario name)

        Returns:
            Clifford ids, probability vectors and metadata
        """
        return rcm_service.export_dataset(name)
