#!/usr/bin/env python3
"""
magic-rcm
Simulator and estimator for local and non-local magic of noisy few-qubit states

Entry point: `python main.py <subcommand>`; `serve` starts the MCP server.
All logic is organized in the src/ directory.
"""

import logging
import sys
from typing import Optional, Sequence

from fastmcp import FastMCP
from starlette.requests import Request
from starlette.responses import PlainTextResponse

from src.cli import Services, build_parser, build_services, dispatch
from src.config import EXIT_OK
from src.tools.loading_tools import register_loading_tools
from src.tools.query_tools import register_query_tools
from src.tools.report_tools import register_report_tools


class HealthCheckFilter(logging.Filter):
    """Drops uvicorn access-log records for the /health endpoint."""

    def filter(self, record: logging.LogRecord) -> bool:
        if hasattr(record, 'args') and isinstance(record.args, tuple) and len(record.args) >= 3:
            return record.args[2] != '/health'
        return True


def create_app(services: Optional[Services] = None) -> FastMCP:
    """
    Create and configure the FastMCP application.

    Args:
        services: Shared services (a fresh set is built when omitted)

    Returns:
        Configured FastMCP instance
    """
    mcp = FastMCP("Magic RCM")
    services = services or build_services()

    register_loading_tools(mcp, services.rcm)
    register_query_tools(mcp, services.magic, services.erasure, services.mitigation, services.benchmark)
    register_report_tools(mcp, services.report)

    @mcp.custom_route("/health", methods=["GET"])
    async def health_check(request: Request) -> PlainTextResponse:
        return PlainTextResponse("OK")

    return mcp


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=args.log_level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")

    if args.command == "serve":
        logging.getLogger("uvicorn.access").addFilter(HealthCheckFilter())
        mcp = create_app()
        mcp.run(transport="streamable-http", host=args.host, port=args.port)
        return EXIT_OK

    return dispatch(args)


if __name__ == "__main__":
    sys.exit(main())
