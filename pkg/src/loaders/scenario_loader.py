"""
Scenario and measurement-data loader (local paths or http(s) URLs, JSON or YAML)
"""

import json
from pathlib import Path
from typing import Any, Dict, Optional

import httpx
import yaml

from src.config import (
    ERROR_INVALID_SCENARIO,
    ERROR_UNSUPPORTED_SCHEMA,
    HTTP_TIMEOUT,
    SCENARIO_SCHEMA_VERSION,
)


class ScenarioLoader:
    """
    Loads scenario, calibration and benchmarking documents.
    Supports both JSON and YAML formats with auto-detection.
    """

    @staticmethod
    def is_url(source: str) -> bool:
        return source.startswith(("http://", "https://"))

    @staticmethod
    async def load_from_url(url: str) -> Dict[str, Any]:
        """
        Load a document from a URL.

        Args:
            url: URL of the scenario document

        Returns:
            Parsed document as dictionary

        Raises:
            httpx.HTTPError: If HTTP request fails
            json.JSONDecodeError: If JSON parsing fails
            yaml.YAMLError: If YAML parsing fails
        """
        async with httpx.AsyncClient(timeout=HTTP_TIMEOUT) as client:
            response = await client.get(url)
            response.raise_for_status()
            content_type = response.headers.get("content-type", "").lower()
            return ScenarioLoader.parse_text(response.text, url, content_type)

    @staticmethod
    def load_from_path(path: str) -> Dict[str, Any]:
        """
        Load a document from the local filesystem.

        Raises:
            OSError: If the file cannot be read
            json.JSONDecodeError: If JSON parsing fails
            yaml.YAMLError: If YAML parsing fails
        """
        return ScenarioLoader.parse_text(Path(path).read_text(encoding="utf-8"), path)

    @staticmethod
    async def load(source: str) -> Dict[str, Any]:
        if ScenarioLoader.is_url(source):
            return await ScenarioLoader.load_from_url(source)
        return ScenarioLoader.load_from_path(source)

    @staticmethod
    def read_text(source: str) -> str:
        """Raw text of a local file or URL (used for CSV inputs)."""
        if ScenarioLoader.is_url(source):
            response = httpx.get(source, timeout=HTTP_TIMEOUT)
            response.raise_for_status()
            return response.text
        return Path(source).read_text(encoding="utf-8")

    @staticmethod
    def parse_text(text: str, source: str = "", content_type: Optional[str] = None) -> Dict[str, Any]:
        """
        Parse document text as JSON or YAML.

        The format follows the content type or file extension; otherwise JSON is
        tried first, then YAML.
        """
        content_type = content_type or ""
        if "json" in content_type or source.endswith(".json"):
            return json.loads(text)
        if "yaml" in content_type or source.endswith((".yaml", ".yml")):
            return yaml.safe_load(text)
        try:
            return json.loads(text)
        except json.JSONDecodeError:
            return yaml.safe_load(text)

    @staticmethod
    def validate_document(doc: Any) -> tuple[bool, str]:
        """
        Check the envelope of a scenario document before model validation.

        Returns:
            Tuple of (is_valid, error_message)
        """
        if not isinstance(doc, dict):
            return False, ERROR_INVALID_SCENARIO.format(detail="document must be a mapping")
        version = doc.get("schema_version", SCENARIO_SCHEMA_VERSION)
        if version != SCENARIO_SCHEMA_VERSION:
            return False, ERROR_UNSUPPORTED_SCHEMA.format(version=version, expected=SCENARIO_SCHEMA_VERSION)
        if "name" not in doc:
            return False, ERROR_INVALID_SCENARIO.format(detail="missing 'name'")
        if "estimators" not in doc:
            return False, ERROR_INVALID_SCENARIO.format(detail="missing 'estimators'")
        return True, ""
