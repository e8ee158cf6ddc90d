"""
Reproduction report records
"""

import json
from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.errors import InconsistencyError


class Provenance(str, Enum):
    """Where a reported number comes from."""

    ESTIMATE = "estimate"
    ORACLE = "oracle"
    THEORY = "theory"
    ANCHOR = "anchor"


class ReportValue(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str
    value: float
    error: Optional[float] = None
    provenance: Provenance


class ReportCheck(BaseModel):
    """Pass/fail comparison |observed − expected| ≤ tolerance."""

    model_config = ConfigDict(frozen=True)

    name: str
    observed: float
    expected: float
    tolerance: float = Field(ge=0.0)
    passed: bool

    @model_validator(mode="after")
    def _check_flag(self) -> "ReportCheck":
        if self.passed != (abs(self.observed - self.expected) <= self.tolerance):
            raise InconsistencyError(f"Check '{self.name}' flag does not match its tolerance")
        return self

    @classmethod
    def compare(cls, name: str, observed: float, expected: float, tolerance: float) -> "ReportCheck":
        return cls(
            name=name,
            observed=observed,
            expected=expected,
            tolerance=tolerance,
            passed=abs(observed - expected) <= tolerance,
        )


class ReportRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    label: str
    values: List[ReportValue] = Field(default_factory=list)
    checks: List[ReportCheck] = Field(default_factory=list)
    notes: List[str] = Field(default_factory=list)

    def value(self, name: str) -> ReportValue:
        for item in self.values:
            if item.name == name:
                return item
        raise KeyError(name)

    def check(self, name: str) -> ReportCheck:
        for item in self.checks:
            if item.name == name:
                return item
        raise KeyError(name)


class Report(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str
    parameters: Dict[str, Any] = Field(default_factory=dict)
    rows: List[ReportRow] = Field(default_factory=list)
    curve_csv: Optional[str] = None

    @property
    def passed(self) -> bool:
        return all(check.passed for row in self.rows for check in row.checks)

    def row(self, label: str) -> ReportRow:
        for item in self.rows:
            if item.label == label:
                return item
        raise KeyError(label)

    def to_json(self) -> str:
        """Sorted-key JSON without timestamps, byte-identical for identical inputs."""
        return json.dumps(self.model_dump(mode="json"), sort_keys=True, indent=2)
