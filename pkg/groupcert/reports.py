"""
Check reports: rows of named checks with a status, JSON output and a text table.
"""
import json
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd

logger = logging.getLogger(__name__)

PASS = 'pass'
FAIL = 'fail'
SKIPPED = 'skipped'
NOT_APPLICABLE = 'not-applicable'
STATUSES = (PASS, FAIL, SKIPPED, NOT_APPLICABLE)


def serialize_value(value: Any) -> Any:
    """Convert domain values (vectors, permutations, fractions, infinities, arrays) to JSON-safe values."""
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, float):
        if math.isinf(value):
            return 'infinite'
        return value
    if isinstance(value, Fraction):
        return str(value) if value.denominator != 1 else value.numerator
    if isinstance(value, np.ndarray):
        return serialize_value(value.tolist())
    if isinstance(value, dict):
        return {str(k): serialize_value(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [serialize_value(item) for item in value]
    if isinstance(value, (set, frozenset)):
        return sorted((serialize_value(item) for item in value), key=str)
    return str(value)


@dataclass
class Check:
    name: str
    status: str
    details: Dict[str, Any] = field(default_factory=dict)
    witness: Any = None
    elapsed_ms: float = 0.0

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown check status: {self.status}")
        self.details = serialize_value(self.details)
        self.witness = serialize_value(self.witness)


@dataclass
class Report:
    command: str
    params: Dict[str, Any] = field(default_factory=dict)
    checks: List[Check] = field(default_factory=list)
    exit_code: int = 0

    def add(self, check: Check):
        self.checks.append(check)

    def count(self, status: str) -> int:
        return sum(1 for c in self.checks if c.status == status)

    @property
    def summary(self) -> Dict[str, int]:
        return {
            'passed': self.count(PASS),
            'failed': self.count(FAIL),
            'skipped': self.count(SKIPPED),
            'not_applicable': self.count(NOT_APPLICABLE),
        }

    @property
    def failed(self) -> bool:
        return self.count(FAIL) > 0

    def check(self, name: str) -> Optional[Check]:
        return next((c for c in self.checks if c.name == name), None)

    def table(self) -> str:
        frame = pd.DataFrame(
            [{'check': c.name, 'status': c.status, 'ms': round(c.elapsed_ms, 1),
              'details': json.dumps(c.details, sort_keys=True)} for c in self.checks],
            columns=['check', 'status', 'ms', 'details'],
        )
        if frame.empty:
            return f"{self.command}: no checks"
        frame['details'] = frame['details'].str.slice(0, 80)
        totals = ', '.join(f"{k}={v}" for k, v in self.summary.items())
        return f"{frame.to_string(index=False)}\n\n{self.command}: {totals}"


def dump_report(data: Dict[str, Any]) -> str:
    return json.dumps(data, sort_keys=True, indent=2)


def write_report(data: Dict[str, Any], path: str):
    Path(path).write_text(dump_report(data) + '\n', encoding='utf-8')
    logger.info(f"Report written to {path}")
