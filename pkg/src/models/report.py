from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import pandas as pd


@dataclass
class Report:
    """Outcome of one command: a verdict line, key/value details and an optional table."""
    title: str
    verdict: str
    details: Dict[str, Any] = field(default_factory=dict)
    table: Optional[pd.DataFrame] = None
    lines: List[str] = field(default_factory=list)

    def add(self, key: str, value: Any) -> "Report":
        self.details[key] = value
        return self

    def add_rows(self, rows: List[Dict[str, Any]]) -> "Report":
        frame = pd.DataFrame(rows)
        self.table = frame if self.table is None else pd.concat([self.table, frame], ignore_index=True)
        return self
