import json
import logging
from typing import Any, TextIO

from src.models.report import Report

logger = logging.getLogger(__name__)


def _plain(value: Any) -> Any:
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    return str(value)


class ReportView:
    """Renders reports on a text stream, as aligned text or as JSON."""

    def __init__(self, stream: TextIO, as_json: bool = False):
        self.stream = stream
        self.as_json = as_json

    def render(self, report: Report):
        text = self.to_json(report) if self.as_json else self.to_text(report)
        self.stream.write(text)
        if not text.endswith("\n"):
            self.stream.write("\n")

    @staticmethod
    def to_text(report: Report) -> str:
        out = [report.title, f"verdict: {report.verdict}"]
        width = max((len(k) for k in report.details), default=0)
        for key, value in report.details.items():
            out.append(f"{key.ljust(width)} : {value}")
        out.extend(report.lines)
        if report.table is not None and not report.table.empty:
            out.append(report.table.to_string(index=False))
        return "\n".join(out)

    @staticmethod
    def to_json(report: Report) -> str:
        payload = {
            "title": report.title,
            "verdict": report.verdict,
            "details": _plain(report.details),
            "lines": list(report.lines),
            "table": [] if report.table is None else _plain(report.table.astype(str).to_dict(orient="records")),
        }
        return json.dumps(payload, ensure_ascii=False, indent=2)
