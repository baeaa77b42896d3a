"""Rendering of command results as text, JSON or CSV."""

import io
import json
import logging
import sys
from dataclasses import dataclass
from typing import Any, Dict, List, Optional

import pandas as pd

from core.errors import UsageError

# Setup logging
logger = logging.getLogger("formatting")


@dataclass
class Artifact:
    """A command result: JSON-ready data, a text rendering and an optional table."""

    data: Any
    text: str
    rows: Optional[List[Dict[str, Any]]] = None


class Formatter:
    """Render artifacts in one of the supported output formats."""

    @staticmethod
    def render(artifact: Artifact, fmt: str) -> str:
        """Render an artifact.

        Args:
            artifact: the command result
            fmt: "json", "csv" or "text"

        Returns:
            The rendered text, newline-terminated
        """
        if fmt == "json":
            return Formatter._render_json(artifact.data)
        elif fmt == "csv":
            return Formatter._render_csv(artifact)
        elif fmt == "text":
            return artifact.text if artifact.text.endswith("\n") else artifact.text + "\n"
        raise UsageError(f"Unsupported output format: {fmt}")

    @staticmethod
    def _render_json(data: Any) -> str:
        return json.dumps(data, indent=2, ensure_ascii=False) + "\n"

    @staticmethod
    def _render_csv(artifact: Artifact) -> str:
        """Tabular results go through a DataFrame so column order follows the first row."""
        if artifact.rows is None:
            raise UsageError("This result has no tabular form; use --format json or text")
        # nullable dtypes keep integer columns with gaps (c_0) from turning into floats
        df = pd.DataFrame(artifact.rows).convert_dtypes()
        buffer = io.StringIO()
        df.to_csv(buffer, index=False, lineterminator="\n")
        return buffer.getvalue()

    @staticmethod
    def write(content: str, out: Optional[str] = None) -> None:
        """Write to a file when a path is given, otherwise to stdout."""
        if out:
            with open(out, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(content)
            logger.info(f"Wrote {len(content)} characters to {out}")
        else:
            sys.stdout.write(content)
