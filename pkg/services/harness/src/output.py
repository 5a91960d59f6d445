"""CSV and JSON writers for result tables."""

import logging
from enum import Enum
from pathlib import Path

from pydantic import TypeAdapter

from services.harness.src.models import ResultRow, ResultsTable

logger = logging.getLogger(__name__)

_ROWS = TypeAdapter(list[ResultRow])


class OutputFormat(str, Enum):
    """Supported result formats."""

    CSV = "csv"
    JSON = "json"


def emit_results(table: ResultsTable, fmt: OutputFormat | str, path: str | Path) -> Path:
    """Write the result rows to ``path``.

    CSV columns are variety, k, trials, successful, unfinished, spurious,
    mean_time_s and median_time_s; missing times are empty cells. JSON is a
    list of objects with the same fields and null for missing times.

    Raises:
        OSError: If the file cannot be written
    """
    fmt = OutputFormat(fmt)
    path = Path(path)
    if fmt == OutputFormat.CSV:
        table.to_frame().to_csv(path, index=False)
    else:
        path.write_bytes(_ROWS.dump_json(table.rows, indent=2))
    logger.info(f"Wrote {len(table.rows)} result rows to {path} ({fmt.value})")
    return path
