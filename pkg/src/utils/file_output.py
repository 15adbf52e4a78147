"""
Result serialisation
Atomic file writes plus the CSV and JSON layouts used by every command
"""

import json
import logging
import sys
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence, TextIO

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"


class AtomicFileOperation:
    """
    Write through a temporary sibling file and rename it into place, so a
    reader never sees a half-written result
    """

    def __init__(self):
        self.logger = logging.getLogger(__name__)

    def atomic_write(self, file_path: str, data: bytes) -> bool:
        path_obj = Path(file_path)
        path_obj.parent.mkdir(parents=True, exist_ok=True)
        temp_file = path_obj.with_suffix(path_obj.suffix + '.tmp')

        try:
            with open(temp_file, 'wb') as f:
                f.write(data)

            temp_file.replace(path_obj)
            self.logger.debug(f"Wrote {len(data)} bytes to {file_path}")
            return True

        except Exception:
            if temp_file.exists():
                temp_file.unlink()
            raise


def format_number(value: Any) -> str:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        return str(value)
    if isinstance(value, int):
        return str(value)
    return FLOAT_FORMAT % value


def render_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(format_number(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def render_json(payload: Any) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def emit(text: str, output: Optional[str] = None, stream: TextIO = None):
    """Write to a file atomically, or to stdout when no path is given"""
    if output is None:
        (stream or sys.stdout).write(text)
        return
    AtomicFileOperation().atomic_write(output, text.encode("utf-8"))
    logger.info(f"Results written to {output}")


def write_csv(header: Sequence[str], rows: Iterable[Sequence[Any]], output: Optional[str] = None,
              stream: TextIO = None):
    emit(render_csv(header, rows), output, stream)


def write_json(payload: Any, output: Optional[str] = None, stream: TextIO = None):
    emit(render_json(payload), output, stream)
