"""JSONL instance files: one object per line, arrival order = line order.

Each line is `{"size": <number>}` with an optional integer `"class"` used by
the class-constrained subcommands.
"""

from __future__ import annotations

import json
from typing import Optional


def load_jobs(path: str) -> list[tuple[float, Optional[int]]]:
    entries: list[tuple[float, Optional[int]]] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValueError(f"{path}: line {lineno}: invalid JSON ({exc.msg})") from exc
            if not isinstance(obj, dict) or "size" not in obj:
                raise ValueError(f"{path}: line {lineno}: expected an object with a 'size' field")
            size = obj["size"]
            if isinstance(size, bool) or not isinstance(size, (int, float)):
                raise ValueError(f"{path}: line {lineno}: 'size' must be a number")
            cls = obj.get("class")
            if cls is not None and (isinstance(cls, bool) or not isinstance(cls, int)):
                raise ValueError(f"{path}: line {lineno}: 'class' must be an integer")
            entries.append((float(size), cls))
    return entries


def dump_jobs(path: str, jobs) -> None:
    """jobs: iterable of sizes or of (size, class) pairs."""
    with open(path, "w", encoding="utf-8") as fh:
        for job in jobs:
            if isinstance(job, tuple):
                size, cls = job
                obj = {"size": size} if cls is None else {"size": size, "class": cls}
            else:
                obj = {"size": job}
            fh.write(json.dumps(obj) + "\n")
