"""Deterministic CSV/JSON writers shared by the library and the CLI.

Floats are printed with 17 significant digits ('%.17g'), which round-trips
exactly in IEEE double; JSON keys are sorted so identical inputs give
byte-identical artifacts.
"""

from __future__ import annotations

import json
import os
from typing import Iterable, Sequence


def fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


def write_csv(path: str, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(fmt(x) for x in row) + "\n")


def write_json(path: str, obj) -> None:
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_csv(path: str):
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        rows = [line.strip().split(",") for line in fh if line.strip()]
    return header, rows


def read_json(path: str):
    with open(path) as fh:
        return json.load(fh)
