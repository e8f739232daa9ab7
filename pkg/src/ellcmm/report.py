"""Verification reports: one record per checked cell, serializable to JSON."""

from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field
from typing import Any


@dataclass
class Cell:
    i: int | None
    j: int | None
    beta: int | None
    order: int | None
    status: str  # "pass" | "fail"
    witness: str | None = None
    millis: int = 0
    label: str | None = None

    @property
    def passed(self) -> bool:
        return self.status == "pass"


@dataclass
class VerificationReport:
    identity: str
    tower: str
    backend: str = "symbolic"
    points: list[dict[str, str]] = field(default_factory=list)
    cells: list[Cell] = field(default_factory=list)
    notes: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(self.cells) and all(c.passed for c in self.cells)

    def failures(self) -> list[Cell]:
        return [c for c in self.cells if not c.passed]

    def add(self, ok: bool, witness: str | None = None, *, i=None, j=None, beta=None, order=None,
            millis: int = 0, label: str | None = None) -> Cell:
        cell = Cell(i, j, beta, order, "pass" if ok else "fail", None if ok else witness, millis, label)
        self.cells.append(cell)
        return cell

    @contextmanager
    def timed(self):
        """Yields a dict; store ``ok``/``witness`` in it and a cell is appended on exit."""
        box: dict[str, Any] = {}
        start = time.perf_counter()
        yield box
        millis = int((time.perf_counter() - start) * 1000)
        self.add(bool(box.get("ok")), box.get("witness"), millis=millis,
                 **{k: box.get(k) for k in ("i", "j", "beta", "order", "label")})

    def merge(self, other: VerificationReport) -> VerificationReport:
        self.cells.extend(other.cells)
        for k, v in other.notes.items():
            self.notes.setdefault(k, v)
        return self

    def sorted_cells(self) -> list[Cell]:
        def key(c: Cell):
            return tuple(-1 if v is None else v for v in (c.beta, c.i, c.j, c.order)) + (c.label or "",)

        return sorted(self.cells, key=key)

    def to_json(self) -> dict:
        cells = []
        for c in self.sorted_cells():
            d = asdict(c)
            if d["label"] is None:
                del d["label"]
            cells.append(d)
        out = {
            "identity": self.identity,
            "cells": cells,
            "tower": self.tower,
            "backend": self.backend,
            "points": self.points,
        }
        if self.notes:
            out["notes"] = self.notes
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=False)

    def summary(self) -> str:
        lines = [f"{self.identity}: {'PASS' if self.passed else 'FAIL'} "
                 f"({len(self.cells) - len(self.failures())}/{len(self.cells)} cells) [{self.tower}, {self.backend}]"]
        for c in self.sorted_cells():
            where = ", ".join(f"{k}={v}" for k, v in (("beta", c.beta), ("i", c.i), ("j", c.j), ("order", c.order)) if v is not None)
            tag = f" {c.label}" if c.label else ""
            line = f"  [{c.status}]{tag} {where} ({c.millis} ms)"
            if c.witness:
                line += f"\n      witness: {c.witness}"
            lines.append(line)
        for k, v in self.notes.items():
            lines.append(f"  {k}: {v}")
        return "\n".join(lines)
