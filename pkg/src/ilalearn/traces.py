"""Execution-trace records and their line-delimited file format.

One record per trace; each step holds the input vector, the hidden vector
and the binary output of that step.  An optional first header record can
pin the dimensions and the default output for the empty prefix.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence


@dataclass(frozen=True)
class TraceStep:
    x: tuple[float, ...]
    h: tuple[float, ...]
    y: int

    def __post_init__(self):
        if self.y not in (0, 1):
            raise ValueError(f"binary output expected, got {self.y!r}")
        for v in (*self.x, *self.h):
            if not math.isfinite(v):
                raise ValueError(f"non-finite trace component {v!r}")

    @classmethod
    def make(cls, x: Sequence[float], h: Sequence[float], y: int) -> "TraceStep":
        return cls(tuple(float(v) for v in x), tuple(float(v) for v in h), int(y))


@dataclass(frozen=True)
class Trace:
    steps: tuple[TraceStep, ...]
    h0: tuple[float, ...] | None = None
    y0: int | None = None

    @classmethod
    def make(
        cls,
        steps: Iterable[tuple[Sequence[float], Sequence[float], int]],
        h0: Sequence[float] | None = None,
        y0: int | None = None,
    ) -> "Trace":
        return cls(
            tuple(TraceStep.make(x, h, y) for x, h, y in steps),
            None if h0 is None else tuple(float(v) for v in h0),
            None if y0 is None else int(y0),
        )

    def __len__(self):
        return len(self.steps)

    @property
    def word(self) -> list[tuple[float, ...]]:
        return [s.x for s in self.steps]


@dataclass
class TraceFileHeader:
    dim: int | None = None
    hidden_dim: int | None = None
    y0_default: int = 0


@dataclass
class TraceSet:
    traces: list[Trace] = field(default_factory=list)
    header: TraceFileHeader = field(default_factory=TraceFileHeader)

    def __iter__(self):
        return iter(self.traces)

    def __len__(self):
        return len(self.traces)


def _trace_record(t: Trace) -> dict:
    rec: dict = {
        "steps": [{"x": list(s.x), "h": list(s.h), "y": s.y} for s in t.steps]
    }
    if t.h0 is not None:
        rec["h0"] = list(t.h0)
    if t.y0 is not None:
        rec["y0"] = t.y0
    return rec


def write_traces(path, traces: Iterable[Trace], header: TraceFileHeader | None = None) -> None:
    with open(path, "w") as f:
        if header is not None:
            head: dict = {"y0_default": header.y0_default}
            if header.dim is not None:
                head["dim"] = header.dim
            if header.hidden_dim is not None:
                head["hidden_dim"] = header.hidden_dim
            f.write(json.dumps(head, sort_keys=True) + "\n")
        for t in traces:
            f.write(json.dumps(_trace_record(t), sort_keys=True) + "\n")


def read_traces(path) -> TraceSet:
    out = TraceSet()
    with open(path) as f:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as e:
                raise ValueError(f"{path}:{lineno}: bad trace record: {e}") from e
            if "steps" not in rec:
                if lineno != 1:
                    raise ValueError(f"{path}:{lineno}: header record must come first")
                out.header = TraceFileHeader(
                    dim=rec.get("dim"),
                    hidden_dim=rec.get("hidden_dim"),
                    y0_default=int(rec.get("y0_default", 0)),
                )
                continue
            out.traces.append(
                Trace.make(
                    [(s["x"], s["h"], s["y"]) for s in rec["steps"]],
                    h0=rec.get("h0"),
                    y0=rec.get("y0"),
                )
            )
    return out
