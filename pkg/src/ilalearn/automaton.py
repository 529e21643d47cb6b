"""Interval lattice automata: states, class-indexed box transitions, membership.

Transitions are labeled by boxes that stay inside one partition class, and
there is at most one transition per (source, target, class); adding a label
that collides with an existing one joins the two boxes.  Each state carries
a gamma box overapproximating the hidden vectors observed there (BOTTOM when
nothing was observed).  Membership simulates sets of states, since merging
can leave several same-class transitions out of one state.
"""

from __future__ import annotations

import json
import math
from typing import Iterator, Sequence

from .boxes import BOTTOM, Box, BoxLike, Interval, Partition, join


class LatticeAutomaton:
    def __init__(self, dim: int, partition: Partition):
        if partition.dim != dim:
            raise ValueError(f"partition dimension {partition.dim} != {dim}")
        self.dim = dim
        self.partition = partition
        self.states: set[int] = set()
        self.initial: set[int] = set()
        self.final: set[int] = set()
        # source -> class index -> list of (label, target)
        self._delta: dict[int, dict[int, list[tuple[Box, int]]]] = {}
        self.gamma: dict[int, BoxLike] = {}
        # target -> sources with at least one edge into it (merge/delete support)
        self._sources_of: dict[int, set[int]] = {}
        self._next_id = 0

    # -- construction ------------------------------------------------------

    def add_state(self, *, initial: bool = False, final: bool = False) -> int:
        q = self._next_id
        self._next_id += 1
        self.states.add(q)
        if initial:
            self.initial.add(q)
        if final:
            self.final.add(q)
        self._delta[q] = {}
        self.gamma[q] = BOTTOM
        self._sources_of[q] = set()
        return q

    def _check_state(self, q: int) -> None:
        if q not in self.states:
            raise ValueError(f"unknown state {q}")

    def add_transition(self, q: int, label: Box, q2: int) -> None:
        """Insert (q, label, q2), joining with an existing same-class edge."""
        if label.is_bottom:
            raise ValueError("transition label cannot be BOTTOM")
        self._check_state(q)
        self._check_state(q2)
        cls = self.partition.class_of(label)
        entries = self._delta[q].setdefault(cls, [])
        for i, (old, target) in enumerate(entries):
            if target == q2:
                entries[i] = (join(old, label), q2)
                return
        entries.append((label, q2))
        self._sources_of[q2].add(q)

    def delete_state(self, q: int) -> None:
        """Remove a state together with all incident transitions."""
        self._check_state(q)
        for entries in self._delta.pop(q).values():
            for _, target in entries:
                if target != q:
                    self._sources_of[target].discard(q)
        for src in self._sources_of.pop(q):
            if src == q:
                continue
            by_class = self._delta[src]
            for cls in list(by_class):
                kept = [(lbl, t) for lbl, t in by_class[cls] if t != q]
                if kept:
                    by_class[cls] = kept
                else:
                    del by_class[cls]
        self.states.discard(q)
        self.initial.discard(q)
        self.final.discard(q)
        del self.gamma[q]

    # -- queries -----------------------------------------------------------

    def transitions(self) -> Iterator[tuple[int, int, Box, int]]:
        """All transitions as (source, class, label, target)."""
        for q, by_class in self._delta.items():
            for cls, entries in by_class.items():
                for label, target in entries:
                    yield q, cls, label, target

    def transitions_from(self, q: int, cls: int | None = None) -> list[tuple[Box, int]]:
        by_class = self._delta.get(q, {})
        if cls is None:
            return [e for entries in by_class.values() for e in entries]
        return list(by_class.get(cls, ()))

    def sources_of(self, q: int) -> set[int]:
        return set(self._sources_of.get(q, ()))

    @property
    def num_transitions(self) -> int:
        return sum(1 for _ in self.transitions())

    def accepts(self, word: Sequence[Sequence[float]]) -> bool:
        """Breadth-wise simulation over state sets (NFA-style)."""
        current = set(self.initial)
        for letter in word:
            vals = [float(v) for v in letter]
            if len(vals) != self.dim:
                raise ValueError(f"letter dimension {len(vals)} != {self.dim}")
            if not all(math.isfinite(v) for v in vals):
                raise ValueError(f"non-finite letter {letter!r}")
            cls = self.partition.class_of_point(vals)
            current = {
                target
                for q in current
                for label, target in self._delta[q].get(cls, ())
                if label.contains_point(vals)
            }
            if not current:
                return False
        return bool(current & self.final)

    def validate(self) -> None:
        """Full-scan check of the structural invariants."""
        if not self.initial <= self.states or not self.final <= self.states:
            raise AssertionError("initial/final not subsets of states")
        if set(self.gamma) != self.states:
            raise AssertionError("gamma not defined exactly on states")
        seen: set[tuple[int, int, int]] = set()
        for q, cls, label, target in self.transitions():
            if q not in self.states or target not in self.states:
                raise AssertionError(f"dangling transition {q}->{target}")
            if self.partition.class_of(label) != cls:
                raise AssertionError(f"label {label} not in class {cls}")
            key = (q, target, cls)
            if key in seen:
                raise AssertionError(f"duplicate transition for {key}")
            seen.add(key)

    def copy(self) -> "LatticeAutomaton":
        other = LatticeAutomaton(self.dim, self.partition)
        other.states = set(self.states)
        other.initial = set(self.initial)
        other.final = set(self.final)
        other._delta = {
            q: {cls: list(entries) for cls, entries in by_class.items()}
            for q, by_class in self._delta.items()
        }
        other.gamma = dict(self.gamma)
        other._sources_of = {q: set(srcs) for q, srcs in self._sources_of.items()}
        other._next_id = self._next_id
        return other

    # -- serialization -----------------------------------------------------

    def to_dict(self) -> dict:
        def box_json(b: BoxLike):
            if b.is_bottom:
                return None
            return [
                {"lo": iv.lo, "hi": iv.hi, "hi_open": iv.hi_open} for iv in b.dims
            ]

        return {
            "dim": self.dim,
            "partition": {"cuts": [list(c) for c in self.partition.cuts]},
            "states": sorted(self.states),
            "initial": sorted(self.initial),
            "final": sorted(self.final),
            "transitions": [
                {
                    "source": q,
                    "class": cls,
                    "label": box_json(label),
                    "target": target,
                }
                for q, cls, label, target in sorted(
                    self.transitions(),
                    key=lambda t: (t[0], t[1], t[3], [(iv.lo, iv.hi) for iv in t[2].dims]),
                )
            ],
            "gamma": [[q, box_json(self.gamma[q])] for q in sorted(self.states)],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "LatticeAutomaton":
        def box_from(v) -> BoxLike:
            if v is None:
                return BOTTOM
            return Box(
                tuple(Interval(d["lo"], d["hi"], bool(d.get("hi_open"))) for d in v)
            )

        partition = Partition.from_lists(data["partition"]["cuts"])
        auto = cls(int(data["dim"]), partition)
        auto.states = {int(q) for q in data["states"]}
        auto.initial = {int(q) for q in data["initial"]}
        auto.final = {int(q) for q in data["final"]}
        auto._delta = {q: {} for q in auto.states}
        auto._sources_of = {q: set() for q in auto.states}
        for t in data["transitions"]:
            q, target = int(t["source"]), int(t["target"])
            label = box_from(t["label"])
            auto._delta[q].setdefault(int(t["class"]), []).append((label, target))
            auto._sources_of[target].add(q)
        auto.gamma = {int(q): box_from(v) for q, v in data["gamma"]}
        auto._next_id = max(auto.states, default=-1) + 1
        auto.validate()
        return auto

    def save(self, path) -> None:
        with open(path, "w") as f:
            json.dump(self.to_dict(), f, indent=2, sort_keys=True)
            f.write("\n")

    @classmethod
    def load(cls, path) -> "LatticeAutomaton":
        with open(path) as f:
            return cls.from_dict(json.load(f))


def _fmt_endpoint(v: float) -> str:
    if v == math.inf:
        return "inf"
    if v == -math.inf:
        return "-inf"
    return f"{v:.6g}"


def _fmt_label(label: Box) -> str:
    parts = [
        f"[{_fmt_endpoint(iv.lo)}, {_fmt_endpoint(iv.hi)}{')' if iv.hi_open else ']'}"
        for iv in label.dims
    ]
    if len(parts) == 1:
        return parts[0]
    return "(" + ", ".join(parts) + ")"


def to_dot(auto: LatticeAutomaton, name: str = "ila") -> str:
    """Graphviz rendering: double circles for final states, entry arrows
    for initial ones, labels printed with 6 significant digits."""
    lines = [f"digraph {name} {{", "  rankdir=LR;"]
    for q in sorted(auto.initial):
        lines.append(f'  __start{q} [shape=point, label=""];')
    for q in sorted(auto.states):
        shape = "doublecircle" if q in auto.final else "circle"
        lines.append(f"  q{q} [shape={shape}, label=\"q{q}\"];")
    for q in sorted(auto.initial):
        lines.append(f"  __start{q} -> q{q};")
    for q, cls, label, target in sorted(
        auto.transitions(),
        key=lambda t: (t[0], t[1], t[3], [(iv.lo, iv.hi) for iv in t[2].dims]),
    ):
        lines.append(f'  q{q} -> q{target} [label="{_fmt_label(label)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
