"""Interval prefix tree automata built from trace sets.

Folding a trace into the tree walks from the root, joining each letter into
the transition label of its partition class (creating fresh states for
unseen class-prefixes), joining the hidden vector into the target's gamma
box, and marking the target final when the step output is 1.  The trace set
must be coherent: two prefixes with the same class sequence cannot disagree
on the output, otherwise the partition is too coarse and construction
fails.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .automaton import LatticeAutomaton
from .boxes import Box, Partition, join
from .traces import Trace, TraceSet


@dataclass(frozen=True)
class CoherenceReport:
    """Two prefixes with identical class sequences but different outputs."""

    position: int
    first_trace: int
    first_prefix: tuple[tuple[float, ...], ...]
    first_y: int
    second_trace: int
    second_prefix: tuple[tuple[float, ...], ...]
    second_y: int

    def describe(self) -> str:
        def fmt(prefix):
            return "(" + ", ".join(
                "/".join(f"{v:g}" for v in x) for x in prefix
            ) + ")"

        return (
            f"conflict at prefix length {self.position}: "
            f"trace {self.first_trace} prefix {fmt(self.first_prefix)} has y={self.first_y}, "
            f"trace {self.second_trace} prefix {fmt(self.second_prefix)} has y={self.second_y}"
        )


class CoherenceConflict(ValueError):
    def __init__(self, report: CoherenceReport):
        super().__init__(report.describe())
        self.report = report


class IptaBuilder:
    """Incrementally folds traces into a prefix tree automaton."""

    def __init__(self, partition: Partition, hidden_dim: int | None = None,
                 y0_default: int = 0):
        self.partition = partition
        self.hidden_dim = hidden_dim
        self.y0_default = int(y0_default)
        self.automaton = LatticeAutomaton(partition.dim, partition)
        self.root = self.automaton.add_state(initial=True)
        # state -> (observed y, trace index, prefix length); root entry is
        # created only by explicit per-trace y0 values
        self._seen_y: dict[int, tuple[int, int, int]] = {}
        self._words: list[tuple[tuple[float, ...], ...]] = []
        self._saw_explicit_h0 = False

    def _conflict(self, state: int, y: int, trace_no: int, k: int) -> CoherenceConflict:
        prev_y, prev_trace, prev_k = self._seen_y[state]
        word = self._words[trace_no]
        prev_word = self._words[prev_trace]
        return CoherenceConflict(CoherenceReport(
            position=k,
            first_trace=prev_trace,
            first_prefix=prev_word[:prev_k],
            first_y=prev_y,
            second_trace=trace_no,
            second_prefix=word[:k],
            second_y=y,
        ))

    def _observe_y(self, state: int, y: int, trace_no: int, k: int) -> None:
        seen = self._seen_y.get(state)
        if seen is None:
            self._seen_y[state] = (y, trace_no, k)
        elif seen[0] != y:
            raise self._conflict(state, y, trace_no, k)
        if y == 1:
            self.automaton.final.add(state)

    def add_sequence(self, trace: Trace) -> None:
        auto = self.automaton
        trace_no = len(self._words)
        self._words.append(tuple(s.x for s in trace.steps))
        for step in trace.steps:
            if len(step.x) != self.partition.dim:
                raise ValueError(
                    f"input dimension {len(step.x)} != {self.partition.dim}")
            if self.hidden_dim is None:
                self.hidden_dim = len(step.h)
            elif len(step.h) != self.hidden_dim:
                raise ValueError(
                    f"hidden dimension {len(step.h)} != {self.hidden_dim}")
        if trace.h0 is not None:
            if self.hidden_dim is None:
                self.hidden_dim = len(trace.h0)
            elif len(trace.h0) != self.hidden_dim:
                raise ValueError(
                    f"h0 dimension {len(trace.h0)} != {self.hidden_dim}")
            auto.gamma[self.root] = join(auto.gamma[self.root], Box.from_point(trace.h0))
            self._saw_explicit_h0 = True
        if trace.y0 is not None:
            self._observe_y(self.root, trace.y0, trace_no, 0)

        q = self.root
        for k, step in enumerate(trace.steps, start=1):
            cls = self.partition.class_of_point(step.x)
            atom = Box.from_point(step.x)
            entries = auto.transitions_from(q, cls)
            if entries:
                target = entries[0][1]
            else:
                target = auto.add_state()
            auto.add_transition(q, atom, target)
            auto.gamma[target] = join(auto.gamma[target], Box.from_point(step.h))
            self._observe_y(target, step.y, trace_no, k)
            q = target

    def finish(self) -> LatticeAutomaton:
        auto = self.automaton
        if not self._saw_explicit_h0 and self.hidden_dim is not None:
            auto.gamma[self.root] = Box.from_point([0.0] * self.hidden_dim)
        if self.root not in self._seen_y and self.y0_default == 1:
            auto.final.add(self.root)
        return auto


def add_sequence(builder: IptaBuilder, trace: Trace) -> IptaBuilder:
    builder.add_sequence(trace)
    return builder


def build_ipta(
    traces: TraceSet | Iterable[Trace],
    partition: Partition,
    *,
    hidden_dim: int | None = None,
    y0_default: int | None = None,
) -> LatticeAutomaton:
    """Fold a whole trace set into a fresh prefix tree automaton."""
    if isinstance(traces, TraceSet):
        header = traces.header
        hidden_dim = hidden_dim if hidden_dim is not None else header.hidden_dim
        y0_default = y0_default if y0_default is not None else header.y0_default
        items: Iterable[Trace] = traces.traces
    else:
        items = traces
    builder = IptaBuilder(
        partition,
        hidden_dim=hidden_dim,
        y0_default=0 if y0_default is None else y0_default,
    )
    for t in items:
        builder.add_sequence(t)
    return builder.finish()


def check_coherence(
    traces: TraceSet | Iterable[Trace], partition: Partition
) -> CoherenceReport | None:
    """Up-front diagnostic: None when the trace set is coherent, otherwise a
    report naming the first pair of prefixes that disagree."""
    items = traces.traces if isinstance(traces, TraceSet) else list(traces)
    seen: dict[tuple[int, ...], tuple[int, int, int]] = {}
    for trace_no, trace in enumerate(items):
        word = tuple(s.x for s in trace.steps)
        prefix_classes: list[int] = []
        observations: list[tuple[int, int]] = []
        if trace.y0 is not None:
            observations.append((0, trace.y0))
        for k, step in enumerate(trace.steps, start=1):
            prefix_classes.append(partition.class_of_point(step.x))
            observations.append((k, step.y))
        for k, y in observations:
            key = tuple(prefix_classes[:k])
            prev = seen.get(key)
            if prev is None:
                seen[key] = (y, trace_no, k)
            elif prev[0] != y:
                prev_y, prev_trace, prev_k = prev
                prev_word = tuple(s.x for s in items[prev_trace].steps)
                return CoherenceReport(
                    position=k,
                    first_trace=prev_trace,
                    first_prefix=prev_word[:prev_k],
                    first_y=prev_y,
                    second_trace=trace_no,
                    second_prefix=word[:k],
                    second_y=y,
                )
    return None
