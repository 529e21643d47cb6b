"""Similarity-driven greedy state merging.

Two states score 2 when exactly one is final, otherwise one minus the
cosine of the centers of their gamma boxes (with conservative fallbacks for
bottom and zero-norm centers).  The loop repeatedly merges the pair with
the globally smallest score below the threshold, smaller id surviving, until
no pair qualifies.

The loop is implemented with a lazy best-partner heap: every state owns one
heap entry for its current best pair, entries are version-tagged, and stale
entries are recomputed when popped.  Scores depend only on the two states
of a pair, so a popped entry whose versions are current carries the exact
present-day score, and the pop order reproduces full rescoring after every
merge at a fraction of the cost.
"""

from __future__ import annotations

import heapq
import warnings
from dataclasses import dataclass

import numpy as np

from .automaton import LatticeAutomaton
from .boxes import mid as box_mid
from .boxes import join


@dataclass(frozen=True)
class MergeConfig:
    """Merge threshold and optional cap on the number of merges.

    Ties between equal scores are broken toward the smallest (min id,
    max id) pair, and the smaller id survives a merge, which makes runs
    reproducible.
    """

    threshold: float
    max_merges: int | None = None

    def __post_init__(self):
        if self.threshold < 0:
            raise ValueError("threshold must be >= 0")


def similarity_score(auto: LatticeAutomaton, qi: int, qj: int) -> float:
    """Score in [0, 2]; small means the states look mergeable."""
    if qi == qj:
        raise ValueError("similarity of a state with itself")
    for q in (qi, qj):
        if q not in auto.states:
            raise ValueError(f"unknown state {q}")
    if (qi in auto.final) != (qj in auto.final):
        return 2.0
    gi, gj = auto.gamma[qi], auto.gamma[qj]
    if gi.is_bottom and gj.is_bottom:
        return 0.0
    if gi.is_bottom or gj.is_bottom:
        return 2.0
    mi = np.asarray(box_mid(gi))
    mj = np.asarray(box_mid(gj))
    ni = float(np.linalg.norm(mi))
    nj = float(np.linalg.norm(mj))
    if ni == 0.0 and nj == 0.0:
        return 0.0
    if ni == 0.0 or nj == 0.0:
        return 2.0
    cos = float(np.dot(mi, mj) / (ni * nj))
    return min(max(1.0 - cos, 0.0), 2.0)


def merge_states(auto: LatticeAutomaton, qi: int, qj: int) -> LatticeAutomaton:
    """Merge qj into qi: redirect transitions, join gammas, inherit
    initial/final membership, then delete qj."""
    if qi == qj:
        raise ValueError("cannot merge a state with itself")
    for q in (qi, qj):
        if q not in auto.states:
            raise ValueError(f"unknown state {q}")
    incoming = [
        (src, label)
        for src in auto.sources_of(qj)
        if src != qj
        for label, target in auto.transitions_from(src)
        if target == qj
    ]
    outgoing = [(label, t) for label, t in auto.transitions_from(qj) if t != qj]
    loops = [label for label, t in auto.transitions_from(qj) if t == qj]
    for src, label in incoming:
        auto.add_transition(src, label, qi)
    for label, target in outgoing:
        auto.add_transition(qi, label, target)
    for label in loops:
        auto.add_transition(qi, label, qi)
    auto.gamma[qi] = join(auto.gamma[qi], auto.gamma[qj])
    if qj in auto.initial:
        auto.initial.add(qi)
    if qj in auto.final:
        auto.final.add(qi)
    auto.delete_state(qj)
    return auto


class _PairFinder:
    """Vectorized per-state score rows plus the lazy best-pair heap."""

    def __init__(self, auto: LatticeAutomaton, threshold: float):
        self.auto = auto
        self.threshold = threshold
        n = max(auto.states, default=-1) + 1
        self.alive = np.zeros(n, dtype=bool)
        self.final = np.zeros(n, dtype=bool)
        self.bottom = np.ones(n, dtype=bool)
        hidden = 1
        for q in auto.states:
            g = auto.gamma[q]
            if not g.is_bottom:
                hidden = g.dim
                break
        self.mids = np.zeros((n, hidden))
        for q in auto.states:
            self.alive[q] = True
            self.final[q] = q in auto.final
            g = auto.gamma[q]
            if not g.is_bottom:
                self.bottom[q] = False
                self.mids[q] = box_mid(g)
        norms = np.linalg.norm(self.mids, axis=1)
        self.zero = (norms == 0.0) & ~self.bottom
        safe = np.where(norms == 0.0, 1.0, norms)
        self.unit = self.mids / safe[:, None]
        self.version = np.zeros(n, dtype=np.int64)
        self.heap: list[tuple[float, int, int, int, int, int]] = []

    def score_row(self, i: int) -> np.ndarray:
        s = 1.0 - self.unit @ self.unit[i]
        if self.bottom[i]:
            s = np.where(self.bottom, 0.0, 2.0)
        else:
            s = np.where(self.bottom, 2.0, s)
            if self.zero[i]:
                s = np.where(~self.bottom, np.where(self.zero, 0.0, 2.0), s)
            else:
                s = np.where(self.zero & ~self.bottom, 2.0, s)
        s = np.where(self.final != self.final[i], 2.0, s)
        return np.clip(s, 0.0, 2.0)

    def push_best(self, i: int) -> None:
        s = self.score_row(i)
        s = np.where(self.alive, s, np.inf)
        s[i] = np.inf
        best = float(s.min())
        if best >= self.threshold:
            return
        partner = int(np.flatnonzero(s == best).min())
        a, b = (i, partner) if i < partner else (partner, i)
        heapq.heappush(
            self.heap,
            (best, a, b, i, int(self.version[a]), int(self.version[b])),
        )

    def refresh_state(self, q: int) -> None:
        """Re-read finality and gamma of q, bumping its version on change."""
        g = self.auto.gamma[q]
        fin = q in self.auto.final
        bot = g.is_bottom
        m = self.mids[q] if bot else np.asarray(box_mid(g))
        changed = (
            fin != bool(self.final[q])
            or bot != bool(self.bottom[q])
            or (not bot and not np.array_equal(m, self.mids[q]))
        )
        if not changed:
            return
        self.final[q] = fin
        self.bottom[q] = bot
        self.mids[q] = 0.0 if bot else m
        norm = float(np.linalg.norm(self.mids[q]))
        self.zero[q] = (norm == 0.0) and not bot
        self.unit[q] = self.mids[q] / norm if norm > 0.0 else 0.0
        self.version[q] += 1

    def pop_qualifying_pair(self) -> tuple[int, int] | None:
        while self.heap:
            score, a, b, owner, va, vb = heapq.heappop(self.heap)
            if (
                self.alive[a]
                and self.alive[b]
                and self.version[a] == va
                and self.version[b] == vb
            ):
                return a, b
            if self.alive[owner]:
                self.push_best(owner)
        return None


def merge_loop(auto: LatticeAutomaton, cfg: MergeConfig) -> LatticeAutomaton:
    """Greedy global-minimum merging until no pair scores below the
    threshold (or the merge cap is hit).  Mutates and returns the automaton."""
    if cfg.threshold > 2.0:
        warnings.warn(
            f"threshold {cfg.threshold} exceeds the maximum score 2; "
            "every pair of states will be merged",
            stacklevel=2,
        )
    if cfg.threshold <= 0.0 or len(auto.states) < 2:
        return auto
    finder = _PairFinder(auto, cfg.threshold)
    for q in sorted(auto.states):
        finder.push_best(q)
    merges = 0
    while cfg.max_merges is None or merges < cfg.max_merges:
        pair = finder.pop_qualifying_pair()
        if pair is None:
            break
        qi, qj = pair
        merge_states(auto, qi, qj)
        merges += 1
        finder.alive[qj] = False
        finder.refresh_state(qi)
        finder.push_best(qi)
    return auto
