"""Tomita benchmark languages, classic and real-valued, plus trace synthesis.

The classic seven languages are over bits; the real-valued variants read a
letter's sign instead (negative letters play the role of 0).  Membership is
implemented twice on purpose: counting/regex oracles here, and explicit
minimal automata used to synthesize hidden states; the test suite holds the
two routes against each other.

Synthetic traces label every prefix with oracle membership and attach a
one-hot encoding of the ground-truth automaton state (optionally with
Gaussian noise), which gives the learner exactly the clustered hidden
geometry it assumes.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .boxes import Partition
from .traces import Trace, TraceFileHeader, TraceStep

FAMILIES = ("tomita", "tomita2")


@dataclass(frozen=True)
class LanguageId:
    family: str
    index: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown language family {self.family!r}")
        if not 1 <= self.index <= 7:
            raise ValueError(f"language index {self.index} out of range 1..7")

    def __str__(self):
        return f"{self.family}:{self.index}"


def parse_language(spec: str) -> LanguageId:
    """Parse 'tomita:K' or 'tomita2:K'."""
    family, sep, idx = spec.partition(":")
    if not sep:
        raise ValueError(f"language spec {spec!r} must look like tomita2:4")
    try:
        return LanguageId(family, int(idx))
    except ValueError as e:
        raise ValueError(f"bad language spec {spec!r}: {e}") from e


def default_partition(family: str) -> Partition:
    """Sign cut for the real-valued family, bit cut for the classic one."""
    if family == "tomita2":
        return Partition.from_lists([[0.0]])
    if family == "tomita":
        return Partition.from_lists([[0.5]])
    raise ValueError(f"unknown language family {family!r}")


# -- membership oracles ----------------------------------------------------

# strings containing an odd run of 1s followed, possibly later, by an odd
# run of 0s; language 3 is the complement
_NOT_TOMITA3 = re.compile(r"((0|1)*0)*1(11)*(0(0|1)*1)*0(00)*(1(0|1)*)*$")
_TOMITA7 = re.compile(r"0*1*0*1*$")


def _member_bits(index: int, s: str) -> int:
    if index == 1:
        return int("0" not in s)
    if index == 2:
        return int(s == "10" * (len(s) // 2))
    if index == 3:
        return int(_NOT_TOMITA3.match(s) is None)
    if index == 4:
        return int("000" not in s)
    if index == 5:
        return int(s.count("0") % 2 == 0 and s.count("1") % 2 == 0)
    if index == 6:
        return int((s.count("1") - s.count("0")) % 3 == 0)
    if index == 7:
        return int(_TOMITA7.match(s) is not None)
    raise ValueError(f"language index {index} out of range 1..7")


def tomita_member(lang: LanguageId, word: Sequence[int]) -> int:
    """Classic membership; letters must be bits."""
    if lang.family != "tomita":
        raise ValueError(f"{lang} is not a classic language")
    bits = []
    for v in word:
        if v not in (0, 1):
            raise ValueError(f"classic letters must be 0 or 1, got {v!r}")
        bits.append(str(int(v)))
    return _member_bits(lang.index, "".join(bits))


def tomita2_member(lang: LanguageId, word: Sequence[float]) -> int:
    """Real-valued membership; a letter is negative or nonnegative."""
    if lang.family != "tomita2":
        raise ValueError(f"{lang} is not a real-valued language")
    s = "".join("0" if v < 0 else "1" for v in word)
    return _member_bits(lang.index, s)


def member(lang: LanguageId, word: Sequence[Sequence[float]]) -> int:
    """Membership of a word of 1-dim letter vectors, either family."""
    scalars = [x[0] for x in word]
    if lang.family == "tomita":
        return tomita_member(lang, [int(v) for v in scalars])
    return tomita2_member(lang, scalars)


# -- ground-truth automata ---------------------------------------------------


@dataclass(frozen=True)
class BitDfa:
    """Minimal automaton over the two letter classes (0 = low, 1 = high)."""

    start: int
    accepting: frozenset[int]
    trans: tuple[tuple[int, int], ...]

    @property
    def n_states(self) -> int:
        return len(self.trans)

    def step(self, state: int, bit: int) -> int:
        return self.trans[state][bit]

    def accepts_bits(self, bits: Sequence[int]) -> int:
        q = self.start
        for b in bits:
            q = self.trans[q][b]
        return int(q in self.accepting)


_DFAS: dict[int, BitDfa] = {
    1: BitDfa(0, frozenset({0}), ((1, 0), (1, 1))),
    2: BitDfa(0, frozenset({0}), ((2, 1), (0, 2), (2, 2))),
    3: BitDfa(0, frozenset({0, 1, 3}), ((0, 1), (2, 0), (3, 4), (2, 3), (4, 4))),
    4: BitDfa(0, frozenset({0, 1, 2}), ((1, 0), (2, 0), (3, 0), (3, 3))),
    5: BitDfa(0, frozenset({0}), ((2, 1), (3, 0), (0, 3), (1, 2))),
    6: BitDfa(0, frozenset({0}), ((2, 1), (0, 2), (1, 0))),
    7: BitDfa(0, frozenset({0, 1, 2, 3}), ((0, 1), (2, 1), (2, 3), (4, 3), (4, 4))),
}


def ground_truth_dfa(lang: LanguageId) -> BitDfa:
    """Both families share the class-level automaton structure."""
    return _DFAS[lang.index]


def letter_class(lang: LanguageId, value: float) -> int:
    if lang.family == "tomita":
        return int(value >= 0.5)
    return int(value >= 0)


# -- synthetic trace generation ----------------------------------------------


@dataclass(frozen=True)
class SynthConfig:
    count: int
    max_len: int
    noise: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.count < 0:
            raise ValueError("count must be >= 0")
        if self.max_len < 1:
            raise ValueError("max_len must be >= 1")
        if self.noise < 0:
            raise ValueError("noise must be >= 0")


def random_letter_values(lang: LanguageId, rng: np.random.Generator, size: int) -> np.ndarray:
    """Letters of the family's distribution: integers in [-10, 10] for the
    real-valued languages, bits encoded as 0.0/1.0 for the classic ones."""
    if lang.family == "tomita2":
        return rng.integers(-10, 11, size=size).astype(float)
    return rng.integers(0, 2, size=size).astype(float)


def random_word(lang: LanguageId, rng: np.random.Generator, max_len: int) -> list[tuple[float, ...]]:
    length = int(rng.integers(1, max_len + 1))
    return [(float(v),) for v in random_letter_values(lang, rng, length)]


def _one_hot(n: int, i: int) -> np.ndarray:
    h = np.zeros(n)
    h[i] = 1.0
    return h


def gen_traces(lang: LanguageId, cfg: SynthConfig) -> tuple[list[Trace], TraceFileHeader]:
    """Oracle-labeled traces with one-hot ground-truth hidden states."""
    rng = np.random.default_rng(cfg.seed)
    dfa = ground_truth_dfa(lang)
    y0 = _member_bits(lang.index, "")
    h0 = tuple(_one_hot(dfa.n_states, dfa.start))
    traces = []
    for _ in range(cfg.count):
        word = random_word(lang, rng, cfg.max_len)
        state = dfa.start
        bits = ""
        steps = []
        for (value,) in word:
            bit = letter_class(lang, value)
            bits += str(bit)
            state = dfa.step(state, bit)
            h = _one_hot(dfa.n_states, state)
            if cfg.noise > 0:
                h = h + rng.normal(0.0, cfg.noise, size=dfa.n_states)
            steps.append(TraceStep.make((value,), h, _member_bits(lang.index, bits)))
        traces.append(Trace(tuple(steps), h0=h0, y0=y0))
    header = TraceFileHeader(dim=1, hidden_dim=dfa.n_states, y0_default=y0)
    return traces, header
