"""Fidelity and error measurement of a learned automaton against an oracle.

Fidelity is the percentage of test words where oracle and automaton agree;
type I counts words the oracle rejects but the automaton accepts (false
alarms), type II the reverse.  The three percentages partition the test
set, so they always sum to 100.
"""

from __future__ import annotations

import json
import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .automaton import LatticeAutomaton
from .tomita import LanguageId, member, random_word

Word = Sequence[Sequence[float]]
Oracle = Callable[[Word], int]


@dataclass
class EvalReport:
    n_words: int
    n_agree: int
    n_type1: int
    n_type2: int
    detail: list[dict] | None = None

    @property
    def fidelity_pct(self) -> float:
        return 100.0 * self.n_agree / self.n_words

    @property
    def type1_pct(self) -> float:
        return 100.0 * self.n_type1 / self.n_words

    @property
    def type2_pct(self) -> float:
        return 100.0 * self.n_type2 / self.n_words

    def summary(self) -> str:
        return (
            f"fidelity={self.fidelity_pct:.2f} type1={self.type1_pct:.2f} "
            f"type2={self.type2_pct:.2f}"
        )

    def to_dict(self) -> dict:
        data = {
            "n_words": self.n_words,
            "n_agree": self.n_agree,
            "n_type1": self.n_type1,
            "n_type2": self.n_type2,
            "fidelity_pct": self.fidelity_pct,
            "type1_pct": self.type1_pct,
            "type2_pct": self.type2_pct,
        }
        if self.detail is not None:
            data["detail"] = self.detail
        return data

    def save(self, path) -> None:
        with open(path, "w") as f:
            json.dump(self.to_dict(), f, indent=2, sort_keys=True)
            f.write("\n")


def _judge(oracle: Oracle, auto: LatticeAutomaton, words: list[Word], offset: int,
           detail: bool) -> tuple[int, int, int, list[dict]]:
    agree = t1 = t2 = 0
    records: list[dict] = []
    for i, word in enumerate(words):
        ref = int(oracle(word))
        got = int(auto.accepts(word))
        if ref == got:
            agree += 1
        elif got == 1:
            t1 += 1
        else:
            t2 += 1
        if detail and ref != got:
            records.append({
                "index": offset + i,
                "word": [list(x) for x in word],
                "oracle": ref,
                "automaton": got,
            })
    return agree, t1, t2, records


def evaluate(oracle: Oracle, auto: LatticeAutomaton, words: list[Word], *,
             detail: bool = False, jobs: int = 1) -> EvalReport:
    """Compare oracle and automaton verdicts word by word.

    With jobs > 1 the words are scored in a process pool; the oracle and the
    automaton must then be picklable.
    """
    if not words:
        raise ValueError("evaluation needs at least one word")
    if jobs <= 1 or len(words) < 2 * jobs:
        agree, t1, t2, records = _judge(oracle, auto, words, 0, detail)
    else:
        chunk = math.ceil(len(words) / jobs)
        parts = [
            (oracle, auto, words[i:i + chunk], i, detail)
            for i in range(0, len(words), chunk)
        ]
        agree = t1 = t2 = 0
        records = []
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for a, b, c, recs in pool.map(_judge_star, parts):
                agree += a
                t1 += b
                t2 += c
                records.extend(recs)
        records.sort(key=lambda r: r["index"])
    return EvalReport(
        n_words=len(words),
        n_agree=agree,
        n_type1=t1,
        n_type2=t2,
        detail=records if detail else None,
    )


def _judge_star(args):
    return _judge(*args)


def sample_words(lang: LanguageId, n: int, max_len: int, seed: int,
                 balance: bool = False) -> list[Word]:
    """I.i.d. words from the language's letter distribution.

    With balance, negatively-labeled words are resampled toward at least 25%
    positives; if the budget of extra draws runs out the unbalanced sample is
    returned with a warning.
    """
    if n < 1:
        raise ValueError("need n >= 1 words")
    rng = np.random.default_rng(seed)
    words: list[Word] = [random_word(lang, rng, max_len) for _ in range(n)]
    if not balance:
        return words
    target = math.ceil(0.25 * n)
    positives = sum(member(lang, w) for w in words)
    extras: list[Word] = []
    budget = 200 * n
    while positives + len(extras) < target and budget > 0:
        w = random_word(lang, rng, max_len)
        budget -= 1
        if member(lang, w):
            extras.append(w)
    for i in range(len(words) - 1, -1, -1):
        if not extras:
            break
        if not member(lang, words[i]):
            words[i] = extras.pop()
    if sum(member(lang, w) for w in words) < target:
        warnings.warn(
            f"balance target of {target} positive words not reached",
            stacklevel=2,
        )
    return words
