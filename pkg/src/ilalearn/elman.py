"""Single-layer Elman forward pass over serialized weights.

h' = tanh(Wx x + Wh h + b), with a logistic readout y = [wo . h + c > 0].
The initial hidden state is the zero vector; ties at logit zero classify
as 0.  Running a word produces a trace in the format the learner consumes.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .traces import Trace, TraceStep


@dataclass(frozen=True)
class ElmanWeights:
    Wx: np.ndarray  # (m, d)
    Wh: np.ndarray  # (m, m)
    b: np.ndarray   # (m,)
    wo: np.ndarray  # (m,)
    c: float

    def __post_init__(self):
        object.__setattr__(self, "Wx", np.asarray(self.Wx, dtype=float))
        object.__setattr__(self, "Wh", np.asarray(self.Wh, dtype=float))
        object.__setattr__(self, "b", np.asarray(self.b, dtype=float))
        object.__setattr__(self, "wo", np.asarray(self.wo, dtype=float))
        object.__setattr__(self, "c", float(self.c))
        m, d = self.Wx.shape
        if self.Wh.shape != (m, m):
            raise ValueError(f"Wh shape {self.Wh.shape} != ({m}, {m})")
        if self.b.shape != (m,):
            raise ValueError(f"b shape {self.b.shape} != ({m},)")
        if self.wo.shape != (m,):
            raise ValueError(f"wo shape {self.wo.shape} != ({m},)")
        for arr in (self.Wx, self.Wh, self.b, self.wo):
            if not np.all(np.isfinite(arr)):
                raise ValueError("non-finite weight entry")
        if not math.isfinite(self.c):
            raise ValueError("non-finite classifier bias")

    @property
    def input_dim(self) -> int:
        return self.Wx.shape[1]

    @property
    def hidden_dim(self) -> int:
        return self.Wx.shape[0]

    def save(self, path) -> None:
        data = {
            "d": self.input_dim,
            "m": self.hidden_dim,
            "Wx": self.Wx.tolist(),
            "Wh": self.Wh.tolist(),
            "b": self.b.tolist(),
            "wo": self.wo.tolist(),
            "c": self.c,
        }
        with open(path, "w") as f:
            json.dump(data, f, indent=2, sort_keys=True)
            f.write("\n")

    @classmethod
    def load(cls, path) -> "ElmanWeights":
        with open(path) as f:
            data = json.load(f)
        w = cls(
            Wx=np.array(data["Wx"], dtype=float),
            Wh=np.array(data["Wh"], dtype=float),
            b=np.array(data["b"], dtype=float),
            wo=np.array(data["wo"], dtype=float),
            c=data["c"],
        )
        if w.input_dim != int(data["d"]) or w.hidden_dim != int(data["m"]):
            raise ValueError("weights file dimensions disagree with matrices")
        return w


def elman_step(w: ElmanWeights, x: Sequence[float], h: Sequence[float]) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    h = np.asarray(h, dtype=float)
    if x.shape != (w.input_dim,):
        raise ValueError(f"input shape {x.shape} != ({w.input_dim},)")
    if h.shape != (w.hidden_dim,):
        raise ValueError(f"hidden shape {h.shape} != ({w.hidden_dim},)")
    return np.tanh(w.Wx @ x + w.Wh @ h + w.b)


def classify(w: ElmanWeights, h: Sequence[float]) -> int:
    h = np.asarray(h, dtype=float)
    if h.shape != (w.hidden_dim,):
        raise ValueError(f"hidden shape {h.shape} != ({w.hidden_dim},)")
    return int(float(w.wo @ h) + w.c > 0.0)


def rnn_member(w: ElmanWeights, word: Sequence[Sequence[float]]) -> int:
    """The network as a language: classification after reading the word."""
    h = np.zeros(w.hidden_dim)
    for x in word:
        h = elman_step(w, x, h)
    return classify(w, h)


def run_rnn(w: ElmanWeights, word: Sequence[Sequence[float]]) -> Trace:
    """Trace of the network on a word, starting from the zero hidden state.

    The trace header records h0 and y0 (the empty-prefix classification).
    """
    h = np.zeros(w.hidden_dim)
    h0 = tuple(h)
    y0 = classify(w, h)
    steps = []
    for x in word:
        h = elman_step(w, x, h)
        steps.append(TraceStep.make(x, h, classify(w, h)))
    return Trace(tuple(steps), h0=h0, y0=y0)
