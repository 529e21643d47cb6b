"""Passive learning of interval lattice automata from RNN execution traces.

The pipeline: generate or record (input, hidden, output) traces of a
recurrent network, fold them into an interval prefix tree automaton over a
box lattice, then greedily merge states whose observed hidden vectors point
in similar directions.  The result is a finite automaton over the infinite
alphabet R^d whose fidelity to the original network can be measured on
sampled words.
"""

__version__ = "0.1.0"

from .boxes import BOTTOM, Box, Interval, Partition, StraddlesPartition
from .automaton import LatticeAutomaton
from .ipta import CoherenceConflict, IptaBuilder, build_ipta, check_coherence
from .merge import MergeConfig, merge_loop, merge_states, similarity_score
from .traces import Trace, TraceStep

__all__ = [
    "BOTTOM",
    "Box",
    "CoherenceConflict",
    "Interval",
    "IptaBuilder",
    "LatticeAutomaton",
    "MergeConfig",
    "Partition",
    "StraddlesPartition",
    "Trace",
    "TraceStep",
    "build_ipta",
    "check_coherence",
    "merge_loop",
    "merge_states",
    "similarity_score",
    "__version__",
]
