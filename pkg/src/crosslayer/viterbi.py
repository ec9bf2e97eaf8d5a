"""Hard-decision Viterbi decoding over transducer trellises.

The path metric is the number of received bits that agree with the branch
outputs (maximised), which is the same search as minimising Hamming
distance. Survivor ties at a state keep the smaller input symbol, then the
smaller predecessor index; ties between end states keep the smaller index.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Callable

from .convcrypt import (
    CascadeKey,
    Transducer,
    bits_to_symbols,
    symbols_to_bits,
)
from .errors import DecodeFailure, LengthError

__all__ = [
    "Trellis",
    "TraceRow",
    "DecodeResult",
    "build_trellis",
    "decode_block",
    "cascade_decode",
    "trace_to_csv",
]


@dataclass
class Trellis:
    transducer: Transducer
    states: list
    index: dict
    # per state index: [(input, output, next_index)] sorted by input
    branches: list[list[tuple[int, int, int]]]
    start: int
    accept: frozenset[int] | None  # None: any end state

    @property
    def k(self) -> int:
        return self.transducer.k

    @property
    def n(self) -> int:
        return self.transducer.n

    @property
    def edges(self) -> list[tuple]:
        """``(from_state, input, output, to_state)`` quadruples."""
        return [(self.states[i], u, y, self.states[j])
                for i, out in enumerate(self.branches) for u, y, j in out]


@dataclass(frozen=True)
class TraceRow:
    step: int
    state: str
    input: int
    output: int
    next_state: str
    branch_metric: int
    cumulative: int


@dataclass
class DecodeResult:
    inputs: str
    agreements: int
    final_state: object
    trace: list[TraceRow] = field(default_factory=list)


def build_trellis(t: Transducer, end: str | Callable[[object], bool] = "initial") -> Trellis:
    """One branch per ``(state, input)`` of ``t``.

    ``end`` is ``"initial"`` (paths must return to the start state),
    ``"free"`` or a predicate over states.
    """
    states = t.states()
    index = {s: i for i, s in enumerate(states)}
    branches = []
    for s in states:
        out = []
        for u in range(1 << t.k):
            y, nxt = t.step(s, u)
            out.append((u, y, index[nxt]))
        branches.append(out)
    if end == "free":
        accept = None
    elif end == "initial":
        accept = frozenset({index[t.initial_state]})
    elif callable(end):
        accept = frozenset(i for i, s in enumerate(states) if end(s))
    else:
        raise ValueError(f"unknown end constraint {end!r}")
    return Trellis(t, states, index, branches, index[t.initial_state], accept)


def decode_block(tr: Trellis, received: str, *, tail_steps: int = 0,
                 trace: bool = False) -> DecodeResult:
    """Most-agreeing trellis path for ``received``.

    The last ``tail_steps`` steps only follow zero-input branches (the known
    termination tail).

    Raises:
        DecodeFailure: when no path satisfies the end-state constraint.
    """
    n = tr.n
    rx = bits_to_symbols(received, n)
    steps = len(rx)
    metric: list[int | None] = [None] * len(tr.states)
    metric[tr.start] = 0
    history = []
    rows = []
    for t, r in enumerate(rx):
        zero_only = t >= steps - tail_steps
        new: list[int | None] = [None] * len(tr.states)
        back: list[tuple[int, int] | None] = [None] * len(tr.states)
        for i, m in enumerate(metric):
            if m is None:
                continue
            for u, y, j in tr.branches[i]:
                if zero_only and u:
                    break
                a = n - (y ^ r).bit_count()
                cand = m + a
                if trace:
                    rows.append(TraceRow(t, tr.transducer.state_label(tr.states[i]), u, y,
                                         tr.transducer.state_label(tr.states[j]), a, cand))
                cur = new[j]
                if cur is None or cand > cur or (cand == cur and (u, i) < back[j][::-1]):
                    new[j] = cand
                    back[j] = (i, u)
        metric = new
        history.append(back)
    ends = range(len(metric)) if tr.accept is None else sorted(tr.accept)
    best = None
    for j in ends:
        if metric[j] is not None and (best is None or metric[j] > metric[best]):
            best = j
    if best is None:
        raise DecodeFailure("no surviving path ends in an accepted state", stage="viterbi")
    inputs = []
    j = best
    for back in reversed(history):
        i, u = back[j]
        inputs.append(u)
        j = i
    inputs.reverse()
    return DecodeResult(symbols_to_bits(inputs, tr.k), metric[best], tr.states[best], rows)


def _trellis_for(key: CascadeKey, which: str, build) -> Trellis:
    cache = key.__dict__.setdefault("_trellis_cache", {})
    if which not in cache:
        cache[which] = build()
    return cache[which]


def cascade_decode(key: CascadeKey, received: str, *, method: str = "joint",
                   terminated: bool = True, strip_tail: bool = True) -> str:
    """Recover the pre-termination input of a (redundant) cascade.

    ``method="joint"`` runs one Viterbi search over the product of all stage
    states with the interstage layers folded into the branch labels. Only
    stage 1 is zero-terminated, so only its state is pinned at the end.

    ``method="stagewise"`` decodes the last stage first (free end state),
    undoes the P-box and S-box, and repeats down to stage 1, which is decoded
    with its tail and end state pinned.

    With ``terminated`` the decoded zero tail is checked, then stripped unless
    ``strip_tail`` is false.
    """
    tail = key.stages[0].flush_steps() if terminated else 0
    first_initial = key.stages[0].initial_state
    if method == "joint":
        tr = _trellis_for(key, f"joint:{terminated}", lambda: build_trellis(
            key.transducer,
            (lambda s: s[0] == first_initial) if terminated else "free"))
        bits = decode_block(tr, received, tail_steps=tail).inputs
    elif method == "stagewise":
        bits = received
        for i in range(len(key.stages) - 1, -1, -1):
            stage = key.stages[i]
            pinned = terminated and i == 0
            tr = _trellis_for(key, f"stage{i}:{pinned}",
                              lambda: build_trellis(stage, "initial" if pinned else "free"))
            bits = decode_block(tr, bits, tail_steps=tail if pinned else 0).inputs
            if i:
                sbox, pbox = key.interstage[i - 1]
                bits = symbols_to_bits(
                    (sbox.apply(pbox.apply(s, inverse=True), inverse=True)
                     for s in bits_to_symbols(bits, sbox.width)), sbox.width)
    else:
        raise ValueError(f"unknown decode method {method!r}")
    if terminated and key.tail_bits:
        if len(bits) < key.tail_bits:
            raise LengthError("received block shorter than the termination tail",
                              stage="viterbi")
        if bits[-key.tail_bits:].strip("0"):
            raise DecodeFailure("decoded termination tail is not all zeros", stage="viterbi")
        if strip_tail:
            bits = bits[:-key.tail_bits]
    return bits


def trace_to_csv(rows: list[TraceRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["step", "state", "input", "output", "next_state", "branch_metric",
                "cumulative"])
    for r in rows:
        w.writerow([r.step, r.state, r.input, r.output, r.next_state, r.branch_metric,
                    r.cumulative])
    return buf.getvalue()
