"""Keyed nonlinear convolutional transducers and the cascaded product cipher.

Bit sequences at the public surface are ``str`` of ``'0'``/``'1'``, MSB first
within every symbol. Internally a symbol is an ``int`` of known width.

Two transducer flavours share one interface (``step``/``states``/...):

* :class:`TableTransducer` is an explicit transition table, as in the
  tabulated fixtures.
* :class:`LinearTransducer` computes outputs from GF(2) generator matrices
  selected by a keyed transition function. Its state space (matrix set plus
  ``L`` registers of ``k`` bits) is far too large to tabulate for ``k = 8``,
  so rows are computed on demand.

A :class:`CascadeKey` composes stages and interstage S-box/P-box layers into
a single :class:`CascadeTransducer`, which is what both encryption and joint
trellis decoding run on.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import product
from math import factorial
from pathlib import Path
from typing import Hashable, Iterable, Iterator, Mapping, Sequence

import numpy as np

from .errors import (
    KeyValidationError,
    LengthError,
    RequiresViterbiError,
    TableValidationError,
    WidthError,
)

__all__ = [
    "bits_to_symbols",
    "symbols_to_bits",
    "Transducer",
    "TableTransducer",
    "LinearTransducer",
    "CascadeTransducer",
    "SBoxLayer",
    "PBoxLayer",
    "CascadeKey",
    "compile_linear_transducer",
    "load_transducer_table",
    "parse_table_text",
    "read_table_file",
    "format_table",
    "encode_block",
    "sbox_apply",
    "pbox_apply",
    "cascade_encrypt",
    "cascade_decrypt",
    "terminate",
    "random_cascade",
    "gf2_rank",
    "connection_key_count",
    "transition_key_count",
    "sbox_key_count",
    "pbox_key_count",
    "iter_connection_keys",
    "iter_transition_keys",
    "iter_sbox_keys",
    "iter_pbox_keys",
]

State = Hashable

# trellis/state enumeration refuses anything larger
MAX_STATES = 1 << 16


def bits_to_symbols(bits: str, width: int) -> list[int]:
    if len(bits) % width:
        raise LengthError(f"{len(bits)} bits is not a multiple of {width}")
    if bits.strip("01"):
        raise LengthError("bit strings may only contain '0' and '1'")
    return [int(bits[i:i + width], 2) for i in range(0, len(bits), width)]


def symbols_to_bits(symbols: Iterable[int], width: int) -> str:
    return "".join(format(s, f"0{width}b") for s in symbols)


def _parse_bits(s: str) -> int:
    s = s.strip()
    if not s or s.strip("01"):
        raise TableValidationError(f"not a binary string: {s!r}")
    return int(s, 2)


class Transducer:
    """Finite-state map from ``k``-bit input symbols to ``n``-bit outputs."""

    k: int
    n: int
    initial_state: State

    def step(self, state: State, u: int) -> tuple[int, State]:
        raise NotImplementedError

    def states(self) -> list[State]:
        raise NotImplementedError

    def flush_steps(self) -> int:
        """Zero-input steps that return every state to the initial state."""
        raise NotImplementedError

    @property
    def invertible(self) -> bool:
        """True when ``k == n`` and every per-state output map is a bijection."""
        return False

    def invert_step(self, state: State, y: int) -> tuple[int, State]:
        raise RequiresViterbiError(
            f"({self.n},{self.k}) stage has no algebraic inverse; use viterbi decoding",
            stage="convcrypt")

    def state_label(self, state: State) -> str:
        return str(state)

    def encode(self, bits: str) -> str:
        out = []
        state = self.initial_state
        for u in bits_to_symbols(bits, self.k):
            y, state = self.step(state, u)
            out.append(y)
        return symbols_to_bits(out, self.n)

    def decode_exact(self, bits: str) -> str:
        """Algebraic inverse of :meth:`encode` (rate-1 invertible stages only)."""
        out = []
        state = self.initial_state
        for y in bits_to_symbols(bits, self.n):
            u, state = self.invert_step(state, y)
            out.append(u)
        return symbols_to_bits(out, self.k)


class TableTransducer(Transducer):
    """Explicit ``(state, input) -> (output, next_state)`` table over int states."""

    def __init__(self, k: int, n: int, table: Mapping[tuple[int, int], tuple[int, int]],
                 initial_state: int = 0, state_bits: int | None = None):
        self.k, self.n = k, n
        self.table = dict(table)
        self.initial_state = initial_state
        in_states = sorted({s for s, _ in self.table})
        self._states = in_states
        self.state_bits = state_bits or max(1, max(in_states).bit_length())
        known = set(in_states)
        if initial_state not in known:
            raise TableValidationError(f"initial state {initial_state} has no rows")
        for s in in_states:
            for u in range(1 << k):
                if (s, u) not in self.table:
                    raise TableValidationError(
                        f"missing row: input {u:0{k}b}, state {s:0{self.state_bits}b}")
        for (s, u), (y, nxt) in self.table.items():
            if not 0 <= u < 1 << k or not 0 <= y < 1 << n:
                raise TableValidationError(f"row ({s}, {u}) has out-of-width symbols")
            if nxt not in known:
                raise TableValidationError(
                    f"row ({u:0{k}b}, {s:0{self.state_bits}b}) targets unknown state {nxt}")
        self._inverse = None
        if k == n:
            inv = {}
            for (s, u), (y, nxt) in self.table.items():
                inv[(s, y)] = (u, nxt)
            if len(inv) == len(self.table):
                self._inverse = inv

    def step(self, state, u):
        return self.table[(state, u)]

    def states(self):
        return list(self._states)

    def state_label(self, state):
        return format(state, f"0{self.state_bits}b")

    @property
    def invertible(self):
        return self._inverse is not None

    def invert_step(self, state, y):
        if self._inverse is None:
            return super().invert_step(state, y)
        return self._inverse[(state, y)]

    def flush_steps(self):
        current = set(self._states)
        for steps in range(len(self._states) + 1):
            if current == {self.initial_state}:
                return steps
            current = {self.table[(s, 0)][1] for s in current}
        raise KeyValidationError("zero input never returns the table to its initial state",
                                 stage="convcrypt")

    def rows(self) -> list[tuple[str, str, str, str]]:
        sb = self.state_bits
        return [(format(u, f"0{self.k}b"), format(s, f"0{sb}b"),
                 format(y, f"0{self.n}b"), format(nxt, f"0{sb}b"))
                for (s, u), (y, nxt) in sorted(self.table.items())]

    def __eq__(self, other):
        return (isinstance(other, TableTransducer) and self.k == other.k
                and self.n == other.n and self.table == other.table
                and self.initial_state == other.initial_state)

    def __repr__(self):
        return f"TableTransducer(k={self.k}, n={self.n}, states={len(self._states)})"


def _matrix_rows(matrix, k: int, n: int) -> tuple[int, ...]:
    rows = []
    for row in matrix:
        if isinstance(row, str):
            bits = row.replace(" ", "")
        else:
            bits = "".join(str(int(b)) for b in row)
        if len(bits) != n or bits.strip("01"):
            raise KeyValidationError(f"generator row {row!r} is not {n} binary digits")
        rows.append(int(bits, 2))
    if len(rows) != k:
        raise KeyValidationError(f"generator matrix needs {k} rows, got {len(rows)}")
    return tuple(rows)


def _row_combinations(rows: tuple[int, ...], k: int) -> list[int]:
    """``lut[u] = u . G`` over GF(2); row 0 pairs with the input MSB."""
    lut = [0] * (1 << k)
    for u in range(1, 1 << k):
        acc = 0
        for i, r in enumerate(rows):
            if u >> (k - 1 - i) & 1:
                acc ^= r
        lut[u] = acc
    return lut


def gf2_rank(rows: Sequence[int]) -> int:
    rank = 0
    rows = list(rows)
    while rows:
        pivot = rows.pop()
        if pivot:
            rank += 1
            top = pivot.bit_length() - 1
            rows = [r ^ pivot if r >> top & 1 else r for r in rows]
    return rank


class LinearTransducer(Transducer):
    """Generator-matrix transducer with keyed switching between matrix sets.

    The output is ``u.G0 ^ r1.G1 ^ ... ^ rL.GL`` using the matrices of the
    current set; registers then shift (``r1 <- u``) and the transition
    function picks the next set from ``(set, u)``. State is
    ``(set_id, r1, ..., rL)``.
    """

    def __init__(self, k: int, n: int, generators: Mapping[int, Sequence[Sequence[int]]],
                 transitions: Mapping[int, Sequence[tuple[int, int, int]]],
                 initial_set: int | None = None):
        self.k, self.n = k, n
        self.generators = {s: tuple(tuple(m) for m in mats) for s, mats in generators.items()}
        if not self.generators:
            raise KeyValidationError("no matrix sets given", stage="convcrypt")
        depths = {len(m) for m in self.generators.values()}
        if len(depths) != 1 or depths == {0}:
            raise KeyValidationError("every set needs the same number (L+1) of matrices",
                                     stage="convcrypt")
        self.memory = depths.pop() - 1
        self.transitions = {s: tuple(tuple(r) for r in rs) for s, rs in transitions.items()}
        self.initial_set = min(self.generators) if initial_set is None else initial_set
        self.initial_state = (self.initial_set,) + (0,) * self.memory
        if set(self.transitions) != set(self.generators):
            raise KeyValidationError("transition function must cover exactly the matrix sets",
                                     stage="convcrypt")
        size = 1 << k
        self._next = {}
        for s, ranges in self.transitions.items():
            nxt = [None] * size
            for lo, hi, target in ranges:
                if target not in self.generators:
                    raise KeyValidationError(f"transition to unknown set {target}",
                                             stage="convcrypt")
                if not 0 <= lo <= hi < size:
                    raise KeyValidationError(f"range {lo}-{hi} outside the input space",
                                             stage="convcrypt")
                for u in range(lo, hi + 1):
                    if nxt[u] is not None:
                        raise KeyValidationError(
                            f"set {s}: input {u} covered twice", stage="convcrypt")
                    nxt[u] = target
            if None in nxt:
                raise KeyValidationError(
                    f"set {s}: input {nxt.index(None)} not covered", stage="convcrypt")
            self._next[s] = nxt
        self._lut = {s: [_row_combinations(m, k) for m in mats]
                     for s, mats in self.generators.items()}
        self._inv = None
        if k == n:
            inv = {}
            for s, luts in self._lut.items():
                lut0 = luts[0]
                if len(set(lut0)) != size:
                    break
                table = [0] * size
                for u, y in enumerate(lut0):
                    table[y] = u
                inv[s] = table
            else:
                self._inv = inv

    def _memory_term(self, state) -> int:
        luts = self._lut[state[0]]
        acc = 0
        for i, r in enumerate(state[1:], start=1):
            acc ^= luts[i][r]
        return acc

    def step(self, state, u):
        s = state[0]
        y = self._lut[s][0][u] ^ self._memory_term(state)
        return y, (self._next[s][u], u) + state[1:-1] if self.memory else (self._next[s][u],)

    @property
    def invertible(self):
        return self._inv is not None

    def invert_step(self, state, y):
        if self._inv is None:
            return super().invert_step(state, y)
        s = state[0]
        u = self._inv[s][y ^ self._memory_term(state)]
        return u, (self._next[s][u], u) + state[1:-1] if self.memory else (self._next[s][u],)

    def state_count(self) -> int:
        return len(self.generators) << (self.k * self.memory)

    def states(self):
        if self.state_count() > MAX_STATES:
            raise KeyValidationError(
                f"{self.state_count()} states is too many to enumerate", stage="convcrypt")
        regs = range(1 << self.k)
        return [(s,) + r for s in sorted(self.generators)
                for r in product(regs, repeat=self.memory)]

    def flush_steps(self):
        if self._next[self.initial_set][0] != self.initial_set:
            raise KeyValidationError("zero input leaves the initial matrix set",
                                     stage="convcrypt")
        worst = 0
        for s in self.generators:
            seen = 0
            while s != self.initial_set:
                s = self._next[s][0]
                seen += 1
                if seen > len(self.generators):
                    raise KeyValidationError("zero input never reaches the initial set",
                                             stage="convcrypt")
            worst = max(worst, seen)
        return max(worst, self.memory)

    def state_label(self, state):
        regs = " ".join(format(r, f"0{self.k}b") for r in state[1:])
        return f"{state[0]}:{regs}" if regs else str(state[0])

    def to_table(self) -> TableTransducer:
        """Tabulate; states are numbered in :meth:`states` order."""
        states = self.states()
        index = {s: i for i, s in enumerate(states)}
        table = {}
        for s in states:
            for u in range(1 << self.k):
                y, nxt = self.step(s, u)
                table[(index[s], u)] = (y, index[nxt])
        return TableTransducer(self.k, self.n, table, index[self.initial_state],
                               max(1, (len(states) - 1).bit_length()))

    def __eq__(self, other):
        return (isinstance(other, LinearTransducer) and self.k == other.k
                and self.n == other.n and self.generators == other.generators
                and self.transitions == other.transitions
                and self.initial_set == other.initial_set)

    def __repr__(self):
        return (f"LinearTransducer(k={self.k}, n={self.n}, L={self.memory}, "
                f"sets={sorted(self.generators)})")


def compile_linear_transducer(generators, transitions=None, *, k: int | None = None,
                              n: int | None = None, initial_set: int | None = None
                              ) -> LinearTransducer:
    """Build a :class:`LinearTransducer` from readable key material.

    Args:
        generators: ``{set_id: [G0, G1, ..., GL]}``; each ``Gi`` is a list of
            ``k`` rows given as bit strings or 0/1 lists of length ``n``. A bare
            list of matrices is taken as a single set with id 1.
        transitions: ``{set_id: [(lo, hi, next_set), ...]}`` with inclusive
            input ranges partitioning ``[0, 2**k)``. Omitted for a single set
            means "always stay".
    """
    if not isinstance(generators, Mapping):
        generators = {1: generators}
    first = next(iter(generators.values()))[0]
    k = k or len(first)
    if n is None:
        row = first[0]
        n = len(row.replace(" ", "")) if isinstance(row, str) else len(row)
    mats = {s: [_matrix_rows(m, k, n) for m in ms] for s, ms in generators.items()}
    if transitions is None:
        if len(mats) != 1:
            raise KeyValidationError("several matrix sets need a transition function",
                                     stage="convcrypt")
        s = next(iter(mats))
        transitions = {s: [(0, (1 << k) - 1, s)]}
    return LinearTransducer(k, n, mats, transitions, initial_set)


def parse_table_text(text: str) -> list[tuple[str, str, str, str]]:
    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 4:
            raise TableValidationError(f"line {lineno}: expected 4 fields, got {len(fields)}")
        rows.append(tuple(fields))
    return rows


def load_transducer_table(rows: Iterable[Sequence[str]]) -> TableTransducer:
    """Rows are ``(input, in_state, output, out_state)`` binary strings."""
    rows = [tuple(r) for r in rows]
    if not rows:
        raise TableValidationError("empty transition table")
    k, sb, n = len(rows[0][0]), len(rows[0][1]), len(rows[0][2])
    table = {}
    for r in rows:
        if (len(r[0]), len(r[1]), len(r[2]), len(r[3])) != (k, sb, n, sb):
            raise TableValidationError(f"row {' '.join(r)} has inconsistent field widths")
        u, s, y, nxt = (_parse_bits(f) for f in r)
        if (s, u) in table:
            raise TableValidationError(f"duplicate row for input {r[0]}, state {r[1]}")
        table[(s, u)] = (y, nxt)
    return TableTransducer(k, n, table, 0, sb)


def read_table_file(path) -> TableTransducer:
    return load_transducer_table(parse_table_text(Path(path).read_text(encoding="utf-8")))


def format_table(t: TableTransducer, header: str = "") -> str:
    lines = [f"# {h}" for h in header.splitlines()] if header else []
    lines += [" ".join(r) for r in t.rows()]
    return "\n".join(lines) + "\n"


def encode_block(t: Transducer, bits: str) -> str:
    if len(bits) % t.k:
        raise LengthError(f"{len(bits)} bits is not a multiple of k={t.k}", stage="convcrypt")
    return t.encode(bits)


@dataclass(frozen=True)
class SBoxLayer:
    """Parallel ``w``-bit substitution boxes; box 0 takes the top bits."""

    boxes: tuple[tuple[int, ...], ...]
    w: int = 2
    _inverse: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        size = 1 << self.w
        inv = []
        for i, box in enumerate(self.boxes):
            if sorted(box) != list(range(size)):
                raise KeyValidationError(f"S-box {i} is not a bijection on {self.w} bits",
                                         stage="convcrypt")
            table = [0] * size
            for x, y in enumerate(box):
                table[y] = x
            inv.append(tuple(table))
        object.__setattr__(self, "_inverse", tuple(inv))

    @classmethod
    def identity(cls, width: int, w: int = 2) -> "SBoxLayer":
        if width % w:
            raise WidthError(f"width {width} is not a multiple of box width {w}")
        return cls(tuple(tuple(range(1 << w)) for _ in range(width // w)), w)

    @property
    def width(self) -> int:
        return self.w * len(self.boxes)

    def apply(self, value: int, inverse: bool = False) -> int:
        boxes = self._inverse if inverse else self.boxes
        mask = (1 << self.w) - 1
        out = 0
        for i, box in enumerate(boxes):
            shift = self.width - self.w * (i + 1)
            out |= box[value >> shift & mask] << shift
        return out


@dataclass(frozen=True)
class PBoxLayer:
    """Bit permutation: the bit at position ``i`` (1 = MSB) moves to ``perm[i-1]``."""

    perm: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.perm) != list(range(1, len(self.perm) + 1)):
            raise KeyValidationError(f"P-box {self.perm} is not a permutation of 1..n",
                                     stage="convcrypt")

    @classmethod
    def identity(cls, width: int) -> "PBoxLayer":
        return cls(tuple(range(1, width + 1)))

    @property
    def width(self) -> int:
        return len(self.perm)

    def apply(self, value: int, inverse: bool = False) -> int:
        n = len(self.perm)
        out = 0
        for i, j in enumerate(self.perm, start=1):
            src, dst = (j, i) if inverse else (i, j)
            if value >> (n - src) & 1:
                out |= 1 << (n - dst)
        return out


def _layer_apply(layer, bits: str, inverse: bool) -> str:
    if len(bits) != layer.width:
        raise WidthError(f"symbol has {len(bits)} bits, layer expects {layer.width}",
                         stage="convcrypt")
    return format(layer.apply(int(bits, 2), inverse), f"0{layer.width}b")


def sbox_apply(layer: SBoxLayer, symbol: str, inverse: bool = False) -> str:
    return _layer_apply(layer, symbol, inverse)


def pbox_apply(layer: PBoxLayer, symbol: str, inverse: bool = False) -> str:
    return _layer_apply(layer, symbol, inverse)


class CascadeTransducer(Transducer):
    """Stages chained through their S/P layers, stepped in lockstep.

    State is the tuple of per-stage states. One input symbol of stage 1
    produces one output symbol of the last stage.
    """

    def __init__(self, key: "CascadeKey"):
        self.key = key
        self.k = key.stages[0].k
        self.n = key.stages[-1].n
        self.initial_state = tuple(s.initial_state for s in key.stages)
        self._states = None

    def step(self, state, u):
        nxt = []
        last = len(self.key.stages) - 1
        for i, (stage, s) in enumerate(zip(self.key.stages, state)):
            u, s = stage.step(s, u)
            nxt.append(s)
            if i < last:
                sbox, pbox = self.key.interstage[i]
                u = pbox.apply(sbox.apply(u))
        return u, tuple(nxt)

    @property
    def invertible(self):
        return all(s.invertible for s in self.key.stages)

    def invert_step(self, state, y):
        if not self.invertible:
            return super().invert_step(state, y)
        # the last stage's state is known, so invert back to front
        nxt = list(state)
        for i in range(len(self.key.stages) - 1, -1, -1):
            y, nxt[i] = self.key.stages[i].invert_step(state[i], y)
            if i:
                sbox, pbox = self.key.interstage[i - 1]
                y = sbox.apply(pbox.apply(y, inverse=True), inverse=True)
        return y, tuple(nxt)

    def states(self):
        """States reachable from the initial state, in discovery order."""
        if self._states is None:
            seen = {self.initial_state: None}
            queue = deque([self.initial_state])
            while queue:
                s = queue.popleft()
                for u in range(1 << self.k):
                    nxt = self.step(s, u)[1]
                    if nxt not in seen:
                        seen[nxt] = None
                        if len(seen) > MAX_STATES:
                            raise KeyValidationError("cascade state space too large to enumerate",
                                                     stage="convcrypt")
                        queue.append(nxt)
            self._states = list(seen)
        return list(self._states)

    def flush_steps(self):
        return self.key.stages[0].flush_steps()

    def state_label(self, state):
        return "|".join(st.state_label(s) for st, s in zip(self.key.stages, state))


@dataclass(frozen=True)
class CascadeKey:
    stages: tuple[Transducer, ...]
    interstage: tuple[tuple[SBoxLayer, PBoxLayer], ...] = ()
    name: str = "custom"

    def __post_init__(self):
        if not self.stages:
            raise KeyValidationError("cascade needs at least one stage", stage="convcrypt")
        if len(self.interstage) != len(self.stages) - 1:
            raise KeyValidationError(
                f"{len(self.stages)} stages need {len(self.stages) - 1} interstage layers",
                stage="convcrypt")
        for i, (sbox, pbox) in enumerate(self.interstage):
            widths = (self.stages[i].n, sbox.width, pbox.width, self.stages[i + 1].k)
            if len(set(widths)) != 1:
                raise KeyValidationError(
                    f"width chain broken after stage {i + 1}: {widths}", stage="convcrypt")

    @property
    def transducer(self) -> CascadeTransducer:
        t = self.__dict__.get("_transducer")
        if t is None:
            t = CascadeTransducer(self)
            object.__setattr__(self, "_transducer", t)
        return t

    @property
    def k(self) -> int:
        return self.stages[0].k

    @property
    def n(self) -> int:
        return self.stages[-1].n

    @property
    def rate_one(self) -> bool:
        return all(s.k == s.n for s in self.stages)

    @property
    def invertible(self) -> bool:
        return all(s.invertible for s in self.stages)

    @property
    def tail_bits(self) -> int:
        """Zero bits appended to a block so stage 1 ends in its initial state."""
        return self.stages[0].flush_steps() * self.k

    def expansion(self, bits: int) -> int:
        return bits // self.k * self.n


def terminate(key: CascadeKey, bits: str) -> str:
    return bits + "0" * key.tail_bits


def cascade_encrypt(key: CascadeKey, data: str) -> str:
    """Stage 1, then S-box and P-box per symbol, then stage 2, and so on.

    All stages start from their initial state. Append :func:`terminate`'s tail
    first if the result will be Viterbi-decoded.
    """
    if len(data) % key.k:
        raise LengthError(f"{len(data)} bits is not a multiple of k={key.k}",
                          stage="convcrypt")
    return key.transducer.encode(data)


def cascade_decrypt(key: CascadeKey, data: str) -> str:
    """Exact inverse of :func:`cascade_encrypt` for rate-1 invertible cascades.

    Raises:
        RequiresViterbiError: if any stage is redundant or not invertible.
    """
    for i, stage in enumerate(key.stages):
        if not stage.invertible:
            raise RequiresViterbiError(
                f"stage {i + 1} ({stage.n},{stage.k}) is not algebraically invertible;"
                " decode with crosslayer.viterbi.cascade_decode", stage="convcrypt")
    bits = data
    for i in range(len(key.stages) - 1, -1, -1):
        bits = key.stages[i].decode_exact(bits)
        if i:
            sbox, pbox = key.interstage[i - 1]
            syms = bits_to_symbols(bits, sbox.width)
            bits = symbols_to_bits(
                (sbox.apply(pbox.apply(s, inverse=True), inverse=True) for s in syms),
                sbox.width)
    return bits


def _random_partition(rng: np.random.Generator, size: int, sets: list[int],
                      cuts: int) -> list[tuple[int, int, int]]:
    points = sorted(int(p) for p in rng.choice(np.arange(1, size), size=cuts, replace=False))
    bounds = [0, *points, size]
    return [(lo, hi - 1, int(rng.choice(sets))) for lo, hi in zip(bounds, bounds[1:])]


def random_cascade(seed: int, *, stages: int = 2, k: int = 8, memory: int = 2,
                   sets: int = 2, box_width: int = 2) -> CascadeKey:
    """Seeded rate-1 cascade: invertible ``G0`` per set, random partitions and boxes.

    Input 0 always leads to set 1 (the initial set) so zero input flushes.
    """
    rng = np.random.default_rng(seed)
    set_ids = list(range(1, sets + 1))
    stage_list = []
    for _ in range(stages):
        gens = {}
        for s in set_ids:
            while True:
                g0 = [int(r) for r in rng.integers(0, 1 << k, size=k)]
                if gf2_rank(g0) == k:
                    break
            rest = [[int(r) for r in rng.integers(0, 1 << k, size=k)] for _ in range(memory)]
            gens[s] = [tuple(g0), *map(tuple, rest)]
        trans = {s: _random_partition(rng, 1 << k, set_ids, min(sets * 4, (1 << k) - 1))
                 for s in set_ids}
        for ranges in trans.values():
            lo, hi, _ = ranges[0]
            ranges[0] = (lo, hi, 1)
        stage_list.append(LinearTransducer(k, k, gens, trans, 1))
    inter = []
    for _ in range(stages - 1):
        boxes = tuple(tuple(int(v) for v in rng.permutation(1 << box_width))
                      for _ in range(k // box_width))
        perm = tuple(int(v) + 1 for v in rng.permutation(k))
        inter.append((SBoxLayer(boxes, box_width), PBoxLayer(perm)))
    return CascadeKey(tuple(stage_list), tuple(inter), name=f"random:{seed}")


# Key-space sizes. Each closed form below is checked against an explicit
# enumerator of the keys it counts.

def connection_key_count(n: int, memory: int) -> int:
    """Register-cell to adder hookups, one on/off choice per cell: ``2**(n*L)``."""
    return 1 << (n * memory)


def iter_connection_keys(n: int, memory: int) -> Iterator[tuple[int, ...]]:
    return product((0, 1), repeat=n * memory)


def transition_key_count(k: int) -> int:
    """Switching thresholds over the ``2**k`` input symbols."""
    return 1 << k


def iter_transition_keys(k: int) -> Iterator[list[tuple[int, int, int]]]:
    """Keys of the stay-below / switch-at-or-above form used by the demo key."""
    size = 1 << k
    for t in range(size):
        yield [(0, t - 1, 1), (t, size - 1, 2)] if t else [(0, size - 1, 2)]


def sbox_key_count(w: int) -> int:
    """Binary ``w x w`` shuffle matrices: ``2**(w*w)``."""
    return 1 << (w * w)


def iter_sbox_keys(w: int) -> Iterator[tuple[int, ...]]:
    return product(range(1 << w), repeat=w)


def pbox_key_count(n: int) -> int:
    """Interconnects sending each of the first ``n-1`` inputs to another line."""
    return (n - 1) ** (n - 1)


def iter_pbox_keys(n: int) -> Iterator[tuple[int, ...]]:
    choices = [[j for j in range(1, n + 1) if j != i] for i in range(1, n)]
    return product(*choices)


def sbox_bijection_count(w: int) -> int:
    return factorial(1 << w)


def pbox_bijection_count(n: int) -> int:
    return factorial(n)
