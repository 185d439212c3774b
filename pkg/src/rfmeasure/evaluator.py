"""Per-instant labeling of traces with LTLf formulas.

Labels are packed into Python ints: bit ``i - 1`` is the truth value at instant
``i``. Every subformula is labeled once per trace; boolean nodes are single
bitwise operations, next/yesterday are shifts, eventually/once and their duals
are prefix/suffix masks, and until/since use a doubling scheme that needs
O(log n) word-parallel steps.

``eval_at`` is a deliberately naive transcription of the semantic clauses and
serves as the oracle the bitset engine is tested against.
"""
from __future__ import annotations

import os
import weakref
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

from .formula import (
    Always, And, Atom, ConstFalse, ConstTrue, Eventually, Formula, Historically,
    Implies, Next, Not, Once, Or, Since, TraceEnd, TraceStart, Until, Yesterday,
    children, walk,
)
from .logmodel import EventLog, Trace


@dataclass(frozen=True)
class LabelSequence:
    bits: int
    length: int

    def __len__(self):
        return self.length

    def __getitem__(self, i: int) -> int:
        if i < 0:
            i += self.length
        if not 0 <= i < self.length:
            raise IndexError(i)
        return (self.bits >> i) & 1

    def __iter__(self):
        return (self[i] for i in range(self.length))

    def to_list(self) -> list:
        return list(self)

    def count(self) -> int:
        return self.bits.bit_count()

    def reversed(self) -> "LabelSequence":
        return LabelSequence(int(format(self.bits, f"0{self.length}b")[::-1], 2), self.length)

    @classmethod
    def from_list(cls, values) -> "LabelSequence":
        bits = 0
        for i, v in enumerate(values):
            if v:
                bits |= 1 << i
        return cls(bits, len(values))

    def __str__(self):
        return "<" + ",".join(str(b) for b in self) + ">"


def _until(a: int, b: int, n: int) -> int:
    u, g, s = b, a, 1
    while s < n and g:
        u |= g & (u >> s)
        g &= g >> s
        s <<= 1
    return u


def _since(a: int, b: int, n: int, full: int) -> int:
    u, g, s = b, a, 1
    while s < n and g:
        u |= g & (u << s) & full
        g &= g << s
        s <<= 1
    return u


def _label_node(node, kids, masks, n, full):
    if isinstance(node, Atom):
        return masks.get(node.symbol, 0)
    if isinstance(node, ConstTrue):
        return full
    if isinstance(node, ConstFalse):
        return 0
    if isinstance(node, TraceStart):
        return 1
    if isinstance(node, TraceEnd):
        return 1 << (n - 1)
    if isinstance(node, Not):
        return full & ~kids[0]
    if isinstance(node, And):
        return kids[0] & kids[1]
    if isinstance(node, Or):
        return kids[0] | kids[1]
    if isinstance(node, Implies):
        return (full & ~kids[0]) | kids[1]
    if isinstance(node, Next):
        return kids[0] >> 1
    if isinstance(node, Yesterday):
        return (kids[0] << 1) & full
    if isinstance(node, Eventually):
        x = kids[0]
        return (1 << x.bit_length()) - 1
    if isinstance(node, Once):
        x = kids[0]
        return full & ~((x & -x) - 1) if x else 0
    if isinstance(node, Always):
        y = full & ~kids[0]
        return full & ~((1 << y.bit_length()) - 1)
    if isinstance(node, Historically):
        y = full & ~kids[0]
        return (y & -y) - 1 if y else full
    if isinstance(node, Until):
        return _until(kids[0], kids[1], n)
    if isinstance(node, Since):
        return _since(kids[0], kids[1], n, full)
    raise TypeError(f"not a formula node: {node!r}")


def label_bits(f: Formula, t: Trace) -> int:
    """Bitmask of the instants of ``t`` satisfying ``f``."""
    n = len(t)
    full = (1 << n) - 1
    masks = t.symbol_masks
    memo = {}
    for node in walk(f):
        if node in memo:
            continue
        memo[node] = _label_node(node, [memo[c] for c in children(node)], masks, n, full)
    return memo[f]


_cached_label_bits = lru_cache(maxsize=1 << 16)(label_bits)


def label_formula(f: Formula, t: Trace) -> LabelSequence:
    return LabelSequence(_cached_label_bits(f, t), len(t))


def parallel_map(fn, items, threads: int | None = None) -> list:
    """``[fn(x) for x in items]``, on a thread pool when ``threads > 1``; order is kept."""
    threads = threads or default_threads()
    items = list(items)
    if threads <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def label_many(f: Formula, traces, threads: int | None = None) -> list:
    return parallel_map(lambda t: _cached_label_bits(f, t), traces, threads)


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get("RFMEASURE_THREADS", "1")))
    except ValueError:
        return 1


# -- whole-log labeling ---------------------------------------------------------

class PackedLog:
    """All distinct traces of a log laid end to end in one bitset.

    ``first``/``last`` mark trace boundaries; every temporal step is masked so
    nothing crosses from one trace into the next. Entry ``k`` occupies bits
    ``offsets[k] .. offsets[k] + lengths[k] - 1``.
    """

    _MEMO_LIMIT = 4096

    def __init__(self, log: EventLog):
        self.log = log
        self.lengths = [len(t) for t, _ in log.entries]
        self.offsets = []
        atoms, first, last, off = {}, 0, 0, 0
        for t, _ in log.entries:
            self.offsets.append(off)
            for sym, m in t.symbol_masks.items():
                atoms[sym] = atoms.get(sym, 0) | (m << off)
            first |= 1 << off
            off += len(t)
            last |= 1 << (off - 1)
        self.size = off
        self.full = (1 << off) - 1
        self.first, self.last = first, last
        self.max_len = max(self.lengths)
        self.atoms = atoms
        # (length, multiplicity) -> bits of every entry with that shape
        groups = {}
        for (t, mult), off_k in zip(log.entries, self.offsets):
            key = (len(t), mult)
            groups[key] = groups.get(key, 0) | (((1 << len(t)) - 1) << off_k)
        self.groups = sorted(groups.items())
        self._memo = {}

    def label(self, f: Formula) -> int:
        memo = self._memo
        if f in memo:
            return memo[f]
        if len(memo) > self._MEMO_LIMIT:
            memo.clear()
        for node in walk(f):
            if node not in memo:
                memo[node] = self._node(node, [memo[c] for c in children(node)])
        return memo[f]

    def _until(self, a, b):
        u, g, s = b, a & ~self.last, 1
        while s < self.max_len and g:
            u |= g & (u >> s)
            g &= g >> s
            s <<= 1
        return u

    def _since(self, a, b):
        u, g, s = b, a & ~self.first, 1
        while s < self.max_len and g:
            u |= g & (u << s)
            g &= g << s
            s <<= 1
        return u

    def _node(self, node, kids):
        full = self.full
        if isinstance(node, Atom):
            return self.atoms.get(node.symbol, 0)
        if isinstance(node, ConstTrue):
            return full
        if isinstance(node, ConstFalse):
            return 0
        if isinstance(node, TraceStart):
            return self.first
        if isinstance(node, TraceEnd):
            return self.last
        if isinstance(node, Not):
            return full & ~kids[0]
        if isinstance(node, And):
            return kids[0] & kids[1]
        if isinstance(node, Or):
            return kids[0] | kids[1]
        if isinstance(node, Implies):
            return (full & ~kids[0]) | kids[1]
        if isinstance(node, Next):
            return (kids[0] >> 1) & ~self.last
        if isinstance(node, Yesterday):
            return (kids[0] << 1) & full & ~self.first
        if isinstance(node, Eventually):
            return self._until(full, kids[0])
        if isinstance(node, Once):
            return self._since(full, kids[0])
        if isinstance(node, Always):
            return full & ~self._until(full, full & ~kids[0])
        if isinstance(node, Historically):
            return full & ~self._since(full, full & ~kids[0])
        if isinstance(node, Until):
            return self._until(kids[0], kids[1])
        if isinstance(node, Since):
            return self._since(kids[0], kids[1])
        raise TypeError(f"not a formula node: {node!r}")

    def segment(self, bits: int, k: int) -> int:
        """Bits of entry ``k`` alone."""
        return (bits >> self.offsets[k]) & ((1 << self.lengths[k]) - 1)

    def length_tallies(self, bits: int) -> dict:
        """``{n: sum of multiplicity * popcount}`` over entries of length ``n``."""
        out = {}
        for (n, mult), mask in self.groups:
            c = (bits & mask).bit_count()
            if c:
                out[n] = out.get(n, 0) + mult * c
        return out


_PACKED = weakref.WeakKeyDictionary()


def packed(log: EventLog) -> PackedLog:
    pl = _PACKED.get(log)
    if pl is None:
        pl = _PACKED[log] = PackedLog(log)
    return pl


# -- oracle -----------------------------------------------------------------

def eval_at(f: Formula, t: Trace, i: int, _memo=None) -> bool:
    """Truth of ``f`` at 1-based instant ``i`` by direct structural recursion.

    Results are memoised per (subformula, instant) only so that nested
    temporal operators stay polynomial; the clauses themselves are literal.
    """
    n = len(t)
    if not 1 <= i <= n:
        raise IndexError(f"instant {i} outside 1..{n}")
    return _Oracle(t.activities, _memo if _memo is not None else {}).holds(f, i)


def eval_all(f: Formula, t: Trace) -> list:
    memo = {}
    return [int(eval_at(f, t, i, memo)) for i in range(1, len(t) + 1)]


class _Oracle:
    def __init__(self, acts, memo):
        self.acts, self.n, self.memo = acts, len(acts), memo

    def holds(self, f, i) -> bool:
        key = (f, i)
        v = self.memo.get(key)
        if v is None:
            v = self.memo[key] = self._clause(f, i)
        return v

    def _clause(self, f, i) -> bool:
        n, h = self.n, self.holds
        if isinstance(f, ConstTrue):
            return True
        if isinstance(f, ConstFalse):
            return False
        if isinstance(f, Atom):
            return self.acts[i - 1] == f.symbol
        if isinstance(f, TraceStart):
            return i == 1
        if isinstance(f, TraceEnd):
            return i == n
        if isinstance(f, Not):
            return not h(f.f, i)
        if isinstance(f, And):
            return h(f.f1, i) and h(f.f2, i)
        if isinstance(f, Or):
            return h(f.f1, i) or h(f.f2, i)
        if isinstance(f, Implies):
            return (not h(f.f1, i)) or h(f.f2, i)
        if isinstance(f, Next):
            return i < n and h(f.f, i + 1)
        if isinstance(f, Yesterday):
            return i > 1 and h(f.f, i - 1)
        if isinstance(f, Until):
            return any(h(f.f2, j) and all(h(f.f1, k) for k in range(i, j))
                       for j in range(i, n + 1))
        if isinstance(f, Since):
            return any(h(f.f2, j) and all(h(f.f1, k) for k in range(j + 1, i + 1))
                       for j in range(1, i + 1))
        if isinstance(f, Eventually):
            return any(h(f.f, j) for j in range(i, n + 1))
        if isinstance(f, Once):
            return any(h(f.f, j) for j in range(1, i + 1))
        if isinstance(f, Always):
            return all(h(f.f, j) for j in range(i, n + 1))
        if isinstance(f, Historically):
            return all(h(f.f, j) for j in range(1, i + 1))
        raise TypeError(f"not a formula node: {f!r}")
