"""Brute-force ground truth: literal semantics, exhaustive graph enumeration, containment by search.

Nothing here is tuned for speed; it only has to be obviously right.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

from .graph import GraphDb, KBranchTree, Semipath
from .syntax import Alt, Atom, Concat, Epsilon, Nest, Nre, Star, Symbol
from .verdict import CONTAINED, NOT_CONTAINED, Verdict


def naive_eval(e: Nre, g: GraphDb) -> frozenset:
    if isinstance(e, Epsilon):
        return frozenset((u, u) for u in g.nodes)
    if isinstance(e, Atom):
        a = e.symbol
        if a.inverse:
            return frozenset((v, u) for u, b, v in g.edges if b == a.base)
        return frozenset((u, v) for u, b, v in g.edges if b == a.base)
    if isinstance(e, Concat):
        r1, r2 = naive_eval(e.left, g), naive_eval(e.right, g)
        return frozenset((u, v) for u, w in r1 for w2, v in r2 if w == w2)
    if isinstance(e, Alt):
        return naive_eval(e.left, g) | naive_eval(e.right, g)
    if isinstance(e, Star):
        r = naive_eval(e.inner, g)
        total = naive_eval(Epsilon(), g)
        power = total
        while True:
            power = frozenset((u, v) for u, w in power for w2, v in r if w == w2)
            grown = total | power
            if grown == total:
                return total
            total = grown
    if isinstance(e, Nest):
        r = naive_eval(e.inner, g)
        return frozenset((u, u) for u, _ in r)
    raise TypeError(f"not an NRE: {e!r}")


@dataclass(frozen=True)
class EnumSpec:
    labels: tuple = ("a", "b")
    max_size: int = 3  # letters for semipaths, edges for trees
    k: int = 1
    inverses: bool = True

    def __post_init__(self):
        if self.max_size < 0 or self.k < 1:
            raise ValueError("bounds must be non-negative and k at least 1")

    def symbols(self) -> list:
        out = []
        for a in self.labels:
            out.append(Symbol(a))
            if self.inverses:
                out.append(Symbol(a, True))
        return out


def enum_semipaths(spec: EnumSpec) -> Iterator[Semipath]:
    symbols = spec.symbols()
    for n in range(spec.max_size + 1):
        for letters in itertools.product(symbols, repeat=n):
            yield Semipath.canonical(letters)


def kbranch_domains(k: int, max_edges: int) -> list:
    """All k-branch domains with at most ``max_edges`` edges, smallest first."""
    start = frozenset({(1,)})
    seen = {start}
    frontier = [start]
    for _ in range(max_edges):
        nxt = []
        for dom in frontier:
            for x in dom:
                for d in range(x[-1], k + 1):
                    y = x + (d,)
                    if y not in dom:
                        grown = dom | {y}
                        if grown not in seen:
                            seen.add(grown)
                            nxt.append(grown)
        frontier = nxt

    def valid(dom):
        return all(x + (x[-1],) in dom for x in dom if any(len(y) == len(x) + 1 and y[:-1] == x for y in dom))

    out = [d for d in seen if valid(d)]
    return sorted(out, key=lambda d: (len(d), sorted(d)))


def enum_kbranch(spec: EnumSpec) -> Iterator[KBranchTree]:
    symbols = spec.symbols()
    for dom in kbranch_domains(spec.k, spec.max_size):
        others = sorted(dom - {(1,)})
        for labs in itertools.product(symbols, repeat=len(others)):
            yield KBranchTree(spec.k, dict(zip(others, labs)))


def violation(e1: Nre, e2: Nre, g: GraphDb):
    """Some pair in e1 but not e2 over ``g`` (deterministic choice), or None."""
    extra = naive_eval(e1, g) - naive_eval(e2, g)
    return min(extra) if extra else None


def oracle_contains(e1: Nre, e2: Nre, spec: EnumSpec, mode: str = "semipath") -> Verdict:
    if mode == "semipath":
        for sp in enum_semipaths(spec):
            g = sp.to_graph()
            pair = violation(e1, e2, g)
            if pair:
                return Verdict(NOT_CONTAINED, g, pair, shape=sp, bounded=True)
    elif mode == "kbranch":
        for t in enum_kbranch(spec):
            g = t.to_graph()
            pair = violation(e1, e2, g)
            if pair:
                return Verdict(NOT_CONTAINED, g, pair, shape=t, bounded=True)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return Verdict(CONTAINED, bounded=True, note=f"checked {mode} graphs up to size {spec.max_size}")
