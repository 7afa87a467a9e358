"""NRE evaluation over graph databases."""

from __future__ import annotations

from collections import defaultdict, deque
from functools import lru_cache

from .graph import GraphDb, KBranchTree
from .syntax import Alt, Atom, Concat, Epsilon, Nest, Nre, Star


def _relation(e: Nre, g: GraphDb) -> dict:
    """``e`` over ``g`` as an adjacency map node -> set of nodes (absent key = no pairs)."""
    if isinstance(e, Epsilon):
        return {u: {u} for u in g.nodes}
    if isinstance(e, Atom):
        rel = defaultdict(set)
        for u in g.nodes:
            targets = g.step(u, e.symbol)
            if targets:
                rel[u].update(targets)
        return rel
    if isinstance(e, Concat):
        left, right = _relation(e.left, g), _relation(e.right, g)
        rel = {}
        for u, mids in left.items():
            out = set()
            for w in mids:
                out |= right.get(w, set())
            if out:
                rel[u] = out
        return rel
    if isinstance(e, Alt):
        rel = defaultdict(set)
        for part in (_relation(e.left, g), _relation(e.right, g)):
            for u, vs in part.items():
                rel[u] |= vs
        return rel
    if isinstance(e, Star):
        step = _relation(e.inner, g)
        rel = {}
        for u in g.nodes:
            seen = {u}
            work = [u]
            while work:
                for v in step.get(work.pop(), ()):
                    if v not in seen:
                        seen.add(v)
                        work.append(v)
            rel[u] = seen
        return rel
    if isinstance(e, Nest):
        inner = _relation(e.inner, g)
        return {u: {u} for u, vs in inner.items() if vs}
    raise TypeError(f"not an NRE: {e!r}")


def eval_nre(e: Nre, g: GraphDb) -> frozenset:
    return frozenset((u, v) for u, vs in _relation(e, g).items() for v in vs)


class _Thompson:
    """Epsilon-NFA over edge symbols and node tests, one per nesting level."""

    def __init__(self, e: Nre):
        self.moves = defaultdict(list)  # state -> [(kind, payload, target)]
        self.tests = []  # nested sub-automata, indexed by test payload
        self.count = 0
        self.start, self.end = self._build(e)

    def _new(self) -> int:
        self.count += 1
        return self.count - 1

    def _build(self, e: Nre) -> tuple[int, int]:
        s, t = self._new(), self._new()
        if isinstance(e, Epsilon):
            self.moves[s].append(("eps", None, t))
        elif isinstance(e, Atom):
            self.moves[s].append(("sym", e.symbol, t))
        elif isinstance(e, Concat):
            s1, t1 = self._build(e.left)
            s2, t2 = self._build(e.right)
            self.moves[s].append(("eps", None, s1))
            self.moves[t1].append(("eps", None, s2))
            self.moves[t2].append(("eps", None, t))
        elif isinstance(e, Alt):
            for part in (e.left, e.right):
                s1, t1 = self._build(part)
                self.moves[s].append(("eps", None, s1))
                self.moves[t1].append(("eps", None, t))
        elif isinstance(e, Star):
            s1, t1 = self._build(e.inner)
            self.moves[s] += [("eps", None, s1), ("eps", None, t)]
            self.moves[t1] += [("eps", None, s1), ("eps", None, t)]
        elif isinstance(e, Nest):
            self.tests.append(_Thompson(e.inner))
            self.moves[s].append(("test", len(self.tests) - 1, t))
        else:
            raise TypeError(f"not an NRE: {e!r}")
        return s, t

    def resolve(self, g: GraphDb) -> list:
        """Per nested test, a bytearray over node ids marking the nodes that satisfy it."""
        return [sub.domain(g) for sub in self.tests]

    def _search(self, g: GraphDb, seeds, edges, forward: bool):
        """Generic BFS over (node id, state) encoded as ``node * count + state``."""
        tests = self.resolve(g)
        index = g.dense_index
        n, count = len(g.node_ids), self.count
        empty = [()] * n
        adj = defaultdict(list)  # state -> [(kind, test or neighbour table, state)]
        for p, moves in edges.items():
            for kind, payload, q in moves:
                if kind == "sym":
                    s = payload if forward else payload.inv()
                    adj[p].append((kind, index.get((s.base, s.inverse), empty), q))
                elif kind == "test":
                    adj[p].append((kind, tests[payload], q))
                else:
                    adj[p].append((kind, None, q))
        seen = bytearray(n * count)
        work = deque()
        for x, p in seeds:
            c = x * count + p
            if not seen[c]:
                seen[c] = 1
                work.append(c)
        while work:
            c = work.popleft()
            x, p = divmod(c, count)
            for kind, table, q in adj.get(p, ()):
                if kind == "eps":
                    succ = (x,)
                elif kind == "test":
                    succ = (x,) if table[x] else ()
                else:
                    succ = table[x]
                for y in succ:
                    d = y * count + q
                    if not seen[d]:
                        seen[d] = 1
                        work.append(d)
            yield x, p

    def domain(self, g: GraphDb) -> bytearray:
        """Nodes with at least one outgoing pair: backward search from every (node, end)."""
        back = defaultdict(list)
        for p, moves in self.moves.items():
            for kind, payload, q in moves:
                back[q].append((kind, payload, p))
        out = bytearray(len(g.node_ids))
        seeds = ((x, self.end) for x in range(len(out)))
        for x, p in self._search(g, seeds, back, forward=False):
            if p == self.start:
                out[x] = 1
        return out

    def reaches(self, g: GraphDb, u, v) -> bool:
        ids = g.node_ids
        target = (ids[v], self.end)
        return any(c == target for c in self._search(g, [(ids[u], self.start)], self.moves, forward=True))


def eval_check(e: Nre, g: GraphDb, u, v) -> bool:
    """Is (u, v) in the relation of ``e`` over ``g``?  Linear in |g| * |e|."""
    for x in (u, v):
        if x not in g.nodes:
            raise KeyError(f"unknown node {x!r}")
    return _Thompson(e).reaches(g, u, v)


# -- canonical k-branch semipaths ----------------------------------------------


def is_canonical(t: KBranchTree, e: Nre) -> bool:
    labels = t.labels

    def split(nodes: frozenset, w: tuple) -> tuple[frozenset, frozenset]:
        n = len(w)
        below = frozenset(x for x in nodes if x[:n] == w)
        return (nodes - below) | {w}, below

    @lru_cache(maxsize=None)
    def canon(e: Nre, nodes: frozenset, root: tuple) -> bool:
        if isinstance(e, Epsilon):
            return len(nodes) == 1
        if isinstance(e, Atom):
            if len(nodes) != 2:
                return False
            (other,) = nodes - {root}
            return other[:-1] == root and labels.get(other) == e.symbol
        if isinstance(e, Alt):
            return canon(e.left, nodes, root) or canon(e.right, nodes, root)
        if isinstance(e, Nest):
            return canon(e.inner, nodes, root)
        if isinstance(e, Concat):
            for w in sorted(nodes):
                top, bottom = split(nodes, w)
                if canon(e.left, top, root) and canon(e.right, bottom, w):
                    return True
            return False
        if isinstance(e, Star):
            if len(nodes) == 1 or canon(e.inner, nodes, root):
                return True
            for w in sorted(nodes - {root}):
                top, bottom = split(nodes, w)
                if canon(e.inner, top, root) and canon(e, bottom, w):
                    return True
            return False
        raise TypeError(f"not an NRE: {e!r}")

    return canon(e, t.domain, (1,))
