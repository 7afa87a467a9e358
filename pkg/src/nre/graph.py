"""Graph databases, semipaths and k-branch semipaths with their string encoding."""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Optional, Sequence, Union

from .syntax import Symbol, check_label

LEAF = "$"
S_MARK = "S"
E_MARK = "E"
START = "%"
END = "&"

Label = Union[Symbol, str]  # Symbol, or one of LEAF / S_MARK / E_MARK
Node = tuple  # k-branch element, e.g. (1, 1, 2)
Token = tuple  # (class, label, class)


class GraphFormatError(ValueError):
    pass


@dataclass(frozen=True)
class GraphDb:
    nodes: frozenset = frozenset()
    edges: frozenset = frozenset()  # (source, base label, target)

    def __post_init__(self):
        object.__setattr__(self, "nodes", frozenset(self.nodes))
        object.__setattr__(self, "edges", frozenset(self.edges))
        for u, a, v in self.edges:
            if u not in self.nodes or v not in self.nodes:
                raise ValueError(f"edge ({u}, {a}, {v}) has an endpoint outside the node set")
            check_label(a)

    @classmethod
    def from_edges(cls, edges: Iterable[tuple], nodes: Iterable = ()) -> GraphDb:
        edges = frozenset(edges)
        all_nodes = set(nodes)
        for u, _, v in edges:
            all_nodes.update((u, v))
        return cls(frozenset(all_nodes), edges)

    def __len__(self):
        return len(self.edges)

    @cached_property
    def out_index(self) -> dict:
        idx = defaultdict(list)
        for u, a, v in self.edges:
            idx[u, a].append(v)
        return dict(idx)

    @cached_property
    def in_index(self) -> dict:
        idx = defaultdict(list)
        for u, a, v in self.edges:
            idx[v, a].append(u)
        return dict(idx)

    @cached_property
    def node_ids(self) -> dict:
        """Node -> dense integer id (for array-based searches)."""
        return {u: i for i, u in enumerate(self.nodes)}

    @cached_property
    def dense_index(self) -> dict:
        """(base label, inverse?) -> per-node-id lists of neighbour ids."""
        ids = self.node_ids
        n = len(ids)
        idx = {}
        for u, a, v in self.edges:
            for key, x, y in (((a, False), u, v), ((a, True), v, u)):
                table = idx.get(key)
                if table is None:
                    table = idx[key] = [[] for _ in range(n)]
                table[ids[x]].append(ids[y])
        return idx

    def step(self, node, symbol: Symbol) -> list:
        """Nodes reachable from ``node`` over one ``symbol`` edge."""
        index = self.in_index if symbol.inverse else self.out_index
        return index.get((node, symbol.base), [])

    def step_back(self, node, symbol: Symbol) -> list:
        return self.step(node, symbol.inv())

    def issubgraph(self, other: GraphDb) -> bool:
        return self.nodes <= other.nodes and self.edges <= other.edges

    def to_tsv(self) -> str:
        lines = [f"{u}\t{a}\t{v}" for u, a, v in sorted(self.edges)]
        covered = {u for u, _, _ in self.edges} | {v for _, _, v in self.edges}
        # isolated nodes as comments so the file still reloads to the same edge set
        lines += [f"# node\t{n}" for n in sorted(self.nodes - covered)]
        return "\n".join(lines) + ("\n" if lines else "")


def load_graph(text: str) -> GraphDb:
    """Parse a ``source<TAB>label<TAB>target`` edge list (``#`` starts a comment line).

    Comment lines of the form ``# node<TAB>id`` declare isolated nodes.
    """
    edges, nodes = set(), set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.rstrip("\r\n")
        if not line.strip():
            continue
        if line.lstrip().startswith("#"):
            parts = line.lstrip("# ").split("\t")
            if len(parts) == 2 and parts[0] == "node":
                nodes.add(parts[1])
            continue
        parts = line.split("\t")
        if len(parts) != 3 or not all(parts):
            raise GraphFormatError(f"line {lineno}: expected source<TAB>label<TAB>target, got {raw!r}")
        u, a, v = parts
        try:
            check_label(a)
        except ValueError as exc:
            raise GraphFormatError(f"line {lineno}: {exc}") from None
        edges.add((u, a, v))
    return GraphDb.from_edges(edges, nodes)


# -- semipaths ---------------------------------------------------------------


@dataclass(frozen=True)
class Semipath:
    nodes: tuple
    letters: tuple  # of Symbol

    def __post_init__(self):
        if len(self.nodes) != len(self.letters) + 1:
            raise ValueError("a semipath has exactly one more node than letters")
        if len(set(self.nodes)) != len(self.nodes):
            raise ValueError("semipath nodes must be pairwise distinct")

    @classmethod
    def canonical(cls, letters: Sequence[Symbol]) -> Semipath:
        return cls(tuple(f"u{i}" for i in range(1, len(letters) + 2)), tuple(letters))

    def to_graph(self) -> GraphDb:
        edges = set()
        for u, a, v in zip(self.nodes, self.letters, self.nodes[1:]):
            edges.add((v, a.base, u) if a.inverse else (u, a.base, v))
        return GraphDb.from_edges(edges, self.nodes)

    def to_tree(self) -> KBranchTree:
        """The same shape as a 1-branch semipath rooted at the first node."""
        return KBranchTree(1, {(1,) * (i + 2): a for i, a in enumerate(self.letters)})


def resembles_semipath(g: GraphDb) -> Optional[Semipath]:
    if not g.nodes:
        return None
    if len(g.edges) != len(g.nodes) - 1:
        return None
    adj = defaultdict(list)
    for u, a, v in g.edges:
        if u == v:
            return None
        adj[u].append((v, Symbol(a)))
        adj[v].append((u, Symbol(a, True)))
    if any(len(nbrs) > 2 for nbrs in adj.values()):
        return None
    if len(g.nodes) == 1:
        return Semipath(tuple(g.nodes), ())
    ends = sorted(n for n in g.nodes if len(adj[n]) == 1)
    if len(ends) != 2:
        return None
    nodes, letters = [ends[0]], []
    prev = None
    while True:
        nxt = [(v, s) for v, s in adj[nodes[-1]] if v != prev]
        if not nxt:
            break
        prev = nodes[-1]
        v, s = nxt[0]
        if v in nodes:
            return None
        nodes.append(v)
        letters.append(s)
    if len(nodes) != len(g.nodes):
        return None
    return Semipath(tuple(nodes), tuple(letters))


# -- k-branch semipaths --------------------------------------------------------


def node_name(node: Node) -> str:
    return "".join(str(d) for d in node)


def parse_node(text: str) -> Node:
    if not text.isdigit():
        raise ValueError(f"bad k-branch element {text!r}")
    return tuple(int(c) for c in text)


@dataclass(frozen=True)
class KBranchTree:
    """A k-branch semipath: ``labels`` maps every non-root element to its incoming edge label."""

    k: int
    labels: Mapping = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "labels", dict(self.labels))
        problem = self.problem()
        if problem:
            raise ValueError(f"invalid {self.k}-branch semipath: {problem}")

    def problem(self) -> Optional[str]:
        if self.k < 1:
            return "k must be at least 1"
        domain = self.domain
        for x in domain:
            if x[0] != 1:
                return f"element {node_name(x)} does not start with 1"
            if any(d < 1 or d > self.k for d in x):
                return f"element {node_name(x)} uses a digit outside 1..{self.k}"
            if any(a > b for a, b in zip(x, x[1:])):
                return f"element {node_name(x)} has a decreasing digit pair"
            if len(x) > 1 and x[:-1] not in domain:
                return f"domain is not prefix closed at {node_name(x)}"
        for x in domain:
            if self.children(x) and x + (x[-1],) not in domain:
                return f"element {node_name(x)} has children but no same-class child"
        for x, lab in self.labels.items():
            if not (isinstance(lab, Symbol) or lab in (S_MARK, E_MARK)):
                return f"bad label {lab!r}"
        return None

    @cached_property
    def domain(self) -> frozenset:
        return frozenset(self.labels) | {(1,)}

    @cached_property
    def _kids(self) -> dict:
        kids = defaultdict(list)
        for x in self.labels:
            if len(x) > 1:
                kids[x[:-1]].append(x)
        return {p: sorted(c) for p, c in kids.items()}

    def children(self, x: Node) -> list:
        return self._kids.get(x, [])

    def edges(self) -> list:
        return sorted((x[:-1], x, lab) for x, lab in self.labels.items())

    def leaves(self) -> list:
        return sorted(x for x in self.domain if not self.children(x))

    def to_graph(self) -> GraphDb:
        edges = set()
        for parent, child, lab in self.edges():
            if not isinstance(lab, Symbol):
                raise ValueError("marker edges have no graph reading; contract them first")
            p, c = node_name(parent), node_name(child)
            edges.add((c, lab.base, p) if lab.inverse else (p, lab.base, c))
        return GraphDb.from_edges(edges, (node_name(x) for x in self.domain))

    def to_json(self) -> str:
        return json.dumps({
            "k": self.k,
            "edges": [{"parent": node_name(p), "child": node_name(c), "label": str(lab)}
                      for p, c, lab in self.edges()],
        })

    @classmethod
    def from_json(cls, text: str) -> KBranchTree:
        data = json.loads(text)
        labels = {}
        for e in data["edges"]:
            child = parse_node(e["child"])
            if parse_node(e["parent"]) != child[:-1]:
                raise ValueError(f"{e['parent']} is not the parent of {e['child']}")
            lab = e["label"]
            labels[child] = lab if lab in (S_MARK, E_MARK) else Symbol.parse(lab)
        return cls(int(data["k"]), labels)


def trans(t: KBranchTree) -> list:
    """Token sequence encoding ``t`` (without the % and & delimiters)."""
    out = []

    def walk(x):
        kids = t.children(x)
        c = x[-1]
        if not kids:
            out.append((c, LEAF, c))
            return
        # same-class child goes last
        for child in [y for y in kids if y[-1] != c] + [x + (c,)]:
            out.append((c, t.labels[child], child[-1]))
            walk(child)

    walk((1,))
    return out


def positions(t: KBranchTree) -> dict:
    """Element -> 1-based index of its first token in the %-delimited word."""
    result = {}
    index = 2

    def walk(x):
        nonlocal index
        result[x] = index
        kids = t.children(x)
        if not kids:
            index += 1
            return
        c = x[-1]
        for child in [y for y in kids if y[-1] != c] + [x + (c,)]:
            index += 1
            walk(child)

    walk((1,))
    return result


def pos(t: KBranchTree, node: Node) -> int:
    table = positions(t)
    if node not in table:
        raise KeyError(f"element {node_name(node)} is not in the domain")
    return table[node]


def render_token(tok) -> str:
    if isinstance(tok, tuple):
        return f"({tok[0]},{tok[1]},{tok[2]})"
    return str(tok)


def render_word(tokens: Iterable, delimit: bool = True) -> str:
    body = "".join(render_token(t) for t in tokens)
    return f"{START}{body}{END}" if delimit else body


def parse_label(text: str) -> Label:
    if text in (LEAF, S_MARK, E_MARK):
        return text
    return Symbol.parse(text)


def parse_word(text: str) -> list:
    """Inverse of ``render_word`` for Gamma-token words; the delimiters are optional."""
    s = text.strip()
    if s.startswith(START):
        s = s[1:]
    if s.endswith(END):
        s = s[:-1]
    tokens = []
    i = 0
    while i < len(s):
        if s[i] != "(":
            raise ValueError(f"expected '(' at offset {i} of {text!r}")
        j = s.index(")", i)
        parts = s[i + 1:j].split(",")
        if len(parts) != 3:
            raise ValueError(f"bad token {s[i:j + 1]!r}")
        tokens.append((int(parts[0]), parse_label(parts[1]), int(parts[2])))
        i = j + 1
    return tokens


def decode(tokens: Sequence, k: Optional[int] = None) -> Optional[KBranchTree]:
    """The k-branch semipath whose encoding is ``tokens``, or None."""
    tokens = list(tokens)
    if not tokens or not all(isinstance(t, tuple) and len(t) == 3 for t in tokens):
        return None
    if k is None:
        k = max(max(t[0], t[2]) for t in tokens if isinstance(t[0], int) and isinstance(t[2], int))
    labels = {}
    i = 0

    def node(x) -> bool:
        nonlocal i
        c = x[-1]
        if i >= len(tokens):
            return False
        if tokens[i] == (c, LEAF, c):
            i += 1
            return True
        last = c
        while i < len(tokens):
            ci, lab, cj = tokens[i]
            if ci != c or lab == LEAF or not (isinstance(cj, int) and c <= cj <= k):
                return False
            if cj != c and cj <= last:
                return False  # side children: strictly ascending classes
            i += 1
            child = x + (cj,)
            labels[child] = lab
            if not node(child):
                return False
            if cj == c:
                return True
            last = cj
        return False

    if not node((1,)) or i != len(tokens):
        return None
    try:
        return KBranchTree(k, labels)
    except ValueError:
        return None


def _graft(t: KBranchTree, u: Node, lab: str) -> tuple[dict, dict]:
    """Give ``u`` a single ``lab`` child that adopts its former subtree."""
    c = u[-1]
    n = len(u)
    rename = {}
    for x in t.domain:
        rename[x] = x[:n] + (c,) + x[n:] if len(x) > n and x[:n] == u else x
    labels = {rename[x]: lab_ for x, lab_ in t.labels.items()}
    labels[u + (c,)] = lab
    return labels, rename


def expand_markers(t: KBranchTree, u: Node, v: Node) -> KBranchTree:
    """T[u -> S, v -> E]."""
    for x in (u, v):
        if x not in t.domain:
            raise KeyError(f"element {node_name(x)} is not in the domain")
    labels, rename = _graft(t, u, S_MARK)
    mid = KBranchTree(t.k, labels)
    # when u == v the E edge goes below the S edge, on the node that kept the children
    target = u + (u[-1],) if u == v else rename[v]
    labels, _ = _graft(mid, target, E_MARK)
    return KBranchTree(t.k, labels)


def _contract(t: KBranchTree, lab: str) -> tuple[KBranchTree, Node]:
    hits = [x for x, l in t.labels.items() if l == lab]
    if len(hits) != 1:
        raise ValueError(f"expected exactly one {lab} edge, found {len(hits)}")
    y = hits[0]
    x = y[:-1]
    if t.children(x) != [y] or y[-1] != x[-1]:
        raise ValueError(f"{lab} edge is not the only child edge of its parent")
    n = len(x)
    labels = {}
    for z, l in t.labels.items():
        if z == y:
            continue
        labels[z[:n] + z[n + 1:] if z[:n + 1] == y else z] = l
    return KBranchTree(t.k, labels), x


def contract_markers(t: KBranchTree) -> tuple[KBranchTree, Node, Node]:
    """Inverse of ``expand_markers``: returns (tree, u, v)."""
    s_edge = next(x for x, l in t.labels.items() if l == S_MARK)
    e_edge = next(x for x, l in t.labels.items() if l == E_MARK)
    if e_edge[:len(s_edge)] == s_edge and len(e_edge) == len(s_edge) + 1:
        # E directly below S: both mark the same node
        t1, x = _contract(t, S_MARK)
        t2, _ = _contract(t1, E_MARK)
        return t2, x, x
    if s_edge[:len(e_edge)] == e_edge and len(s_edge) == len(e_edge) + 1:
        t1, x = _contract(t, E_MARK)
        t2, _ = _contract(t1, S_MARK)
        return t2, x, x
    t1, u = _contract(t, S_MARK)
    # locate the E edge again after renaming
    e_edge = next(x for x, l in t1.labels.items() if l == E_MARK)
    t2, v = _contract(t1, E_MARK)
    n = len(v)
    if u[:n + 1] == e_edge:
        u = u[:n] + u[n + 1:]
    return t2, u, v
