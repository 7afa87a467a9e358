"""Nested regular expressions over graph databases: evaluation and containment."""

from .containment import contains, gen_contains, sp_contains
from .evaluate import eval_check, eval_nre, is_canonical
from .graph import GraphDb, KBranchTree, Semipath, load_graph
from .syntax import NreSyntaxError, parse, render
from .verdict import Verdict

__all__ = [
    "GraphDb", "KBranchTree", "NreSyntaxError", "Semipath", "Verdict", "contains", "eval_check", "eval_nre",
    "gen_contains", "is_canonical", "load_graph", "parse", "render", "sp_contains",
]
