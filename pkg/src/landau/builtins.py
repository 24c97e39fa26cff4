"""Registry of built-in diagrams.

The named multi-loop topologies ship as JSON files in ``diagrams/``; the
one-loop family ``An:k`` and the banana family ``BE:k`` are generated.
Edge order fixes the Schwinger-variable labels, and the nodes list fixes
which vertex carries each external leg; both conventions are documented in
the README and are the ones all tabulated reference values assume.
"""

from __future__ import annotations

import json
from importlib import resources

from .diagram import Diagram, load_diagram

_NAMED = ("par", "acn", "env", "npltrb", "tdetri", "debox", "tdebox",
          "pltrb", "dbox", "pentb")


def n_gon(n: int) -> Diagram:
    """One-loop cycle with n legs, one per vertex; edge e = (e-1, e)."""
    if n < 2:
        raise ValueError("n-gon needs at least 2 legs")
    edges = [[n, 1]] + [[i, i + 1] for i in range(1, n)]
    return Diagram(tuple(tuple(e) for e in edges), tuple(range(1, n + 1)),
                   name=f"A{n}")


def banana(E: int) -> Diagram:
    """E parallel edges between two vertices, two legs on each side."""
    if E < 2:
        raise ValueError("banana needs at least 2 edges")
    return Diagram(tuple((1, 2) for _ in range(E)), (1, 1, 2, 2), name=f"B{E}")


def _load_named(name: str) -> Diagram:
    path = resources.files("landau").joinpath(f"diagrams/{name}.json")
    return load_diagram(path.read_text(encoding="utf8"), name=name)


def builtin_names() -> list[str]:
    return list(_NAMED) + ["An:<n>", "BE:<E>"]


def get_diagram(name: str) -> Diagram:
    """Resolve 'par', 'acn', ..., 'An:5', 'BE:3', 'A5', 'B3'."""
    name = name.strip()
    if name.startswith("builtin:"):
        name = name[len("builtin:"):]
    if name in _NAMED:
        return _load_named(name)
    for prefix, maker in (("An:", n_gon), ("BE:", banana)):
        if name.startswith(prefix):
            return maker(int(name[len(prefix):]))
    if len(name) >= 2 and name[0] in "AB" and name[1:].isdigit():
        return (n_gon if name[0] == "A" else banana)(int(name[1:]))
    raise KeyError(f"unknown built-in diagram {name!r}; "
                   f"available: {', '.join(builtin_names())}")
