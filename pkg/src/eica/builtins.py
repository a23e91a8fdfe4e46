"""Bundled example categories and modules."""

from __future__ import annotations

import itertools

from .category import (
    FiniteCategory,
    build_group_category,
    build_path_category,
    build_poset_category,
    validate_category,
)
from .exactla import FieldSpec
from .rep import Representation, validate_rep

EXAMPLE3 = {
    "objects": ["X", "Y"],
    "morphisms": [
        {"id": "1X", "dom": "X", "cod": "X"},
        {"id": "g", "dom": "X", "cod": "X"},
        {"id": "f", "dom": "X", "cod": "Y"},
        {"id": "1Y", "dom": "Y", "cod": "Y"},
    ],
    "identities": {"X": "1X", "Y": "1Y"},
    "composition": [["g", "g", "1X"], ["f", "g", "f"]],
}


def _cyclic(n: int) -> tuple[list[str], list[list[str]]]:
    names = ["e"] + [f"r{k}" if k > 1 else "r" for k in range(1, n)]
    return names, [[names[(i + j) % n] for j in range(n)] for i in range(n)]


def _symmetric3() -> tuple[list[str], list[list[str]]]:
    perms = list(itertools.permutations(range(3)))

    def label(p):
        if p == (0, 1, 2):
            return "e"
        moved = [i for i in range(3) if p[i] != i]
        if len(moved) == 2:
            return f"({moved[0] + 1}{moved[1] + 1})"
        return "(123)" if p[0] == 1 else "(132)"

    # (g∘f)(i) = g(f(i))
    names = [label(p) for p in perms]
    table = [[label(tuple(g[f[i]] for i in range(3))) for f in perms] for g in perms]
    return names, table


def group_spec(name: str) -> dict:
    elements, table = {"c2": lambda: _cyclic(2), "c3": lambda: _cyclic(3), "s3": _symmetric3}[name]()
    return {"object": "x", "elements": elements, "table": table}


BUILDER_SPECS = {
    "c2": lambda: group_spec("c2"),
    "c3": lambda: group_spec("c3"),
    "s3": lambda: group_spec("s3"),
    "chain3": lambda: {"elements": ["1", "2", "3"], "relation": [["1", "2"], ["2", "3"]]},
    "square": lambda: {"elements": ["a", "b", "c", "d"],
                       "relation": [["a", "b"], ["a", "c"], ["b", "d"], ["c", "d"]]},
    "a2-path": lambda: {"vertices": ["1", "2"], "arrows": [{"id": "a", "src": "1", "tgt": "2"}]},
    "kronecker-path": lambda: {"vertices": ["1", "2"],
                               "arrows": [{"id": "a", "src": "1", "tgt": "2"},
                                          {"id": "b", "src": "1", "tgt": "2"}]},
    "example3": lambda: dict(EXAMPLE3),
}

NAMES = tuple(BUILDER_SPECS)


def builtin_spec(name: str) -> dict:
    """The raw builder file contents for a bundled category."""
    try:
        return BUILDER_SPECS[name]()
    except KeyError:
        raise KeyError(f"no builtin named {name!r}; choose from {', '.join(NAMES)}") from None


def builtin_category(name: str) -> FiniteCategory:
    spec = builtin_spec(name)
    if "table" in spec:
        return build_group_category(spec["table"], spec["elements"], spec["object"])
    if "relation" in spec:
        return build_poset_category(spec["elements"], spec["relation"])
    if "arrows" in spec:
        return build_path_category(spec["vertices"], spec["arrows"])
    return validate_category(spec)


# modules from the worked example over F_2 --------------------------------

def example3_modules(f: FieldSpec | None = None) -> dict[str, Representation]:
    """M (k^2 at X with the swap, 0 at Y), S_X and S_Y over F_2 by default."""
    f = f or FieldSpec.prime(2)
    c = builtin_category("example3")
    return {
        "M": validate_rep(c, f, {"spaces": {"X": 2, "Y": 0}, "action": {"g": [[0, 1], [1, 0]]}}),
        "S_X": validate_rep(c, f, {"spaces": {"X": 1, "Y": 0}, "action": {"g": [[1]]}}),
        "S_Y": validate_rep(c, f, {"spaces": {"X": 0, "Y": 1}}),
    }
