"""Category generators and brute-force oracles shared by the tests."""

from __future__ import annotations

import itertools
import random

from eica.builtins import builtin_category, builtin_spec
from eica.category import FiniteCategory, validate_category
from eica.exactla import ExactMatrix, FieldSpec, solve
from eica.homology import sample_module
from eica.rep import Representation, hom_space, representable, direct_sum, unpack_hom

Q = FieldSpec.rationals()
F2 = FieldSpec.prime(2)
F3 = FieldSpec.prime(3)
FIELDS = (Q, F2, F3)
BUILTINS = ("c2", "c3", "s3", "chain3", "square", "a2-path", "kronecker-path", "example3")


def group_table(name):
    spec = builtin_spec(name)
    return spec["elements"], spec["table"]


def biset_category(group: str, cosets: list[list[str]]) -> FiniteCategory:
    """Objects X (Aut = G) and Y (Aut trivial); Hom(X, Y) = a union of right G-sets.

    Each entry of ``cosets`` is a subgroup K (as element labels); it contributes
    the right cosets K\\G, and s∘g is the coset s·g.
    """
    elements, table = group_table(group)
    pos = {e: i for i, e in enumerate(elements)}

    def mul(a, b):
        return table[pos[a]][pos[b]]

    morphisms = [{"id": e if e != "e" else "1X", "dom": "X", "cod": "X"} for e in elements]
    name = {e: (e if e != "e" else "1X") for e in elements}
    comp = [[name[a], name[b], name[mul(a, b)]] for a in elements for b in elements
            if a != "e" and b != "e"]
    homxy = []
    for t, sub in enumerate(cosets):
        seen = []
        for x in elements:
            coset = frozenset(mul(k, x) for k in sub)
            if coset not in seen:
                seen.append(coset)
        for c_idx, coset in enumerate(seen):
            homxy.append((f"s{t}_{c_idx}", coset, t, seen))
    for mid, _, _, _ in homxy:
        morphisms.append({"id": mid, "dom": "X", "cod": "Y"})
    for mid, coset, t, seen in homxy:
        rep = min(coset)
        for g in elements:
            if g == "e":
                continue
            target = frozenset(mul(k, mul(rep, g)) for k in cosets[t])
            comp.append([mid, name[g], f"s{t}_{seen.index(target)}"])
    morphisms.append({"id": "1Y", "dom": "Y", "cod": "Y"})
    return validate_category({"objects": ["X", "Y"], "morphisms": morphisms,
                              "identities": {"X": "1X", "Y": "1Y"}, "composition": comp})


def inflate(c: FiniteCategory, x: str, copy: str | None = None) -> FiniteCategory:
    """An equivalent category with one extra object isomorphic to x."""
    copy = copy or f"{x}'"
    objs = list(c.objects) + [copy]
    under = {o: o for o in c.objects}
    under[copy] = x
    mors = []
    ident = {}
    for a in objs:
        for b in objs:
            for mid in c.hom(under[a], under[b]):
                new = mid if (a, b) == (under[a], under[b]) else f"{mid}@{a}>{b}"
                mors.append((new, mid, a, b))
                if a == b and c.identities[under[a]] == mid:
                    ident[a] = new
    lookup = {(mid, a, b): new for new, mid, a, b in mors}
    comp = []
    for gnew, g, b1, cc in mors:
        for fnew, f, a, b2 in mors:
            if b1 == b2:
                comp.append([gnew, fnew, lookup[(c.compose(g, f), a, cc)]])
    return validate_category({"objects": objs,
                              "morphisms": [{"id": n, "dom": a, "cod": b} for n, _, a, b in mors],
                              "identities": ident, "composition": comp})


def random_poset(rng: random.Random, n: int) -> tuple[list[str], list[list[str]]]:
    elems = [f"p{i}" for i in range(n)]
    rel = [[elems[i], elems[j]] for i in range(n) for j in range(i + 1, n) if rng.random() < 0.35]
    return elems, rel


def random_quiver(rng: random.Random, n: int):
    verts = [f"v{i}" for i in range(n)]
    arrows = []
    for i in range(n):
        for j in range(i + 1, min(n, i + 3)):
            for k in range(rng.choice([0, 0, 1, 1, 2])):
                arrows.append((f"a{i}{j}{k}", verts[i], verts[j]))
    return verts, arrows


def fuzz_categories() -> dict[str, FiniteCategory]:
    """Bundled categories plus a few with richer iso classes and Hom-sets."""
    cats = {name: builtin_category(name) for name in BUILTINS}
    cats["biset-c2"] = biset_category("c2", [["e"], ["e", "r"]])
    cats["biset-s3"] = biset_category("s3", [["e", "(12)"]])
    cats["inflated-example3"] = inflate(cats["example3"], "X")
    cats["inflated-chain3"] = inflate(cats["chain3"], "2")
    return cats


def random_modules(c, f, n, seed=0, max_dim=6):
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        m = sample_module(c, f, rng, max_dim)
        if not m.is_zero():
            out.append(m)
    return out


# oracles ----------------------------------------------------------------------

def brute_kernel_count(m: ExactMatrix) -> int:
    """Number of v with m v = 0, by enumeration over a prime field."""
    p = m.field.p
    return sum(1 for v in itertools.product(range(p), repeat=m.ncols) if not any(m.apply(v)))


def brute_hom_count(m: Representation, n: Representation) -> int:
    """|Hom(m, n)| over F_p by enumerating every family of matrices."""
    c, f = m.category, m.field
    shapes = [(x, n.dims[x], m.dims[x]) for x in c.objects]
    total = sum(r * s for _, r, s in shapes)
    count = 0
    for flat in itertools.product(range(f.p), repeat=total):
        phi, k = {}, 0
        for x, r, s in shapes:
            phi[x] = ExactMatrix._raw(f, tuple(tuple(flat[k + i * s:k + (i + 1) * s]) for i in range(r)), s)
            k += r * s
        if all(n.action[a.id] @ phi[a.dom] == phi[a.cod] @ m.action[a.id] for a in c.morphisms):
            count += 1
    return count


def projective_by_section(m: Representation) -> bool:
    """Split test through a section of the FullGenerators cover, solved in Hom(M, P)."""
    if m.is_zero():
        return True
    c, f = m.category, m.field
    from eica.homology import Strategy, canonical_cover
    cover = canonical_cover(m, Strategy.FULL)
    p = cover.module
    h = hom_space(m, p)
    cols = []
    for col in h.columns():
        phi = unpack_hom(m, p, col)
        comp = []
        for x in c.objects:
            comp.extend(v for row in (cover.epi[x] @ phi[x]).rows for v in row)
        cols.append(comp)
    target = []
    for x in c.objects:
        target.extend(v for row in ExactMatrix.identity(f, m.dims[x]).rows for v in row)
    a = ExactMatrix.from_columns(f, cols, len(target))
    return solve(a, ExactMatrix.from_columns(f, [target], len(target))) is not None
