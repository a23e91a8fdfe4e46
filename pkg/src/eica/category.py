"""Finite EI categories: validation, the iso-class order, builders, subcategories.

Composition is written ``compose(g, f) = g∘f`` and needs ``cod(f) == dom(g)``.
Declaration order of objects and morphisms is the basis order used by every
matrix downstream.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .errors import (
    BadComposite,
    DuplicateId,
    EicaError,
    HasOrientedCycle,
    IdentityLawBroken,
    InvalidCategory,
    MissingComposite,
    NonAssociative,
    NotAGroup,
    NotAntisymmetric,
    NotEI,
    ParseError,
    UnknownMorphism,
    UnknownObject,
)


@dataclass(frozen=True)
class Morphism:
    id: str
    dom: str
    cod: str


@dataclass(frozen=True)
class OrderAnalysis:
    iso_classes: tuple[tuple[str, ...], ...]
    class_of: Mapping[str, int]
    class_dag: frozenset[tuple[int, int]]
    chain_length: int
    preorder: frozenset[tuple[str, str]]

    def cover_edges(self) -> list[tuple[int, int]]:
        """Edges of the transitive reduction of the class order."""
        out = []
        for a, b in sorted(self.class_dag):
            if not any((a, m) in self.class_dag and (m, b) in self.class_dag
                       for m in range(len(self.iso_classes))):
                out.append((a, b))
        return out


class FiniteCategory:
    """A validated finite EI category.  Build it with :func:`validate_category`."""

    def __init__(self, objects, morphisms, identities, table, ambient=None, embedding=None):
        self.objects: tuple[str, ...] = tuple(objects)
        self.morphisms: tuple[Morphism, ...] = tuple(morphisms)
        self.identities: dict[str, str] = dict(identities)
        self._index = {m.id: i for i, m in enumerate(self.morphisms)}
        self._objset = frozenset(self.objects)
        # (g index, f index) -> index of g∘f
        self._table: dict[tuple[int, int], int] = dict(table)
        self._hom: dict[tuple[str, str], list[int]] = {}
        for i, m in enumerate(self.morphisms):
            self._hom.setdefault((m.dom, m.cod), []).append(i)
        self.ambient: FiniteCategory | None = ambient
        self.embedding: dict[str, str] = dict(embedding) if embedding else {m.id: m.id for m in self.morphisms}

    def __repr__(self):
        return f"<FiniteCategory objects={len(self.objects)} morphisms={len(self.morphisms)}>"

    @cached_property
    def _key(self):
        # subcategories of different ambient categories must not compare equal
        ambient = self.ambient._key if self.ambient is not None else None
        return (self.objects, self.morphisms, tuple(sorted(self.identities.items())),
                tuple(sorted(self._table.items())), ambient)

    def __eq__(self, other):
        if not isinstance(other, FiniteCategory):
            return NotImplemented
        return self._key == other._key

    def __hash__(self):
        return hash(self._key)

    # lookups -------------------------------------------------------------

    def has_object(self, x) -> bool:
        return x in self._objset

    def check_object(self, x):
        if x not in self._objset:
            raise UnknownObject(x)

    def index(self, mid: str) -> int:
        try:
            return self._index[mid]
        except KeyError:
            raise UnknownMorphism(mid) from None

    def morphism(self, mid: str) -> Morphism:
        return self.morphisms[self.index(mid)]

    def identity_index(self, x) -> int:
        return self._index[self.identities[x]]

    def compose_idx(self, gi: int, fi: int) -> int | None:
        return self._table.get((gi, fi))

    def compose(self, g: str, f: str) -> str:
        gi, fi = self.index(g), self.index(f)
        if self.morphisms[fi].cod != self.morphisms[gi].dom:
            raise BadComposite(g, f)
        return self.morphisms[self._table[(gi, fi)]].id

    def hom_idx(self, x, y) -> list[int]:
        return self._hom.get((x, y), [])

    def hom(self, x, y) -> list[str]:
        return [self.morphisms[i].id for i in self.hom_idx(x, y)]

    def aut(self, x) -> list[str]:
        return self.hom(x, x)

    def out_idx(self, x) -> list[int]:
        return [i for i, m in enumerate(self.morphisms) if m.dom == x]

    def in_idx(self, x) -> list[int]:
        return [i for i, m in enumerate(self.morphisms) if m.cod == x]

    @cached_property
    def _inverse_idx(self) -> dict[int, int]:
        inv = {}
        for i, m in enumerate(self.morphisms):
            one_dom, one_cod = self.identity_index(m.dom), self.identity_index(m.cod)
            for j in self.hom_idx(m.cod, m.dom):
                if self._table.get((j, i)) == one_dom and self._table.get((i, j)) == one_cod:
                    inv[i] = j
                    break
        return inv

    def inverse(self, mid: str) -> str | None:
        j = self._inverse_idx.get(self.index(mid))
        return None if j is None else self.morphisms[j].id

    def inverse_idx(self, i: int) -> int | None:
        return self._inverse_idx.get(i)

    def is_isomorphism(self, mid: str) -> bool:
        return self.index(mid) in self._inverse_idx

    def composable_pairs(self):
        """Yield index pairs (g, f) with cod f == dom g."""
        by_dom: dict[str, list[int]] = {}
        for i, m in enumerate(self.morphisms):
            by_dom.setdefault(m.dom, []).append(i)
        for fi, f in enumerate(self.morphisms):
            for gi in by_dom.get(f.cod, ()):
                yield gi, fi

    @cached_property
    def generators(self) -> tuple[int, ...]:
        """Indices of non-identity morphisms that generate C under composition.

        Chosen greedily in declaration order; naturality and functoriality only
        need checking against these.
        """
        closure = {self.identity_index(x) for x in self.objects}
        gens: list[int] = []
        for i in range(len(self.morphisms)):
            if i in closure:
                continue
            gens.append(i)
            frontier = {i}
            closure.add(i)
            while frontier:
                new = set()
                for a in frontier:
                    for b in list(closure):
                        for h in (self._table.get((a, b)), self._table.get((b, a))):
                            if h is not None and h not in closure:
                                new.add(h)
                closure |= new
                frontier = new
        return tuple(gens)

    @cached_property
    def order(self) -> OrderAnalysis:
        return analyze_order(self)

    @property
    def chain_length(self) -> int:
        return self.order.chain_length

    def iso_class(self, x) -> tuple[str, ...]:
        self.check_object(x)
        o = self.order
        return o.iso_classes[o.class_of[x]]

    def to_spec(self) -> dict:
        """The category file contents; identity compositions are left implicit."""
        idset = {self._index[v] for v in self.identities.values()}
        comp = [[self.morphisms[g].id, self.morphisms[f].id, self.morphisms[h].id]
                for (g, f), h in sorted(self._table.items(), key=lambda kv: (kv[0][1], kv[0][0]))
                if g not in idset and f not in idset]
        return {
            "objects": list(self.objects),
            "morphisms": [{"id": m.id, "dom": m.dom, "cod": m.cod} for m in self.morphisms],
            "identities": {x: self.identities[x] for x in self.objects},
            "composition": comp,
        }


# validation --------------------------------------------------------------

def _parse_morphism(entry) -> Morphism:
    if isinstance(entry, Mapping):
        try:
            return Morphism(str(entry["id"]), str(entry["dom"]), str(entry["cod"]))
        except KeyError as exc:
            raise ParseError(f"morphism entry {entry!r} lacks {exc}") from None
    if isinstance(entry, (list, tuple)) and len(entry) == 3:
        return Morphism(*map(str, entry))
    raise ParseError(f"cannot read morphism {entry!r}")


def validate_category(spec: Mapping) -> FiniteCategory:
    """Check every axiom of a category spec and return the validated category.

    All violations are collected and raised together as :class:`InvalidCategory`.
    """
    try:
        objects = [str(x) for x in spec["objects"]]
        morphisms = [_parse_morphism(e) for e in spec["morphisms"]]
        identities = {str(k): str(v) for k, v in spec.get("identities", {}).items()}
        composition = [tuple(map(str, t)) for t in spec.get("composition", [])]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed category spec: {exc}") from None
    for t in composition:
        if len(t) != 3:
            raise ParseError(f"composition entries are [g, f, g∘f], got {list(t)}")

    bad: list = []
    seen = set()
    for x in objects:
        if x in seen:
            bad.append(DuplicateId(x))
        seen.add(x)
    objset = set(objects)
    index: dict[str, int] = {}
    for i, m in enumerate(morphisms):
        if m.id in index:
            bad.append(DuplicateId(m.id))
            continue
        index[m.id] = i
        for end in (m.dom, m.cod):
            if end not in objset:
                bad.append(UnknownObject(end))
    if bad:
        raise InvalidCategory(bad)

    for x in identities:
        if x not in objset:
            bad.append(UnknownObject(x))
    id_idx: dict[str, int] = {}
    for x in objects:
        mid = identities.get(x)
        if mid is None:
            bad.append(IdentityLawBroken(x, "no identity declared"))
        elif mid not in index:
            bad.append(UnknownMorphism(mid))
        elif (morphisms[index[mid]].dom, morphisms[index[mid]].cod) != (x, x):
            bad.append(IdentityLawBroken(mid, f"not an endomorphism of {x}"))
        else:
            id_idx[x] = index[mid]
    if bad:
        raise InvalidCategory(bad)
    identity_set = set(id_idx.values())

    table: dict[tuple[int, int], int] = {}
    for g, f, h in composition:
        missing = [n for n in (g, f, h) if n not in index]
        if missing:
            bad.extend(UnknownMorphism(n) for n in missing)
            continue
        gi, fi, hi = index[g], index[f], index[h]
        mg, mf, mh = morphisms[gi], morphisms[fi], morphisms[hi]
        if mf.cod != mg.dom:
            bad.append(BadComposite(g, f, "not composable"))
            continue
        if (mh.dom, mh.cod) != (mf.dom, mg.cod):
            bad.append(BadComposite(g, f, h))
            continue
        if gi in identity_set and hi != fi:
            bad.append(IdentityLawBroken(g, f))
            continue
        if fi in identity_set and hi != gi:
            bad.append(IdentityLawBroken(g, f))
            continue
        if (gi, fi) in table and table[(gi, fi)] != hi:
            bad.append(BadComposite(g, f, "conflicting entries"))
            continue
        table[(gi, fi)] = hi

    for i, m in enumerate(morphisms):
        table.setdefault((id_idx[m.cod], i), i)
        table.setdefault((i, id_idx[m.dom]), i)

    by_dom: dict[str, list[int]] = {}
    for i, m in enumerate(morphisms):
        by_dom.setdefault(m.dom, []).append(i)
    for fi, mf in enumerate(morphisms):
        for gi in by_dom.get(mf.cod, ()):
            if (gi, fi) not in table:
                bad.append(MissingComposite(morphisms[gi].id, mf.id))

    for fi, mf in enumerate(morphisms):
        for gi in by_dom.get(mf.cod, ()):
            gf = table.get((gi, fi))
            for hi in by_dom.get(morphisms[gi].cod, ()):
                hg = table.get((hi, gi))
                if gf is None or hg is None:
                    continue
                left, right = table.get((hi, gf)), table.get((hg, fi))
                if left is not None and right is not None and left != right:
                    bad.append(NonAssociative(morphisms[hi].id, morphisms[gi].id, mf.id))

    for x in objects:
        ends = [i for i in by_dom.get(x, ()) if morphisms[i].cod == x]
        one = id_idx[x]
        for e in ends:
            if not any(table.get((e, u)) == one and table.get((u, e)) == one for u in ends):
                bad.append(NotEI(morphisms[e].id))

    if bad:
        raise InvalidCategory(bad)
    return FiniteCategory(objects, morphisms, {x: morphisms[id_idx[x]].id for x in objects}, table)


# the iso-class order -------------------------------------------------------

def analyze_order(c: FiniteCategory) -> OrderAnalysis:
    """Iso classes, the class DAG and the chain length ℓ(C)."""
    objs = c.objects
    reach = {(x, y) for x in objs for y in objs if c.hom_idx(x, y)}
    class_of: dict[str, int] = {}
    classes: list[tuple[str, ...]] = []
    for x in objs:
        if x in class_of:
            continue
        members = tuple(y for y in objs if (x, y) in reach and (y, x) in reach)
        for y in members:
            class_of[y] = len(classes)
        classes.append(members)
    dag = frozenset((class_of[x], class_of[y]) for x, y in reach if class_of[x] != class_of[y])

    succ: dict[int, list[int]] = {}
    for a, b in dag:
        succ.setdefault(a, []).append(b)
    longest: dict[int, int] = {}

    def depth(a, stack=()):
        if a in longest:
            return longest[a]
        if a in stack:
            raise EicaError("class order is not acyclic")
        longest[a] = max((1 + depth(b, stack + (a,)) for b in succ.get(a, ())), default=0)
        return longest[a]

    ell = max((depth(a) for a in range(len(classes))), default=0)
    return OrderAnalysis(tuple(classes), class_of, dag, ell, frozenset(reach))


def below(c: FiniteCategory, x) -> tuple[str, ...]:
    """Objects y with Hom(y, x) nonempty, in declaration order."""
    c.check_object(x)
    return tuple(y for y in c.objects if c.hom_idx(y, x))


def above(c: FiniteCategory, x) -> tuple[str, ...]:
    c.check_object(x)
    return tuple(y for y in c.objects if c.hom_idx(x, y))


def is_ideal(c: FiniteCategory, objs: Iterable) -> bool:
    objs = set(objs)
    for x in objs:
        c.check_object(x)
    return all(set(below(c, x)) <= objs for x in objs)


def full_subcategory(c: FiniteCategory, objs: Iterable) -> FiniteCategory:
    """Full subcategory on ``objs``; morphism ids are kept, ``embedding`` maps them back."""
    wanted = set(objs)
    for x in wanted:
        c.check_object(x)
    if not wanted:
        raise EicaError("a full subcategory needs at least one object")
    keep = [i for i, m in enumerate(c.morphisms) if m.dom in wanted and m.cod in wanted]
    new_index = {old: new for new, old in enumerate(keep)}
    table = {(new_index[g], new_index[f]): new_index[h]
             for (g, f), h in c._table.items() if g in new_index and f in new_index}
    return FiniteCategory(
        [x for x in c.objects if x in wanted],
        [c.morphisms[i] for i in keep],
        {x: c.identities[x] for x in c.objects if x in wanted},
        table,
        ambient=c,
        embedding={c.morphisms[i].id: c.morphisms[i].id for i in keep},
    )


# builders ----------------------------------------------------------------

def build_group_category(table: Sequence[Sequence], elements: Sequence | None = None,
                         obj: str = "x") -> FiniteCategory:
    """One-object category of a finite group.

    ``table[i][j]`` is the product ``elements[i] * elements[j]`` (as a label or
    as an index); composition g∘f is the group product g*f.
    """
    n = len(table)
    labels = [str(e) for e in elements] if elements is not None else [str(i) for i in range(n)]
    if len(labels) != n or len(set(labels)) != n:
        raise NotAGroup("elements", "labels must be distinct and match the table size")
    pos = {lab: i for i, lab in enumerate(labels)}

    def entry(v):
        if isinstance(v, int) and not isinstance(v, bool) and elements is None:
            if 0 <= v < n:
                return v
        elif str(v) in pos:
            return pos[str(v)]
        raise NotAGroup("closure", v)

    mult = []
    for i, row in enumerate(table):
        if len(row) != n:
            raise NotAGroup("table", f"row {labels[i]} has {len(row)} entries")
        mult.append([entry(v) for v in row])

    e = next((i for i in range(n) if all(mult[i][j] == j and mult[j][i] == j for j in range(n))), None)
    if e is None:
        raise NotAGroup("identity", "no two-sided identity")
    for a in range(n):
        for b in range(n):
            for c_ in range(n):
                if mult[mult[a][b]][c_] != mult[a][mult[b][c_]]:
                    raise NotAGroup("associativity", labels[a], labels[b], labels[c_])
    for a in range(n):
        if not any(mult[a][b] == e and mult[b][a] == e for b in range(n)):
            raise NotAGroup("inverse", labels[a])

    order = [e] + [i for i in range(n) if i != e]
    spec = {
        "objects": [obj],
        "morphisms": [{"id": labels[i], "dom": obj, "cod": obj} for i in order],
        "identities": {obj: labels[e]},
        "composition": [[labels[a], labels[b], labels[mult[a][b]]]
                        for a in order for b in order if a != e and b != e],
    }
    return validate_category(spec)


def build_poset_category(elements: Sequence, relations: Iterable[Sequence]) -> FiniteCategory:
    """Category of a finite poset given by generating pairs (a, b) meaning a <= b.

    Morphisms are named ``"a<=b"``; the reflexive-transitive closure is taken.
    """
    elems = [str(e) for e in elements]
    pos = {e: i for i, e in enumerate(elems)}
    n = len(elems)
    le = [[i == j for j in range(n)] for i in range(n)]
    for pair in relations:
        a, b = (str(v) for v in pair)
        for v in (a, b):
            if v not in pos:
                raise UnknownObject(v)
        le[pos[a]][pos[b]] = True
    for k in range(n):
        for i in range(n):
            if le[i][k]:
                for j in range(n):
                    if le[k][j]:
                        le[i][j] = True
    for i in range(n):
        for j in range(i + 1, n):
            if le[i][j] and le[j][i]:
                raise NotAntisymmetric(elems[i], elems[j])

    def name(i, j):
        return f"{elems[i]}<={elems[j]}"

    pairs = [(i, j) for i in range(n) for j in range(n) if le[i][j]]
    spec = {
        "objects": elems,
        "morphisms": [{"id": name(i, j), "dom": elems[i], "cod": elems[j]} for i, j in pairs],
        "identities": {elems[i]: name(i, i) for i in range(n)},
        "composition": [[name(j, k), name(i, j), name(i, k)]
                        for i, j in pairs for k in range(n) if le[j][k] and i != j and j != k],
    }
    return validate_category(spec)


def build_path_category(vertices: Sequence, arrows: Iterable) -> FiniteCategory:
    """Path category of a finite acyclic quiver.

    ``arrows`` holds ``(id, source, target)`` triples or dicts with keys
    ``id``/``src``/``tgt``.  The path "a then b" is named ``"b*a"``; the empty
    path at v is ``"1_v"``.
    """
    verts = [str(v) for v in vertices]
    vset = set(verts)
    arrs = []
    for a in arrows:
        if isinstance(a, Mapping):
            a = (a["id"], a.get("src", a.get("source")), a.get("tgt", a.get("target")))
        aid, s, t = (str(v) for v in a)
        for v in (s, t):
            if v not in vset:
                raise UnknownObject(v)
        arrs.append((aid, s, t))

    out: dict[str, list[int]] = {v: [] for v in verts}
    for k, (_, s, _) in enumerate(arrs):
        out[s].append(k)
    # iterative DFS with colours; the witness is the arrow sequence around the cycle
    colour = {v: 0 for v in verts}
    for root in verts:
        if colour[root]:
            continue
        stack = [(root, iter(out[root]))]
        via: list[int] = []
        colour[root] = 1
        while stack:
            v, it = stack[-1]
            k = next(it, None)
            if k is None:
                colour[v] = 2
                stack.pop()
                if via:
                    via.pop()
                continue
            w = arrs[k][2]
            if colour[w] == 1:
                start = next(i for i, (u, _) in enumerate(stack) if u == w)
                raise HasOrientedCycle(*[arrs[j][0] for j in via[start:] + [k]])
            if colour[w] == 0:
                colour[w] = 1
                via.append(k)
                stack.append((w, iter(out[w])))

    # paths as tuples of arrow indices in traversal order
    paths: list[tuple[int, ...]] = []
    frontier = [(k,) for k in range(len(arrs))]
    while frontier:
        paths.extend(frontier)
        frontier = [p + (k,) for p in frontier for k in out[arrs[p[-1]][2]]]

    def name(p):
        return "*".join(arrs[k][0] for k in reversed(p))

    ident = {v: f"1_{v}" for v in verts}
    pset = set(paths)
    comp = [[name(q), name(p), name(p + q)]
            for p in paths for q in paths if arrs[p[-1]][2] == arrs[q[0]][1] and p + q in pset]
    spec = {
        "objects": verts,
        "morphisms": [{"id": ident[v], "dom": v, "cod": v} for v in verts]
        + [{"id": name(p), "dom": arrs[p[0]][1], "cod": arrs[p[-1]][2]} for p in paths],
        "identities": ident,
        "composition": comp,
    }
    return validate_category(spec)


def load_category(data: Mapping) -> FiniteCategory:
    """Dispatch on the file keys: ``table`` (group), ``relation`` (poset), ``arrows`` (quiver)."""
    if "table" in data:
        return build_group_category(data["table"], data.get("elements"), data.get("object", "x"))
    if "relation" in data:
        return build_poset_category(data["elements"], data["relation"])
    if "arrows" in data:
        return build_path_category(data["vertices"], data["arrows"])
    return validate_category(data)
