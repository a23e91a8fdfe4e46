"""Covers, syzygies, projective and global dimension, and the finitistic-dimension probe.

Two facts carry the whole module.  First, "pd M <= n iff the n-th syzygy is
projective" does not depend on which projective covers were used (Schanuel),
so covers only need to be sums of representables, not true projective covers.
Second, a module of finite projective dimension over kC has pd <= ℓ(C), so a
resolution that has produced no projective syzygy by step ℓ(C) never will.
"""

from __future__ import annotations

import enum
import math
import random
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from typing import Sequence

from .algebra import (
    aut_invertibility,
    build_algebra,
    noniso_radical,
    radical,
    radical_subspaces,
    semisimple_quotient_module,
)
from .category import FiniteCategory, full_subcategory
from .errors import InvariantViolation, ZeroModule
from .exactla import (
    ExactMatrix,
    FieldSpec,
    column_space,
    complement_columns,
    hstack,
    kernel_basis,
    rank,
    solve,
)
from .rep import (
    DEFAULT_BUDGET,
    Representation,
    direct_sum,
    quotient,
    representable,
    restrict,
    spin,
    subrepresentation,
    support_analysis,
)


class Strategy(str, enum.Enum):
    MINIMAL = "MinimalGenerators"
    FULL = "FullGenerators"

    @classmethod
    def parse(cls, s) -> Strategy:
        if isinstance(s, Strategy):
            return s
        key = str(s).lower()
        if key in ("min", "minimal", "minimalgenerators"):
            return cls.MINIMAL
        if key in ("full", "fullgenerators"):
            return cls.FULL
        raise ValueError(f"unknown strategy {s!r}")


@lru_cache(maxsize=1024)
def _representable(c: FiniteCategory, f: FieldSpec, x: str) -> Representation:
    return representable(c, f, x)


def _unit(f: FieldSpec, n: int, k: int) -> tuple:
    return tuple(f.one if i == k else f.zero for i in range(n))


# generators ------------------------------------------------------------------

def full_generators(m: Representation) -> list[tuple[str, tuple]]:
    f = m.field
    return [(x, _unit(f, m.dims[x], k)) for x in m.category.objects for k in range(m.dims[x])]


def radical_submodule(m: Representation, budget: int = DEFAULT_BUDGET) -> dict[str, ExactMatrix]:
    """Per-object column bases of J·M."""
    c, f = m.category, m.field
    a = build_algebra(c, f)
    j = radical(a, budget)
    cols: dict[str, list] = {z: [] for z in c.objects}
    for y, z, comp in radical_subspaces(a, j):
        if not m.dims[y] or not m.dims[z]:
            continue
        acc = ExactMatrix.zeros(f, m.dims[z], m.dims[y])
        for i, coeff in comp.items():
            acc = acc + m.action[c.morphisms[i].id].scale(coeff)
        cols[z].extend(acc.columns())
    return {z: column_space(ExactMatrix.from_columns(f, cols[z], m.dims[z])) for z in c.objects}


def top_generators(m: Representation, budget: int = DEFAULT_BUDGET) -> list[tuple[str, tuple]]:
    """Standard basis vectors lifting a basis of top(M) = M/JM, grouped by object."""
    f = m.field
    jm = radical_submodule(m, budget)
    gens = []
    for x in m.category.objects:
        for k in complement_columns(jm[x]):
            gens.append((x, _unit(f, m.dims[x], k)))
    return gens


def _lower_first(c: FiniteCategory) -> list[str]:
    nbelow = {x: sum(1 for y in c.objects if c.hom_idx(y, x)) for x in c.objects}
    return sorted(c.objects, key=lambda x: nbelow[x])


def greedy_generators(m: Representation) -> list[tuple[str, tuple]]:
    """A generating set picked from standard basis vectors, lower objects first."""
    c, f = m.category, m.field
    sub = {y: ExactMatrix.zeros(f, m.dims[y], 0) for y in c.objects}
    gens = []
    for x in _lower_first(c):
        for k in range(m.dims[x]):
            if sub[x].ncols == m.dims[x]:
                break
            e = _unit(f, m.dims[x], k)
            if solve(sub[x], ExactMatrix.from_columns(f, [e], m.dims[x])) is not None:
                continue
            gens.append((x, e))
            new = spin(m, [(x, e)])
            for y in c.objects:
                if new[y].ncols:
                    sub[y] = column_space(hstack(f, [sub[y], new[y]], m.dims[y]))
    return gens


# covers and syzygies -----------------------------------------------------------

@dataclass
class Cover:
    module: Representation
    summands: tuple[str, ...]
    generators: list[tuple[str, tuple]]
    epi: dict[str, ExactMatrix]


def cover_from_generators(m: Representation, gens: Sequence[tuple[str, tuple]]) -> Cover:
    """⊕ kC·1_x over the generators, mapping 1_x of each summand to its generator."""
    c, f = m.category, m.field
    p = direct_sum([_representable(c, f, x) for x, _ in gens], c, f)
    epi = {}
    for z in c.objects:
        cols = []
        for x, v in gens:
            for b in c.hom_idx(x, z):
                cols.append(m.action[c.morphisms[b].id].apply(v))
        epi[z] = ExactMatrix.from_columns(f, cols, m.dims[z])
        if rank(epi[z]) != m.dims[z]:
            raise InvariantViolation(f"cover is not surjective at {z}")
    return Cover(p, tuple(x for x, _ in gens), list(gens), epi)


def canonical_cover(m: Representation, strategy=Strategy.MINIMAL, *, rng: random.Random | None = None,
                    budget: int = DEFAULT_BUDGET) -> Cover:
    """FullGenerators: one summand per basis vector.  MinimalGenerators: one per top basis vector.

    ``rng`` shuffles the generator order (used to exercise Schanuel independence).
    """
    if m.is_zero():
        raise ZeroModule("the zero module has no generators")
    strategy = Strategy.parse(strategy)
    gens = full_generators(m) if strategy is Strategy.FULL else top_generators(m, budget)
    if rng is not None:
        rng.shuffle(gens)
    return cover_from_generators(m, gens)


def kernel_of_cover(cover: Cover) -> tuple[Representation, dict[str, ExactMatrix]]:
    """The syzygy as a subfunctor of the cover, with its inclusion."""
    incl = {z: kernel_basis(e) for z, e in cover.epi.items()}
    return subrepresentation(cover.module, incl, check=True), incl


def syzygy(m: Representation, strategy=Strategy.MINIMAL, *, rng=None, budget=DEFAULT_BUDGET) -> Representation:
    return kernel_of_cover(canonical_cover(m, strategy, rng=rng, budget=budget))[0]


def _splits(cover: Cover, k: Representation, incl: dict[str, ExactMatrix]) -> bool:
    """Does the inclusion of k into the cover split?

    A retraction r: P -> K is fixed by the images r_i in K(x_i) of the summand
    generators (Yoneda), and r∘ι = id only needs checking on generators of K.
    """
    c, f = k.category, k.field
    offs, total = [], 0
    for x in cover.summands:
        offs.append(total)
        total += k.dims[x]
    if total == 0:
        return k.is_zero()
    blocks, rhs = [], []
    for z, w in greedy_generators(k):
        u = incl[z].apply(w)
        dz = k.dims[z]
        coeff = [[f.zero] * total for _ in range(dz)]
        pos = 0
        for i, x in enumerate(cover.summands):
            for b in c.hom_idx(x, z):
                a = u[pos]
                pos += 1
                if not a:
                    continue
                kb = k.action[c.morphisms[b].id].rows
                for r in range(dz):
                    row = coeff[r]
                    for s in range(k.dims[x]):
                        if kb[r][s]:
                            row[offs[i] + s] = f.coerce(row[offs[i] + s] + a * kb[r][s])
        blocks.extend(coeff)
        rhs.extend((v,) for v in w)
    return solve(ExactMatrix(f, blocks, ncols=total), ExactMatrix(f, rhs, ncols=1)) is not None


def is_projective(m: Representation) -> bool:
    """Split test on a cover by greedily chosen generators."""
    if m.is_zero():
        return True
    cover = cover_from_generators(m, greedy_generators(m))
    k, incl = kernel_of_cover(cover)
    if k.is_zero():
        return True
    return _splits(cover, k, incl)


# resolutions ---------------------------------------------------------------------

@dataclass
class ResolutionStep:
    cover: Representation
    summands: tuple[str, ...]
    epi: dict[str, ExactMatrix]
    syzygy: Representation
    inclusion: dict[str, ExactMatrix]


@dataclass
class Resolution:
    target: Representation
    steps: list[ResolutionStep]
    strategy: Strategy
    truncated_at: int | None = None

    def to_json(self) -> dict:
        objs = self.target.category.objects
        return {
            "strategy": self.strategy.value,
            "target": list(self.target.dimension_vector()),
            "truncated_at": self.truncated_at,
            "steps": [
                {
                    "cover_summands": list(s.summands),
                    "cover_dims": list(s.cover.dimension_vector()),
                    "syzygy_dims": list(s.syzygy.dimension_vector()),
                    "epi": {x: s.epi[x].to_json() for x in objs},
                    "syzygy_inclusion": {x: s.inclusion[x].to_json() for x in objs},
                }
                for s in self.steps
            ],
        }


def _step(m, strategy, rng, budget) -> ResolutionStep:
    cover = canonical_cover(m, strategy, rng=rng, budget=budget)
    k, incl = kernel_of_cover(cover)
    for z in m.category.objects:
        if k.dims[z] != cover.module.dims[z] - m.dims[z]:
            raise InvariantViolation(f"rank-nullity fails at {z}")
    return ResolutionStep(cover.module, cover.summands, cover.epi, k, incl)


def resolve(m: Representation, strategy=Strategy.MINIMAL, max_steps: int | None = None, *,
            rng=None, budget=DEFAULT_BUDGET) -> Resolution:
    """Covers and syzygies until the syzygy vanishes or ``max_steps`` covers were built."""
    strategy = Strategy.parse(strategy)
    if max_steps is None:
        max_steps = m.category.chain_length + 1
    steps = []
    cur = m
    while not cur.is_zero() and len(steps) < max_steps:
        steps.append(_step(cur, strategy, rng, budget))
        cur = steps[-1].syzygy
    truncated = None if cur.is_zero() else len(steps)
    return Resolution(m, steps, strategy, truncated)


@dataclass
class PdVerdict:
    kind: str  # "Finite", "Infinite" or "ZeroModule"
    value: int | None
    witness: Resolution
    cutoff: int

    @property
    def is_finite(self) -> bool:
        return self.kind == "Finite"

    def __str__(self):
        if self.kind == "Finite":
            return f"pd = {self.value}"
        if self.kind == "ZeroModule":
            return "zero module"
        return f"pd = ∞ (no projective syzygy up to ℓ = {self.cutoff})"

    def key(self):
        return self.value if self.kind == "Finite" else self.kind


def proj_dim(m: Representation, strategy=Strategy.MINIMAL, *, cutoff: int | None = None,
             rng: random.Random | None = None, budget: int = DEFAULT_BUDGET) -> PdVerdict:
    """Projective dimension with the ℓ(C) cutoff.

    Finite pd is at most ℓ(C), so if none of the syzygies 0..ℓ(C) is projective
    the verdict is Infinite.  A larger ``cutoff`` searches further (the probe uses
    this to look for counterexamples to that bound).
    """
    strategy = Strategy.parse(strategy)
    ell = m.category.chain_length
    cutoff = ell if cutoff is None else cutoff
    if m.is_zero():
        return PdVerdict("ZeroModule", None, Resolution(m, [], strategy), cutoff)
    steps = []
    omega = m
    for n in range(cutoff + 1):
        if is_projective(omega):
            return PdVerdict("Finite", n, Resolution(m, steps, strategy), cutoff)
        if n == cutoff:
            break
        steps.append(_step(omega, strategy, rng, budget))
        omega = steps[-1].syzygy
    return PdVerdict("Infinite", None, Resolution(m, steps, strategy, truncated_at=cutoff), cutoff)


def global_dim(c: FiniteCategory, f: FieldSpec, budget: int = DEFAULT_BUDGET):
    """gl.dim kC: ∞ unless every |Aut(x)| is invertible in k; then pd of kC/J."""
    if not all(info.invertible for info in aut_invertibility(c, f).values()):
        return math.inf
    a = build_algebra(c, f)
    top = semisimple_quotient_module(a, noniso_radical(a))
    verdict = proj_dim(top, Strategy.MINIMAL, budget=budget)
    if not verdict.is_finite:
        raise InvariantViolation("invertible automorphism orders but infinite pd of kC/J")
    return verdict.value


# the finitistic-dimension probe ---------------------------------------------

def sample_module(c: FiniteCategory, f: FieldSpec, rng: random.Random, max_dim: int = 6) -> Representation:
    """A quotient of a sum of at most 3 representables by a subfunctor spun from at most 2 vectors."""
    sizes = {x: len(c.out_idx(x)) for x in c.objects}
    fits = [x for x in c.objects if sizes[x] <= max_dim] or [min(c.objects, key=sizes.get)]
    chosen = [rng.choice(fits)]
    for _ in range(rng.randint(0, 2)):
        x = rng.choice(fits)
        if sum(sizes[y] for y in chosen) + sizes[x] <= max_dim:
            chosen.append(x)
    p = direct_sum([_representable(c, f, x) for x in chosen])
    gens = []
    support = p.support()
    for _ in range(rng.randint(0, 2)):
        y = rng.choice(support)
        d = p.dims[y]
        if rng.random() < 0.5:
            v = _unit(f, d, rng.randrange(d))
        elif f.is_finite:
            v = tuple(rng.randrange(f.p) for _ in range(d))
        else:
            v = tuple(rng.randint(-2, 2) for _ in range(d))
        gens.append((y, v))
    sub = spin(p, gens)
    return quotient(p, sub)[0]


@dataclass
class ProbeReport:
    category_chain_length: int
    field: str
    strategy: str
    seed: int
    samples: int
    zero_samples: int
    histogram: dict[str, int]
    max_finite_pd: int | None
    violations: list[dict] = dc_field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "chain_length": self.category_chain_length,
            "field": self.field,
            "strategy": self.strategy,
            "seed": self.seed,
            "samples": self.samples,
            "zero_samples": self.zero_samples,
            "histogram": self.histogram,
            "max_finite_pd": self.max_finite_pd,
            "max_finite_pd_is": "lower bound for fin.dim",
            "violations": self.violations,
        }


def _probe_one(args):
    m, strategy, cutoff, budget = args
    v = proj_dim(m, strategy, cutoff=cutoff, budget=budget)
    return v.kind, v.value


def findim_probe(c: FiniteCategory, f: FieldSpec, samples: int = 100, max_dim: int = 6, seed: int = 0,
                 *, strategy=Strategy.MINIMAL, extra_steps: int = 1, workers: int = 1,
                 budget: int = DEFAULT_BUDGET) -> ProbeReport:
    """Sample modules, compute their pd, and look for finite pd above ℓ(C).

    Each pd is searched up to ℓ(C) + ``extra_steps``, so a module with finite pd
    just above the bound would be caught and reported as a violation.
    """
    strategy = Strategy.parse(strategy)
    rng = random.Random(seed)
    mods = [sample_module(c, f, rng, max_dim) for _ in range(samples)]
    ell = c.chain_length
    cutoff = ell + extra_steps
    jobs = [(m, strategy, cutoff, budget) for m in mods if not m.is_zero()]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_probe_one, jobs))
    else:
        results = [_probe_one(j) for j in jobs]
    hist = Counter()
    violations = []
    max_pd = None
    nonzero = [i for i, m in enumerate(mods) if not m.is_zero()]
    for i, (kind, value) in zip(nonzero, results):
        if kind == "Finite":
            hist[str(value)] += 1
            max_pd = value if max_pd is None else max(max_pd, value)
            if value > ell:
                violations.append({"sample": i, "pd": value, "chain_length": ell,
                                   "dims": list(mods[i].dimension_vector())})
        else:
            hist["inf"] += 1
    hist_sorted = {k: hist[k] for k in sorted(hist, key=lambda s: (s == "inf", int(s) if s != "inf" else 0))}
    return ProbeReport(ell, f.name, strategy.value, seed, samples, len(mods) - len(nonzero),
                       hist_sorted, max_pd, violations)


# the support lemma -----------------------------------------------------------------

@dataclass
class MinimalObjectFinding:
    restricted_complex_exact: bool
    each_term_projective_over_aut: bool
    value_projective_over_aut: bool


@dataclass
class SupportReport:
    cover_support_ok: bool
    minimal_object_findings: dict[str, MinimalObjectFinding]
    verdict: PdVerdict
    resolution: Resolution

    @property
    def dichotomy_ok(self) -> bool:
        """Finite pd forces M(x) to be kAut(x)-projective at every M-minimal x."""
        if not self.verdict.is_finite:
            return True
        return all(v.value_projective_over_aut for v in self.minimal_object_findings.values())

    @property
    def all_ok(self) -> bool:
        return (self.cover_support_ok and self.dichotomy_ok and all(
            v.restricted_complex_exact and v.each_term_projective_over_aut
            for v in self.minimal_object_findings.values()))

    def to_json(self) -> dict:
        return {
            "cover_support_ok": self.cover_support_ok,
            "verdict": str(self.verdict),
            "minimal_objects": {x: vars(v) for x, v in self.minimal_object_findings.items()},
            "dichotomy_ok": self.dichotomy_ok,
        }


def _exact_at(resolution: Resolution, x: str) -> bool:
    """Exactness of ... -> P_1(x) -> P_0(x) -> M(x) -> 0 at every interior spot."""
    m = resolution.target
    steps = resolution.steps
    if not steps:
        return True
    diffs = [steps[0].epi[x]]
    for k in range(1, len(steps)):
        diffs.append(steps[k - 1].inclusion[x] @ steps[k].epi[x])
    if rank(diffs[0]) != m.dims[x]:
        return False
    for k in range(1, len(diffs)):
        prev, cur = diffs[k - 1], diffs[k]
        if not (prev @ cur).is_zero():
            return False
        if rank(cur) != prev.ncols - rank(prev):
            return False
    return True


def verify_support_report(m: Representation, budget: int = DEFAULT_BUDGET) -> SupportReport:
    """Check the support lemma on a MinimalGenerators resolution truncated at ℓ(C)."""
    if m.is_zero():
        raise ZeroModule("support analysis of the zero module is vacuous")
    c = m.category
    sa = support_analysis(m)
    cm = set(sa.cm_objects)
    res = resolve(m, Strategy.MINIMAL, max_steps=c.chain_length + 1, budget=budget)
    support_ok = all(set(s.cover.support()) <= cm for s in res.steps)
    findings = {}
    for x in sa.minimal_objects:
        g = full_subcategory(c, [x])
        findings[x] = MinimalObjectFinding(
            restricted_complex_exact=_exact_at(res, x),
            each_term_projective_over_aut=all(is_projective(restrict(s.cover, g)) for s in res.steps),
            value_projective_over_aut=is_projective(restrict(m, g)),
        )
    verdict = proj_dim(m, Strategy.MINIMAL, budget=budget)
    return SupportReport(support_ok, findings, verdict, res)
