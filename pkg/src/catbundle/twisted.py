"""Twisted-product categorical bundles U ×_eta G -> U.

The object and morphism sets are those of the product bundle, but the target
map and composition are deformed by a composition-preserving map
eta: Mor(U) -> G:

    s_eta(gamma, h, g) = (s(gamma), g)
    t_eta(gamma, h, g) = (t(gamma), eta(gamma)·tau(h)·g)
    (gamma2, h2, g2) ∘ (gamma1, h1, g1)
        = (gamma2 ∘ gamma1, alpha_{eta(gamma1)^-1}(h2)·h1, g1)
      defined when g2 = eta(gamma1)·tau(h1)·g1.

Morphisms are stored in (h, g) coordinates; the hg/gh display orders are
bridged by gh = (alpha_g(h), g).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .basecat import QuiverCategory
from .crossed import CompositionUndefined, CrossedModule, TwoGroupMorphism
from .groups import StructuralError
from .report import LawReport, run_law

DEFAULT_BUDGET = 10_000


@dataclass(frozen=True)
class TwistedMorphism:
    gamma: object  # QuiverMorphism or SampledPath
    m: TwoGroupMorphism


def morphism_from_gh(cm: CrossedModule, g, h) -> TwoGroupMorphism:
    """The morphism displayed as the string g·h, in (h, g) coordinates."""
    return TwoGroupMorphism(cm.alpha(g, h), g)


def morphism_from_hg(cm: CrossedModule, h, g) -> TwoGroupMorphism:
    return TwoGroupMorphism(h, g)


class EtaMap:
    """A composition-preserving twist eta: Mor(U) -> G.

    Table mode folds generator values over arrow words (so the homomorphism
    property holds structurally); raw mode evaluates a user callable and is
    how deliberately broken twists enter negative tests.
    """

    def __init__(self, base, cm: CrossedModule, fn: Callable, kind: str = "raw"):
        self.base = base
        self.cm = cm
        self._fn = fn
        self.kind = kind
        # memoized by path identity; entries keep the path alive so ids stay valid
        self._cache: dict = {}

    def __call__(self, gamma):
        if self.kind != "transport":
            return self._fn(gamma)
        key = id(gamma)
        hit = self._cache.get(key)
        if hit is None:
            hit = (gamma, self._fn(gamma))
            self._cache[key] = hit
        return hit[1]

    @staticmethod
    def trivial(base, cm: CrossedModule) -> "EtaMap":
        return EtaMap(base, cm, lambda gamma: cm.G.identity, kind="trivial")

    @staticmethod
    def from_table(base: QuiverCategory, cm: CrossedModule, gen_table: dict) -> "EtaMap":
        missing = set(base.arrows) - set(gen_table)
        if missing:
            raise StructuralError(f"eta table misses arrows: {sorted(missing)}")

        def fn(gamma):
            out = cm.G.identity
            for name in gamma.word:
                out = cm.G.mul(gen_table[name], out)
            return out

        return EtaMap(base, cm, fn, kind="table")

    @staticmethod
    def from_raw(base, cm: CrossedModule, values: dict, default=None) -> "EtaMap":
        """Per-word table; arbitrary values, so the homomorphism law can fail."""
        def fn(gamma):
            key = gamma.word if hasattr(gamma, "word") else gamma
            if key in values:
                return values[key]
            if default is not None:
                return default
            raise StructuralError(f"eta undefined on {gamma!r}")
        return EtaMap(base, cm, fn, kind="raw")


class TwistedBundle:
    def __init__(self, base, cm: CrossedModule, eta: EtaMap):
        self.base = base
        self.cm = cm
        self.eta = eta

    def source(self, tm: TwistedMorphism):
        return (self.base.source(tm.gamma), tm.m.g)

    def target(self, tm: TwistedMorphism):
        cm = self.cm
        return (self.base.target(tm.gamma),
                cm.G.mul(self.eta(tm.gamma), cm.G.mul(cm.tau(tm.m.h), tm.m.g)))

    def identity(self, obj, g) -> TwistedMorphism:
        return TwistedMorphism(self.base.identity(obj), self.cm.identity_morphism(g))

    def act(self, tm: TwistedMorphism, m1: TwoGroupMorphism) -> TwistedMorphism:
        return TwistedMorphism(tm.gamma, self.cm.sdp_multiply(tm.m, m1))

    def act_object(self, obj_g, g1):
        a, g = obj_g
        return (a, self.cm.G.mul(g, g1))

    def compose(self, tm2: TwistedMorphism, tm1: TwistedMorphism) -> TwistedMorphism:
        cm = self.cm
        want = cm.G.mul(self.eta(tm1.gamma), cm.G.mul(cm.tau(tm1.m.h), tm1.m.g))
        if not cm.G.eq(want, tm2.m.g):
            raise CompositionUndefined(
                f"twisted target {cm.G.fmt(want)} != source {cm.G.fmt(tm2.m.g)}",
                target_value=want, source_value=tm2.m.g,
            )
        gamma = self.base.compose(tm2.gamma, tm1.gamma)
        g_inv = cm.G.inv(self.eta(tm1.gamma))
        h = cm.H.mul(cm.alpha(g_inv, tm2.m.h), tm1.m.h)
        return TwistedMorphism(gamma, TwoGroupMorphism(h, tm1.m.g))

    def E(self, phi: TwoGroupMorphism, gamma) -> TwoGroupMorphism:
        """E(phi, gamma) = 1_{eta(gamma)^-1}·phi in the morphism group."""
        cm = self.cm
        return cm.sdp_multiply(cm.identity_morphism(cm.G.inv(self.eta(gamma))), phi)

    def morphism_eq(self, t1: TwistedMorphism, t2: TwistedMorphism) -> bool:
        if isinstance(self.base, QuiverCategory):
            same_base = t1.gamma == t2.gamma
        else:
            # paths agree as morphisms when their deduplicated sample lists do
            a, b = t1.gamma.dedup(self.base.eps_pt), t2.gamma.dedup(self.base.eps_pt)
            same_base = a.shape == b.shape and bool(np.array_equal(a, b))
        return same_base and self.cm.m_eq(t1.m, t2.m)


# -- instance generators: exhaustive on finite quiver data, seeded otherwise --

def _quiver_like(bundle: TwistedBundle) -> bool:
    return isinstance(bundle.base, QuiverCategory) and bundle.cm.is_finite


def _all_morphisms(bundle: TwistedBundle, budget: int, rng, max_len=None):
    cm = bundle.cm
    if _quiver_like(bundle):
        ms = [
            TwistedMorphism(gamma, TwoGroupMorphism(h, g))
            for gamma in bundle.base.morphisms_upto(max_len)
            for h in cm.H.elements for g in cm.G.elements
        ]
        if len(ms) <= budget:
            return ms, True
        return [ms[int(rng.integers(len(ms)))] for _ in range(budget)], False
    out = []
    for _ in range(budget):
        out.append(TwistedMorphism(bundle.base.random_path(rng), cm.sample_morphism(rng)))
    return out, False


def _second_leg(bundle: TwistedBundle, tm1: TwistedMorphism, h2, gamma2) -> TwistedMorphism:
    cm = bundle.cm
    g2 = cm.G.mul(bundle.eta(tm1.gamma), cm.G.mul(cm.tau(tm1.m.h), tm1.m.g))
    return TwistedMorphism(gamma2, TwoGroupMorphism(h2, g2))


def _composable_pairs(bundle: TwistedBundle, budget: int, rng, max_len=None):
    cm = bundle.cm
    if _quiver_like(bundle):
        base_ms = bundle.base.morphisms_upto(max_len)
        pairs = []
        for gamma1 in base_ms:
            for h1 in cm.H.elements:
                for g1 in cm.G.elements:
                    tm1 = TwistedMorphism(gamma1, TwoGroupMorphism(h1, g1))
                    for gamma2 in base_ms:
                        if gamma2.source != gamma1.target:
                            continue
                        for h2 in cm.H.elements:
                            pairs.append((_second_leg(bundle, tm1, h2, gamma2), tm1))
        if len(pairs) <= budget:
            return pairs, True
        return [pairs[int(rng.integers(len(pairs)))] for _ in range(budget)], False
    out = []
    for _ in range(budget):
        gamma1 = bundle.base.random_path(rng)
        tm1 = TwistedMorphism(gamma1, cm.sample_morphism(rng))
        gamma2 = bundle.base.random_path(rng, start=gamma1.end)
        out.append((_second_leg(bundle, tm1, cm.H.sample(rng), gamma2), tm1))
    return out, False


def _composable_triples(bundle: TwistedBundle, budget: int, rng, max_len=None):
    cm = bundle.cm
    pairs, exhaustive = _composable_pairs(bundle, budget, rng, max_len)
    triples = []
    if _quiver_like(bundle):
        base_ms = bundle.base.morphisms_upto(max_len)
        for tm2, tm1 in pairs:
            for gamma3 in base_ms:
                if gamma3.source != tm2.gamma.target:
                    continue
                for h3 in cm.H.elements:
                    triples.append((_second_leg(bundle, tm2, h3, gamma3), tm2, tm1))
        if len(triples) <= budget:
            return triples, exhaustive
        return [triples[int(rng.integers(len(triples)))] for _ in range(budget)], False
    for tm2, tm1 in pairs:
        gamma3 = bundle.base.random_path(rng, start=tm2.gamma.end)
        triples.append((_second_leg(bundle, tm2, cm.H.sample(rng), gamma3), tm2, tm1))
    return triples, False


def _base_composable_pairs(bundle: TwistedBundle, budget: int, rng, max_len=None):
    if _quiver_like(bundle):
        ps = list(bundle.base.composable_pairs(max_len))
        if len(ps) <= budget:
            return ps, True
        return [ps[int(rng.integers(len(ps)))] for _ in range(budget)], False
    out = []
    for _ in range(budget):
        gamma1 = bundle.base.random_path(rng)
        gamma2 = bundle.base.random_path(rng, start=gamma1.end)
        out.append((gamma2, gamma1))
    return out, False


def verify_twisted_bundle(bundle: TwistedBundle, budget: int = DEFAULT_BUDGET,
                          rng: np.random.Generator | None = None,
                          max_len: int | None = None) -> LawReport:
    """Certify that the twist gives a categorical principal bundle:
    eta homomorphism, boundary coherence of composition, associativity,
    units, and the principal-bundle axioms for the right action."""
    rng = rng or np.random.default_rng(0)
    cm = bundle.cm
    report = LawReport(suite="twisted-bundle")

    bpairs, exh = _base_composable_pairs(bundle, budget, rng, max_len)
    report.records.append(run_law(
        "eta-homomorphism", "Eq 6.18", bpairs,
        lambda p: None if cm.G.eq(
            bundle.eta(bundle.base.compose(p[0], p[1])),
            cm.G.mul(bundle.eta(p[0]), bundle.eta(p[1])),
        ) else {"gamma2": repr(p[0]), "gamma1": repr(p[1]),
                "lhs": cm.G.fmt(bundle.eta(bundle.base.compose(p[0], p[1]))),
                "rhs": cm.G.fmt(cm.G.mul(bundle.eta(p[0]), bundle.eta(p[1])))},
        exh,
    ))

    if isinstance(bundle.base, QuiverCategory):
        id_cases = [bundle.base.identity(o) for o in bundle.base.objects]
    else:
        id_cases = [bundle.base.identity(rng.uniform(-1, 1, size=bundle.base.dim))
                    for _ in range(8)]
    report.records.append(run_law(
        "eta-identity", "Eq 6.18", id_cases,
        lambda gamma: None if cm.G.eq(bundle.eta(gamma), cm.G.identity)
        else {"gamma": repr(gamma)},
        exh,
    ))

    cpairs, exh = _composable_pairs(bundle, budget, rng, max_len)
    report.records.append(run_law(
        "boundary-coherence", "Eq 6.19", cpairs,
        lambda p: _boundary_ok(bundle, p[0], p[1]),
        exh,
    ))

    ctriples, exh3 = _composable_triples(bundle, budget, rng, max_len)
    report.records.append(run_law(
        "associativity", "Eq 6.20", ctriples,
        lambda t: None if bundle.morphism_eq(
            bundle.compose(bundle.compose(t[0], t[1]), t[2]),
            bundle.compose(t[0], bundle.compose(t[1], t[2])),
        ) else {"gamma3": repr(t[0].gamma), "gamma2": repr(t[1].gamma), "gamma1": repr(t[2].gamma)},
        exh3,
    ))

    singles, exh1 = _all_morphisms(bundle, budget, rng, max_len)
    report.records.append(run_law(
        "unit-laws", "Prop 6.1", singles,
        lambda tm: None if (
            bundle.morphism_eq(bundle.compose(tm, bundle.identity(*bundle.source(tm))), tm)
            and bundle.morphism_eq(bundle.compose(bundle.identity(*bundle.target(tm)), tm), tm)
        ) else {"gamma": repr(tm.gamma)},
        exh1,
    ))

    def b1_witness(tm):
        s, t = bundle.source(tm), bundle.target(tm)
        if isinstance(bundle.base, QuiverCategory):
            ok = s[0] == tm.gamma.source and t[0] == tm.gamma.target
        else:
            ok = bundle.base.point_eq(s[0], tm.gamma.start) and bundle.base.point_eq(t[0], tm.gamma.end)
        return None if ok else {"gamma": repr(tm.gamma)}

    report.records.append(run_law(
        "b1-surjectivity", "§2.2 (b1)", singles, b1_witness, exh1))
    if _quiver_like(bundle):
        covered = {tm.gamma for tm in singles}
        report.records.append(run_law(
            "b1-base-coverage", "§2.2 (b1)", bundle.base.morphisms_upto(max_len),
            lambda gamma: None if (not exh1) or gamma in covered else {"missing": repr(gamma)},
            exh1,
        ))

    mor_samples = (cm.enumerate_morphisms() if cm.is_finite
                   else [cm.sample_morphism(rng) for _ in range(16)])
    free_cases = [(tm, m1) for tm in singles[: max(1, budget // max(1, len(mor_samples)))]
                  for m1 in mor_samples]
    report.records.append(run_law(
        "b2-freeness", "§2.2 (b2)", free_cases,
        lambda p: None if (
            not cm.m_eq(bundle.act(p[0], p[1]).m, p[0].m) or cm.m_eq(p[1], cm.unit)
        ) else {"gamma": repr(p[0].gamma), "m": cm.fmt_m(p[1])},
        exh1 and cm.is_finite,
    ))

    fiber_cases = [(tm, m1) for tm in singles[: max(1, budget // max(1, len(mor_samples)))]
                   for m1 in mor_samples]
    report.records.append(run_law(
        "b3-transitivity", "§2.2 (b3)", fiber_cases,
        lambda p: _transitive_ok(bundle, p[0], p[1]),
        exh1 and cm.is_finite,
    ))
    return report


def _boundary_ok(bundle: TwistedBundle, tm2, tm1) -> dict | None:
    comp = bundle.compose(tm2, tm1)
    cm = bundle.cm
    s, s1 = bundle.source(comp), bundle.source(tm1)
    t, t2 = bundle.target(comp), bundle.target(tm2)
    base_ok = (s[0] == s1[0] and t[0] == t2[0]) if isinstance(bundle.base, QuiverCategory) else (
        bundle.base.point_eq(s[0], s1[0]) and bundle.base.point_eq(t[0], t2[0]))
    if base_ok and cm.G.eq(s[1], s1[1]) and cm.G.eq(t[1], t2[1]):
        return None
    return {"gamma2": repr(tm2.gamma), "gamma1": repr(tm1.gamma),
            "t_comp": cm.G.fmt(t[1]), "t_tm2": cm.G.fmt(t2[1])}


def _transitive_ok(bundle: TwistedBundle, tm, m1) -> dict | None:
    """Any two morphisms in the same fiber differ by a unique group element."""
    cm = bundle.cm
    other = bundle.act(tm, m1)
    solved = cm.sdp_multiply(cm.sdp_inverse(tm.m), other.m)
    back = bundle.act(tm, solved)
    if bundle.morphism_eq(back, other):
        return None
    return {"gamma": repr(tm.gamma)}


def verify_E_properties(bundle: TwistedBundle, budget: int = DEFAULT_BUDGET,
                        rng: np.random.Generator | None = None,
                        max_len: int | None = None) -> LawReport:
    """The action of the base on the group: identity behavior in both
    variables, compatibility with both compositions, and agreement of the
    E-form of twisted composition with the direct formula."""
    rng = rng or np.random.default_rng(0)
    cm = bundle.cm
    report = LawReport(suite="e-action")

    if _quiver_like(bundle):
        phis = cm.enumerate_morphisms()
        objs = list(bundle.base.objects)
        gammas = bundle.base.morphisms_upto(max_len)
        id_cases = [(phi, bundle.base.identity(o)) for phi in phis for o in objs]
        exh = True
    else:
        phis = [cm.sample_morphism(rng) for _ in range(32)]
        gammas = [bundle.base.random_path(rng) for _ in range(32)]
        id_cases = [(phi, bundle.base.identity(rng.uniform(-1, 1, size=bundle.base.dim)))
                    for phi in phis]
        exh = False

    report.records.append(run_law(
        "E-identity-base", "§6.2 (i)", id_cases,
        lambda p: None if cm.m_eq(bundle.E(p[0], p[1]), p[0])
        else {"phi": cm.fmt_m(p[0])},
        exh,
    ))

    g_cases = [(g, gamma) for g in (cm.G.elements if cm.G.is_finite else [cm.G.sample(rng) for _ in range(8)])
               for gamma in gammas]
    report.records.append(run_law(
        "E-identity-group", "§6.2 (ii)", g_cases,
        lambda p: None if cm.m_eq(
            bundle.E(cm.identity_morphism(p[0]), p[1]),
            cm.identity_morphism(cm.G.mul(cm.G.inv(bundle.eta(p[1])), p[0])),
        ) else {"g": cm.G.fmt(p[0]), "gamma": repr(p[1])},
        exh,
    ))

    bpairs, exhp = _base_composable_pairs(bundle, budget, rng, max_len)
    comp_base_cases = [(phi, p) for phi in phis[:8] for p in bpairs[: max(1, budget // 8)]]
    report.records.append(run_law(
        "E-composition-base", "§6.2 (iii)", comp_base_cases,
        lambda c: None if cm.m_eq(
            bundle.E(c[0], bundle.base.compose(c[1][0], c[1][1])),
            bundle.E(bundle.E(c[0], c[1][0]), c[1][1]),
        ) else {"phi": cm.fmt_m(c[0])},
        exhp,
    ))

    vert_pairs = []
    for phi1 in phis[:12]:
        for h2 in (cm.H.elements if cm.H.is_finite else [cm.H.sample(rng) for _ in range(4)]):
            phi2 = TwoGroupMorphism(h2, cm.target(phi1))
            vert_pairs.append((phi2, phi1))
    comp_grp_cases = [(pp, gamma) for pp in vert_pairs for gamma in gammas[:8]]
    report.records.append(run_law(
        "E-composition-group", "§6.2 (iv)", comp_grp_cases,
        lambda c: None if cm.m_eq(
            bundle.E(cm.compose_vertical(c[0][0], c[0][1]), c[1]),
            cm.compose_vertical(bundle.E(c[0][0], c[1]), bundle.E(c[0][1], c[1])),
        ) else {"gamma": repr(c[1])},
        exh,
    ))

    cpairs, exhc = _composable_pairs(bundle, budget, rng, max_len)
    report.records.append(run_law(
        "E-reproduces-composition", "Eq 6.22", cpairs,
        lambda p: None if bundle.morphism_eq(
            bundle.compose(p[0], p[1]),
            TwistedMorphism(
                bundle.base.compose(p[0].gamma, p[1].gamma),
                cm.compose_vertical(bundle.E(p[0].m, p[1].gamma), p[1].m),
            ),
        ) else {"gamma2": repr(p[0].gamma), "gamma1": repr(p[1].gamma)},
        exhc,
    ))
    return report


def verify_action_functorial(bundle: TwistedBundle, budget: int = DEFAULT_BUDGET,
                             rng: np.random.Generator | None = None,
                             max_len: int | None = None) -> LawReport:
    """The right action commutes with s_eta, t_eta, and twisted composition."""
    rng = rng or np.random.default_rng(0)
    cm = bundle.cm
    report = LawReport(suite="twisted-action")
    singles, exh = _all_morphisms(bundle, budget, rng, max_len)
    mor_samples = (cm.enumerate_morphisms() if cm.is_finite
                   else [cm.sample_morphism(rng) for _ in range(16)])
    cases = [(tm, m1) for tm in singles[: max(1, budget // max(1, len(mor_samples)))]
             for m1 in mor_samples]

    def check_st(p):
        tm, m1 = p
        acted = bundle.act(tm, m1)
        s, s_want = bundle.source(acted), bundle.act_object(bundle.source(tm), cm.source(m1))
        t, t_want = bundle.target(acted), bundle.act_object(bundle.target(tm), cm.target(m1))
        if cm.G.eq(s[1], s_want[1]) and cm.G.eq(t[1], t_want[1]):
            return None
        return {"gamma": repr(tm.gamma), "m1": cm.fmt_m(m1)}

    report.records.append(run_law("action-boundaries", "Eq 6.3", cases, check_st, exh and cm.is_finite))

    cpairs, exhc = _composable_pairs(bundle, budget, rng, max_len)
    vert = []
    hs = cm.H.elements if cm.H.is_finite else [cm.H.sample(rng) for _ in range(4)]
    for m1 in mor_samples[:8]:
        for h2 in hs[:4]:
            vert.append((TwoGroupMorphism(h2, cm.target(m1)), m1))
    quad = [(pp, mm) for pp in cpairs[: max(1, budget // max(1, len(vert)))] for mm in vert]

    def check_comp(c):
        (tm2, tm1), (m2, m1) = c
        lhs = bundle.act(bundle.compose(tm2, tm1), cm.compose_vertical(m2, m1))
        rhs = bundle.compose(bundle.act(tm2, m2), bundle.act(tm1, m1))
        if bundle.morphism_eq(lhs, rhs):
            return None
        return {"gamma2": repr(tm2.gamma), "gamma1": repr(tm1.gamma),
                "m2": cm.fmt_m(m2), "m1": cm.fmt_m(m1)}

    report.records.append(run_law("action-composition", "Eq 6.14", quad, check_comp, exhc and cm.is_finite))
    return report
