"""The product categorical bundle U × G -> U, the categorical group of
functors U -> G with natural transformations between them, and the
section/trivialization correspondence.

A functor U -> G is encoded by a G-valued map on objects and an H-valued map
on generating arrows, extended multiplicatively over arrow words (which the
multiplicativity law for the H-component forces); validity additionally
requires tau(h(f)) = g(target)·g(source)^-1 on every generator.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .basecat import QuiverCategory
from .crossed import CompositionUndefined, CrossedModule, TwoGroupMorphism
from .groups import StructuralError
from .report import LawReport, run_law

DEFAULT_BUDGET = 10_000


@dataclass(frozen=True)
class ProductMorphism:
    """A morphism (gamma, h, g) of the product bundle."""
    gamma: object  # QuiverMorphism or SampledPath
    m: TwoGroupMorphism


class ProductBundle:
    def __init__(self, base, cm: CrossedModule):
        self.base = base
        self.cm = cm

    def source(self, pm: ProductMorphism):
        return (self.base.source(pm.gamma), pm.m.g)

    def target(self, pm: ProductMorphism):
        return (self.base.target(pm.gamma), self.cm.target(pm.m))

    def identity(self, obj, g) -> ProductMorphism:
        return ProductMorphism(self.base.identity(obj), self.cm.identity_morphism(g))

    def act(self, pm: ProductMorphism, m1: TwoGroupMorphism) -> ProductMorphism:
        return ProductMorphism(pm.gamma, self.cm.sdp_multiply(pm.m, m1))

    def act_object(self, obj_g, g1):
        a, g = obj_g
        return (a, self.cm.G.mul(g, g1))

    def compose(self, pm2: ProductMorphism, pm1: ProductMorphism) -> ProductMorphism:
        gamma = self.base.compose(pm2.gamma, pm1.gamma)  # raises on base mismatch
        m = self.cm.compose_vertical(pm2.m, pm1.m)  # raises on group mismatch
        return ProductMorphism(gamma, m)

    def morphism_eq(self, p1: ProductMorphism, p2: ProductMorphism) -> bool:
        return p1.gamma == p2.gamma and self.cm.m_eq(p1.m, p2.m)

    def enumerate_morphisms(self, max_len: int | None = None) -> list[ProductMorphism]:
        if not isinstance(self.base, QuiverCategory) or not self.cm.is_finite:
            raise StructuralError("enumeration needs a quiver base and a finite crossed module")
        return [
            ProductMorphism(gamma, m)
            for gamma in self.base.morphisms_upto(max_len)
            for m in self.cm.enumerate_morphisms()
        ]


class FunctorUG:
    """A functor from the base category into the categorical group.

    Quiver bases store extensional tables (g on objects, h on generating
    arrows); path bases store closures (g on points, h on whole paths).
    """

    def __init__(self, base, cm: CrossedModule,
                 g_table: dict | None = None, h_gen: dict | None = None,
                 g_fn: Callable | None = None, h_fn: Callable | None = None):
        self.base = base
        self.cm = cm
        self.g_table = g_table
        self.h_gen = h_gen
        self.g_fn = g_fn
        self.h_fn = h_fn
        if (g_table is None) == (g_fn is None):
            raise ValueError("exactly one of g_table / g_fn must be given")

    @property
    def extensional(self) -> bool:
        return self.g_table is not None

    def g(self, obj):
        if self.extensional:
            return self.g_table[obj]
        return self.g_fn(obj)

    def h(self, gamma):
        if not self.extensional:
            return self.h_fn(gamma)
        out = self.cm.H.identity
        for name in gamma.word:
            out = self.cm.H.mul(self.h_gen[name], out)
        return out

    def apply(self, gamma) -> TwoGroupMorphism:
        return TwoGroupMorphism(self.h(gamma), self.g(self.base.source(gamma)))

    # -- pointwise group structure (Prop 3.2) --

    def _require_same(self, other: "FunctorUG") -> None:
        if self.base is not other.base or self.cm is not other.cm:
            raise StructuralError("functors live over different bases or crossed modules")

    def mul(self, other: "FunctorUG") -> "FunctorUG":
        """Pointwise product self·other (self on the left)."""
        self._require_same(other)
        cm = self.cm
        if self.extensional and other.extensional:
            g_table = {a: cm.G.mul(self.g_table[a], other.g_table[a]) for a in self.base.objects}
            h_gen = {
                f: cm.H.mul(self.h_gen[f], cm.alpha(self.g_table[self.base.arrows[f][0]], other.h_gen[f]))
                for f in self.base.arrows
            }
            return FunctorUG(self.base, cm, g_table=g_table, h_gen=h_gen)
        return FunctorUG(
            self.base, cm,
            g_fn=lambda a: cm.G.mul(self.g(a), other.g(a)),
            h_fn=lambda gamma: cm.H.mul(
                self.h(gamma), cm.alpha(self.g(self.base.source(gamma)), other.h(gamma))
            ),
        )

    def inv(self) -> "FunctorUG":
        cm = self.cm
        if self.extensional:
            g_table = {a: cm.G.inv(self.g_table[a]) for a in self.base.objects}
            h_gen = {
                f: cm.alpha(cm.G.inv(self.g_table[self.base.arrows[f][0]]), cm.H.inv(self.h_gen[f]))
                for f in self.base.arrows
            }
            return FunctorUG(self.base, cm, g_table=g_table, h_gen=h_gen)
        return FunctorUG(
            self.base, cm,
            g_fn=lambda a: cm.G.inv(self.g(a)),
            h_fn=lambda gamma: cm.alpha(cm.G.inv(self.g(self.base.source(gamma))), cm.H.inv(self.h(gamma))),
        )

    def eq(self, other: "FunctorUG") -> bool:
        """Pointwise equality on objects and generating arrows (quiver bases)."""
        self._require_same(other)
        if not (self.extensional and other.extensional):
            raise StructuralError("pointwise equality needs extensional functors")
        return all(
            self.cm.G.eq(self.g_table[a], other.g_table[a]) for a in self.base.objects
        ) and all(
            self.cm.H.eq(self.h_gen[f], other.h_gen[f]) for f in self.base.arrows
        )

    def key(self):
        """Hashable identity for finite extensional functors."""
        return (
            tuple((a, self.g_table[a]) for a in self.base.objects),
            tuple((f, self.h_gen[f]) for f in sorted(self.base.arrows)),
        )


def constant_identity_functor(base, cm: CrossedModule) -> FunctorUG:
    if isinstance(base, QuiverCategory):
        return FunctorUG(
            base, cm,
            g_table={a: cm.G.identity for a in base.objects},
            h_gen={f: cm.H.identity for f in base.arrows},
        )
    return FunctorUG(base, cm, g_fn=lambda a: cm.G.identity, h_fn=lambda gamma: cm.H.identity)


def functor_from_h(base, cm: CrossedModule, h_obj) -> FunctorUG:
    """Build the functor with g = tau∘h and h(gamma) = h(target)·h(source)^-1
    from an object-level H-valued map (table for quivers, callable for paths)."""
    if isinstance(base, QuiverCategory):
        g_table = {a: cm.tau(h_obj[a]) for a in base.objects}
        h_gen = {}
        for f, (src, dst) in base.arrows.items():
            h_gen[f] = cm.H.mul(h_obj[dst], cm.H.inv(h_obj[src]))
        return FunctorUG(base, cm, g_table=g_table, h_gen=h_gen)
    fn = h_obj if callable(h_obj) else (lambda p: h_obj[tuple(np.atleast_1d(p))])
    return FunctorUG(
        base, cm,
        g_fn=lambda p: cm.tau(fn(p)),
        h_fn=lambda gamma: cm.H.mul(fn(gamma.end), cm.H.inv(fn(gamma.start))),
    )


def enumerate_functors(base: QuiverCategory, cm: CrossedModule, cap: int | None = None) -> list[FunctorUG]:
    """All extensional functors base -> G, in deterministic order.

    For each object-level g assignment, an arrow f admits exactly the h with
    tau(h) = g(target)·g(source)^-1."""
    if not cm.is_finite:
        raise StructuralError("functor enumeration needs a finite crossed module")
    out: list[FunctorUG] = []
    arrow_names = sorted(base.arrows)
    for g_assign in itertools.product(cm.G.elements, repeat=len(base.objects)):
        g_table = dict(zip(base.objects, g_assign))
        cands = []
        ok = True
        for f in arrow_names:
            src, dst = base.arrows[f]
            need = cm.G.mul(g_table[dst], cm.G.inv(g_table[src]))
            hs = [h for h in cm.H.elements if cm.G.eq(cm.tau(h), need)]
            if not hs:
                ok = False
                break
            cands.append(hs)
        if not ok:
            continue
        for combo in itertools.product(*cands):
            out.append(FunctorUG(base, cm, g_table=dict(g_table), h_gen=dict(zip(arrow_names, combo))))
            if cap is not None and len(out) >= cap:
                return out
    return out


def functor_invariant_witness(F: FunctorUG, max_len: int | None = None) -> dict | None:
    """First violation of the functor laws on the enumerated morphism set,
    or None: H-multiplicativity, tau-compatibility, identity preservation,
    and source/target/composition preservation of the induced bundle map."""
    base, cm = F.base, F.cm
    ms = base.morphisms_upto(max_len)
    for gamma in ms:
        img = F.apply(gamma)
        if not cm.G.eq(cm.source(img), F.g(base.source(gamma))):
            return {"law": "source", "gamma": repr(gamma)}
        if not cm.G.eq(cm.target(img), F.g(base.target(gamma))):
            return {"law": "target", "gamma": repr(gamma)}
        if not cm.G.eq(cm.tau(F.h(gamma)), cm.G.mul(F.g(base.target(gamma)), cm.G.inv(F.g(base.source(gamma))))):
            return {"law": "tau-compatibility", "gamma": repr(gamma)}
        if gamma.is_identity and not cm.H.eq(F.h(gamma), cm.H.identity):
            return {"law": "identity", "gamma": repr(gamma)}
    for m2, m1 in base.composable_pairs(max_len):
        comp = base.compose(m2, m1)
        if not cm.H.eq(F.h(comp), cm.H.mul(F.h(m2), F.h(m1))):
            return {"law": "h-multiplicativity", "gamma2": repr(m2), "gamma1": repr(m1)}
        if not cm.m_eq(F.apply(comp), cm.compose_vertical(F.apply(m2), F.apply(m1))):
            return {"law": "composition", "gamma2": repr(m2), "gamma1": repr(m1)}
    return None


def verify_functor(F: FunctorUG, max_len: int | None = None) -> LawReport:
    report = LawReport(suite="prop31-roundtrip")
    base, cm = F.base, F.cm
    ms = base.morphisms_upto(max_len)
    pairs = list(base.composable_pairs(max_len))
    report.records.append(run_law(
        "h-multiplicativity", "Eq 3.7", pairs,
        lambda p: None if cm.H.eq(F.h(base.compose(p[0], p[1])), cm.H.mul(F.h(p[0]), F.h(p[1])))
        else {"gamma2": repr(p[0]), "gamma1": repr(p[1])},
        True,
    ))
    report.records.append(run_law(
        "tau-compatibility", "Eq 3.8", ms,
        lambda gamma: None if cm.G.eq(
            cm.tau(F.h(gamma)),
            cm.G.mul(F.g(base.target(gamma)), cm.G.inv(F.g(base.source(gamma)))),
        ) else {"gamma": repr(gamma)},
        True,
    ))
    report.records.append(run_law(
        "identity-preservation", "Eq 3.6", [base.identity(o) for o in base.objects],
        lambda gamma: None if cm.m_eq(F.apply(gamma), cm.identity_morphism(F.g(gamma.source)))
        else {"object": gamma.source},
        True,
    ))
    report.records.append(run_law(
        "functoriality", "Eq 3.20", pairs,
        lambda p: None if cm.m_eq(
            F.apply(base.compose(p[0], p[1])),
            cm.compose_vertical(F.apply(p[0]), F.apply(p[1])),
        ) else {"gamma2": repr(p[0]), "gamma1": repr(p[1])},
        True,
    ))
    return report


def verify_prop31_roundtrip(base: QuiverCategory, cm: CrossedModule,
                            budget: int = DEFAULT_BUDGET,
                            rng: np.random.Generator | None = None,
                            max_len: int | None = None) -> LawReport:
    """Every functor built from an object-level H-map satisfies the encoding
    invariants exactly, with exhaustive functoriality; and the telescoping
    form of the composite H-value matches the generator fold."""
    rng = rng or np.random.default_rng(0)
    report = LawReport(suite="prop31-roundtrip")
    n_obj = len(base.objects)
    total = None if cm.H.order is None else cm.H.order ** n_obj
    if total is not None and total <= budget:
        h_maps = [dict(zip(base.objects, combo))
                  for combo in itertools.product(cm.H.elements, repeat=n_obj)]
        exh = True
    else:
        h_maps = [{a: cm.H.sample(rng) for a in base.objects} for _ in range(min(budget, 256))]
        exh = False
    functors = [(hm, functor_from_h(base, cm, hm)) for hm in h_maps]

    report.records.append(run_law(
        "roundtrip-invariants", "Eqs 3.7-3.8", functors,
        lambda p: functor_invariant_witness(p[1], max_len),
        exh,
    ))

    def telescoping(p):
        hm, F = p
        for m2, m1 in base.composable_pairs(max_len):
            comp = base.compose(m2, m1)
            want = cm.H.mul(hm[comp.target], cm.H.inv(hm[comp.source]))
            if not cm.H.eq(F.h(comp), want):
                return {"gamma2": repr(m2), "gamma1": repr(m1)}
        return None

    report.records.append(run_law("telescoping", "Eq 3.26", functors, telescoping, exh))

    report.records.append(run_law(
        "object-encoding", "Eq 3.9", functors,
        lambda p: None if all(
            cm.G.eq(p[1].g(a), cm.tau(p[0][a])) for a in base.objects
        ) else {"case": "g=tau∘h"},
        exh,
    ))
    return report


# -- natural transformations (Prop 3.3) --

@dataclass
class NatTransf:
    """A natural transformation between extensional functors, encoded by an
    object-level H-valued map; the target functor is the gauge transform of
    the source."""
    source: FunctorUG
    target: FunctorUG
    hT: dict

    def at(self, a) -> TwoGroupMorphism:
        return TwoGroupMorphism(self.hT[a], self.source.g(a))

    def key(self):
        return (self.source.key(), tuple((a, self.hT[a]) for a in self.source.base.objects))


def gauge(F1: FunctorUG, hT: dict) -> NatTransf:
    """The transformation out of F1 determined by hT: the target functor has
    g2 = tau(hT)·g1 on objects and h2(f) = hT(b)·h1(f)·hT(a)^-1 on arrows."""
    base, cm = F1.base, F1.cm
    g2 = {a: cm.G.mul(cm.tau(hT[a]), F1.g_table[a]) for a in base.objects}
    h2 = {}
    for f, (src, dst) in base.arrows.items():
        h2[f] = cm.H.mul(cm.H.mul(hT[dst], F1.h_gen[f]), cm.H.inv(hT[src]))
    return NatTransf(F1, FunctorUG(base, cm, g_table=g2, h_gen=h2), dict(hT))


def identity_transf(F: FunctorUG) -> NatTransf:
    return gauge(F, {a: F.cm.H.identity for a in F.base.objects})


def nat_vertical_compose(T2: NatTransf, T1: NatTransf) -> NatTransf:
    """(T2 ∘ T1)(a) = T2(a) ∘ T1(a); the h-components multiply as h2·h1."""
    if not T1.target.eq(T2.source):
        raise CompositionUndefined("target functor of T1 is not the source functor of T2")
    cm = T1.source.cm
    hT = {a: cm.H.mul(T2.hT[a], T1.hT[a]) for a in T1.source.base.objects}
    return NatTransf(T1.source, T2.target, hT)


def nat_pointwise_mul(Tp: NatTransf, T: NatTransf) -> NatTransf:
    """(T'T)(a) = T'(a)·T(a) in the morphism group."""
    cm = T.source.cm
    base = T.source.base
    hT = {a: cm.H.mul(Tp.hT[a], cm.alpha(Tp.source.g(a), T.hT[a])) for a in base.objects}
    return NatTransf(Tp.source.mul(T.source), Tp.target.mul(T.target), hT)


def nat_inverse(T: NatTransf) -> NatTransf:
    cm = T.source.cm
    base = T.source.base
    hT = {a: cm.alpha(cm.G.inv(T.source.g(a)), cm.H.inv(T.hT[a])) for a in base.objects}
    return NatTransf(T.source.inv(), T.target.inv(), hT)


def nat_eq(T1: NatTransf, T2: NatTransf) -> bool:
    cm = T1.source.cm
    return T1.source.eq(T2.source) and all(
        cm.H.eq(T1.hT[a], T2.hT[a]) for a in T1.source.base.objects
    )


def naturality_witness(T: NatTransf, max_len: int | None = None) -> dict | None:
    """First morphism whose naturality square (target∘T(a) = T(b)∘source)
    fails to commute, or None."""
    base, cm = T.source.base, T.source.cm
    for gamma in base.morphisms_upto(max_len):
        a, b = base.source(gamma), base.target(gamma)
        lhs = cm.compose_vertical(T.target.apply(gamma), T.at(a))
        rhs = cm.compose_vertical(T.at(b), T.source.apply(gamma))
        if not cm.m_eq(lhs, rhs):
            return {"gamma": repr(gamma), "lhs": cm.fmt_m(lhs), "rhs": cm.fmt_m(rhs)}
    return None


def verify_nat(T: NatTransf, max_len: int | None = None) -> LawReport:
    report = LawReport(suite="natural-transformation")
    base, cm = T.source.base, T.source.cm
    report.records.append(run_law(
        "object-gauge", "Eq 3.11", list(base.objects),
        lambda a: None if cm.G.eq(T.target.g(a), cm.G.mul(cm.tau(T.hT[a]), T.source.g(a)))
        else {"object": a},
        True,
    ))
    report.records.append(run_law(
        "h-conjugation", "Eq 3.12", base.morphisms_upto(max_len),
        lambda gamma: None if cm.H.eq(
            T.target.h(gamma),
            cm.H.mul(cm.H.mul(T.hT[base.target(gamma)], T.source.h(gamma)), cm.H.inv(T.hT[base.source(gamma)])),
        ) else {"gamma": repr(gamma)},
        True,
    ))
    report.records.append(run_law(
        "naturality-square", "Eq 3.10", [T],
        lambda t: naturality_witness(t, max_len),
        True,
    ))
    return report


def _capped(items: list, budget: int, rng: np.random.Generator):
    """Deterministic exhaustive list when small, else seeded sample."""
    if len(items) <= budget:
        return items, True
    return [items[int(rng.integers(len(items)))] for _ in range(budget)], False


def verify_GU_categorical_group(
    base: QuiverCategory,
    cm: CrossedModule,
    budget: int = DEFAULT_BUDGET,
    rng: np.random.Generator | None = None,
    functor_cap: int = 256,
) -> LawReport:
    """Certify that functors base -> G and their transformations form a
    categorical group: both group structures, s/t/identity-assignment
    homomorphisms, vertical category laws, and the exchange law."""
    rng = rng or np.random.default_rng(0)
    report = LawReport(suite="prop34-gu-group")
    Fs = enumerate_functors(base, cm, cap=functor_cap)
    n_obj = len(base.objects)
    hTs = [dict(zip(base.objects, combo))
           for combo in itertools.product(cm.H.elements, repeat=n_obj)]
    Ts = [gauge(F, hT) for F in Fs for hT in hTs]
    E = constant_identity_functor(base, cm)

    fpairs, exh = _capped([(F2, F1) for F2 in Fs for F1 in Fs], budget, rng)
    report.records.append(run_law(
        "functor-product-closure", "Prop 3.2", fpairs,
        lambda p: functor_invariant_witness(p[0].mul(p[1])),
        exh,
    ))

    ftriples, exh = _capped([(a, b, c) for a in Fs for b in Fs for c in Fs], budget, rng)
    report.records.append(run_law(
        "object-group-laws", "Prop 3.2", ftriples,
        lambda t: None if (
            t[0].mul(t[1]).mul(t[2]).eq(t[0].mul(t[1].mul(t[2])))
            and t[0].mul(t[0].inv()).eq(E)
            and t[0].mul(E).eq(t[0])
        ) else {"case": "object-group"},
        exh,
    ))

    tpairs, exh = _capped([(Tp, T) for Tp in Ts for T in Ts], budget, rng)
    report.records.append(run_law(
        "morphism-product-closure", "diagram 3.14", tpairs,
        lambda p: naturality_witness(nat_pointwise_mul(p[0], p[1])),
        exh,
    ))
    report.records.append(run_law(
        "source-target-homomorphism", "Eq 2.2", tpairs,
        lambda p: None if (
            nat_pointwise_mul(p[0], p[1]).source.eq(p[0].source.mul(p[1].source))
            and nat_pointwise_mul(p[0], p[1]).target.eq(p[0].target.mul(p[1].target))
        ) else {"case": "s/t"},
        exh,
    ))

    one_E = identity_transf(E)
    singles, exh = _capped(Ts, budget, rng)
    report.records.append(run_law(
        "morphism-group-laws", "Prop 3.4", singles,
        lambda T: None if (
            nat_eq(nat_pointwise_mul(T, nat_inverse(T)), one_E)
            and nat_eq(nat_pointwise_mul(T, one_E), T)
        ) else {"case": "morphism-group"},
        exh,
    ))

    report.records.append(run_law(
        "identity-assignment", "§2.1", fpairs,
        lambda p: None if nat_eq(
            identity_transf(p[0].mul(p[1])),
            nat_pointwise_mul(identity_transf(p[0]), identity_transf(p[1])),
        ) else {"case": "identity-assignment"},
        exh,
    ))

    # vertical category: units and associativity over composable chains
    by_source: dict = {}
    for i, T in enumerate(Ts):
        by_source.setdefault(T.source.key(), []).append(i)
    comp_pairs = [
        (Ts[j], Ts[i])
        for i, T1 in enumerate(Ts)
        for j in by_source.get(T1.target.key(), ())
    ]
    vpairs, exh = _capped(comp_pairs, budget, rng)
    report.records.append(run_law(
        "vertical-units", "Eq 3.15", singles,
        lambda T: None if (
            nat_eq(nat_vertical_compose(identity_transf(T.target), T), T)
            and nat_eq(nat_vertical_compose(T, identity_transf(T.source)), T)
        ) else {"case": "vertical-units"},
        exh,
    ))
    vtriples = [
        (gauge(T2.target, hT3), T2, T1)
        for (T2, T1) in comp_pairs
        for hT3 in hTs[: max(1, min(len(hTs), budget // max(1, len(comp_pairs))))]
    ]
    vtriples, exh = _capped(vtriples, budget, rng)
    report.records.append(run_law(
        "vertical-associativity", "Eq 3.15", vtriples,
        lambda t: None if nat_eq(
            nat_vertical_compose(nat_vertical_compose(t[0], t[1]), t[2]),
            nat_vertical_compose(t[0], nat_vertical_compose(t[1], t[2])),
        ) else {"case": "vertical-assoc"},
        exh,
    ))

    quad_total = len(comp_pairs) ** 2
    if quad_total <= budget:
        quads: Iterable = ((p, q) for p in comp_pairs for q in comp_pairs)
        exh = True
    else:
        k = max(2, int(math.isqrt(budget)))
        sub = [comp_pairs[int(rng.integers(len(comp_pairs)))] for _ in range(k)]
        quads = ((p, q) for p in sub for q in sub)
        exh = False

    def check_exchange(pq):
        (T2, T1), (Tp2, Tp1) = pq
        lhs = nat_vertical_compose(nat_pointwise_mul(Tp2, T2), nat_pointwise_mul(Tp1, T1))
        rhs = nat_pointwise_mul(nat_vertical_compose(Tp2, Tp1), nat_vertical_compose(T2, T1))
        return None if nat_eq(lhs, rhs) else {"case": "exchange"}

    report.records.append(run_law("exchange-law-functors", "Eq 3.17", quads, check_exchange, exh))
    return report


# -- sections and trivializations (§4) --

class SectionIso:
    """The bundle map Psi_sigma(a, g) = sigma(a)·g induced by the section
    u -> (u, F(u)) of the product bundle."""

    def __init__(self, F: FunctorUG):
        self.F = F
        self.bundle = ProductBundle(F.base, F.cm)

    def on_object(self, a, g):
        return (a, self.F.cm.G.mul(self.F.g(a), g))

    def on_morphism(self, pm: ProductMorphism) -> ProductMorphism:
        return ProductMorphism(pm.gamma, self.F.cm.sdp_multiply(self.F.apply(pm.gamma), pm.m))

    def inv_object(self, a, g):
        return (a, self.F.cm.G.mul(self.F.cm.G.inv(self.F.g(a)), g))

    def inv_morphism(self, pm: ProductMorphism) -> ProductMorphism:
        return ProductMorphism(
            pm.gamma,
            self.F.cm.sdp_multiply(self.F.cm.sdp_inverse(self.F.apply(pm.gamma)), pm.m),
        )

    def compose_with(self, other: "SectionIso") -> "SectionIso":
        """self ∘ other as bundle maps; corresponds to the pointwise product
        of the inducing functors."""
        return SectionIso(self.F.mul(other.F))


def section_to_iso(F: FunctorUG) -> SectionIso:
    return SectionIso(F)


def verify_section_iso(F: FunctorUG, max_len: int | None = None,
                       budget: int = DEFAULT_BUDGET,
                       rng: np.random.Generator | None = None) -> LawReport:
    rng = rng or np.random.default_rng(0)
    report = LawReport(suite="prop41-section")
    base, cm = F.base, F.cm
    iso = SectionIso(F)
    bundle = iso.bundle
    objects = [(a, g) for a in base.objects for g in cm.G.elements]
    morphisms = bundle.enumerate_morphisms(max_len)

    report.records.append(run_law(
        "section-projection", "Prop 4.1", list(base.objects),
        lambda a: None if iso.on_object(a, cm.G.identity)[0] == a else {"object": a},
        True,
    ))

    opairs, exh = _capped([(x, g1) for x in objects for g1 in cm.G.elements], budget, rng)
    report.records.append(run_law(
        "equivariance-objects", "Eq 4.4", opairs,
        lambda p: None if cm.G.eq(
            iso.on_object(*bundle.act_object(p[0], p[1]))[1],
            cm.G.mul(iso.on_object(*p[0])[1], p[1]),
        ) else {"object": str(p[0][0])},
        exh,
    ))

    mpairs, exh = _capped(
        [(pm, m1) for pm in morphisms for m1 in cm.enumerate_morphisms()], budget, rng)
    report.records.append(run_law(
        "equivariance-morphisms", "Eq 4.4", mpairs,
        lambda p: None if bundle.morphism_eq(
            iso.on_morphism(bundle.act(p[0], p[1])),
            bundle.act(iso.on_morphism(p[0]), p[1]),
        ) else {"gamma": repr(p[0].gamma)},
        exh,
    ))

    report.records.append(run_law(
        "fiber-preservation", "Prop 4.1", objects + morphisms,
        lambda x: None if (
            (iso.on_object(*x)[0] == x[0]) if isinstance(x, tuple)
            else (iso.on_morphism(x).gamma == x.gamma)
        ) else {"case": "fiber"},
        True,
    ))

    def obj_bij(_):
        seen = []
        for x in objects:
            y = iso.on_object(*x)
            for prev_x, prev_y in seen:
                if prev_y[0] == y[0] and cm.G.eq(prev_y[1], y[1]) and prev_x != x:
                    return {"collision": f"{prev_x} vs {x}"}
            seen.append((x, y))
        for x in objects:  # surjectivity via the explicit inverse
            back = iso.on_object(*iso.inv_object(*x))
            if not (back[0] == x[0] and cm.G.eq(back[1], x[1])):
                return {"no-preimage": str(x[0])}
        return None

    report.records.append(run_law("bijectivity-objects", "Prop 4.1", [0], obj_bij, True))

    def mor_bij(_):
        keys = set()
        for pm in morphisms:
            y = iso.on_morphism(pm)
            k = (y.gamma, y.m.h, y.m.g)
            if k in keys:
                return {"collision": repr(pm.gamma)}
            keys.add(k)
        for pm in morphisms:
            back = iso.on_morphism(iso.inv_morphism(pm))
            if not bundle.morphism_eq(back, pm):
                return {"no-preimage": repr(pm.gamma)}
        return None

    report.records.append(run_law("bijectivity-morphisms", "Prop 4.1", [0], mor_bij, True))

    comp_pairs = [
        (pm2, pm1)
        for pm1 in morphisms for pm2 in morphisms
        if pm1.gamma.target == pm2.gamma.source and cm.G.eq(cm.target(pm1.m), pm2.m.g)
    ]
    cases, exh = _capped(comp_pairs, budget, rng)
    report.records.append(run_law(
        "composition-preservation", "Eq 4.5", cases,
        lambda p: None if bundle.morphism_eq(
            iso.on_morphism(bundle.compose(p[0], p[1])),
            bundle.compose(iso.on_morphism(p[0]), iso.on_morphism(p[1])),
        ) else {"gamma2": repr(p[0].gamma), "gamma1": repr(p[1].gamma)},
        exh,
    ))
    return report


class ExtractionRefused(ValueError):
    """The given endofunctor is not fiber-preserving or not equivariant."""


def extract_functor(phi: SectionIso | object, base: QuiverCategory, cm: CrossedModule,
                    max_len: int | None = None) -> FunctorUG:
    """Recover the functor sigma with phi(a, g) = (a, sigma(a)·g) from an
    equivariant fiber-preserving bundle endofunctor; refuses with a witness
    otherwise."""
    bundle = ProductBundle(base, cm)
    on_object = phi.on_object
    on_morphism = phi.on_morphism
    for a in base.objects:
        img = on_object(a, cm.G.identity)
        if img[0] != a:
            raise ExtractionRefused(f"not fiber-preserving at object {a!r}")
    sample_gs = cm.G.elements[: min(8, len(cm.G.elements))] if cm.G.is_finite else []
    for a in base.objects:
        for g1 in sample_gs:
            lhs = on_object(a, g1)
            rhs = bundle.act_object(on_object(a, cm.G.identity), g1)
            if not (lhs[0] == rhs[0] and cm.G.eq(lhs[1], rhs[1])):
                raise ExtractionRefused(f"not equivariant at object {a!r}, g={cm.G.fmt(g1)}")
    g_table = {a: on_object(a, cm.G.identity)[1] for a in base.objects}
    h_gen = {}
    for f in base.arrows:
        gamma = base.arrow(f)
        img = on_morphism(ProductMorphism(gamma, cm.unit))
        if img.gamma != gamma:
            raise ExtractionRefused(f"not fiber-preserving at arrow {f!r}")
        h_gen[f] = img.m.h
        if not cm.G.eq(img.m.g, g_table[gamma.source]):
            raise ExtractionRefused(f"source intertwining fails at arrow {f!r}")
    for m1 in (cm.enumerate_morphisms()[:12] if cm.is_finite else []):
        gamma = next(iter(base.generators()), None)
        if gamma is None:
            break
        pm = ProductMorphism(gamma, cm.unit)
        lhs = on_morphism(bundle.act(pm, m1))
        rhs = bundle.act(on_morphism(pm), m1)
        if not bundle.morphism_eq(lhs, rhs):
            raise ExtractionRefused(f"not equivariant at arrow {gamma!r}")
    F = FunctorUG(base, cm, g_table=g_table, h_gen=h_gen)
    witness = functor_invariant_witness(F, max_len)
    if witness is not None:
        raise ExtractionRefused(f"extracted data is not a functor: {witness}")
    return F


def verify_composition_correspondence(F2: FunctorUG, F1: FunctorUG,
                                      max_len: int | None = None) -> LawReport:
    """Composition of the induced bundle automorphisms corresponds to the
    pointwise product of the functors."""
    report = LawReport(suite="prop42-correspondence")
    base, cm = F1.base, F1.cm
    phi2, phi1 = SectionIso(F2), SectionIso(F1)
    composed = phi2.compose_with(phi1)

    def check(_):
        extracted = extract_functor(composed, base, cm, max_len)
        want = F2.mul(F1)
        return None if extracted.eq(want) else {"case": "sigma-product"}

    report.records.append(run_law("composition-correspondence", "Eq 4.11", [0], check, True))
    report.records.append(run_law(
        "extraction-roundtrip", "Eq 4.7", [F1, F2],
        lambda F: None if extract_functor(SectionIso(F), base, cm, max_len).eq(F)
        else {"case": "roundtrip"},
        True,
    ))
    report.records.append(run_law(
        "intertwining", "Eq 4.8", base.morphisms_upto(max_len),
        lambda gamma: None if (
            cm.G.eq(cm.source(F1.apply(gamma)), F1.g(base.source(gamma)))
            and cm.G.eq(cm.target(F1.apply(gamma)), F1.g(base.target(gamma)))
        ) else {"gamma": repr(gamma)},
        True,
    ))
    return report


def verify_bundle_axioms(base: QuiverCategory, cm: CrossedModule,
                         budget: int = DEFAULT_BUDGET,
                         rng: np.random.Generator | None = None,
                         max_len: int | None = None) -> LawReport:
    """Principal-bundle axioms for the product bundle: surjectivity, freeness
    and fiber-transitivity of the action, plus category laws upstairs."""
    rng = rng or np.random.default_rng(0)
    report = LawReport(suite="bundle-axioms")
    bundle = ProductBundle(base, cm)
    morphisms = bundle.enumerate_morphisms(max_len)
    mor_g = cm.enumerate_morphisms()
    objects = [(a, g) for a in base.objects for g in cm.G.elements]

    report.records.append(run_law(
        "b1-surjectivity", "§2.2 (b1)",
        list(base.objects) + base.morphisms_upto(max_len),
        lambda x: None if (
            any(o[0] == x for o in objects) if isinstance(x, str)
            else any(pm.gamma == x for pm in morphisms)
        ) else {"missing": repr(x)},
        True,
    ))

    ocases, exh = _capped([(x, m) for x in objects for m in cm.G.elements], budget, rng)
    report.records.append(run_law(
        "b2-freeness-objects", "§2.2 (b2)", ocases,
        lambda p: None if (
            not cm.G.eq(bundle.act_object(p[0], p[1])[1], p[0][1]) or cm.G.eq(p[1], cm.G.identity)
        ) else {"object": str(p[0][0]), "g": cm.G.fmt(p[1])},
        exh,
    ))
    mcases, exh = _capped([(pm, m) for pm in morphisms for m in mor_g], budget, rng)
    report.records.append(run_law(
        "b2-freeness-morphisms", "§2.2 (b2)", mcases,
        lambda p: None if (
            not cm.m_eq(bundle.act(p[0], p[1]).m, p[0].m) or cm.m_eq(p[1], cm.unit)
        ) else {"gamma": repr(p[0].gamma)},
        exh,
    ))

    fcases, exh = _capped([(x, y) for x in objects for y in objects if x[0] == y[0]], budget, rng)
    report.records.append(run_law(
        "b3-transitivity-objects", "§2.2 (b3)", fcases,
        lambda p: None if cm.G.eq(
            bundle.act_object(p[0], cm.G.mul(cm.G.inv(p[0][1]), p[1][1]))[1], p[1][1]
        ) else {"object": str(p[0][0])},
        exh,
    ))

    fiber_m, exh = _capped(
        [(p1, p2) for p1 in morphisms for p2 in morphisms if p1.gamma == p2.gamma],
        budget, rng)
    report.records.append(run_law(
        "b3-transitivity-morphisms", "§2.2 (b3)", fiber_m,
        lambda p: None if bundle.morphism_eq(
            bundle.act(p[0], cm.sdp_multiply(cm.sdp_inverse(p[0].m), p[1].m)), p[1],
        ) else {"gamma": repr(p[0].gamma)},
        exh,
    ))

    comp_pairs = [
        (pm2, pm1)
        for pm1 in morphisms for pm2 in morphisms
        if pm1.gamma.target == pm2.gamma.source and cm.G.eq(cm.target(pm1.m), pm2.m.g)
    ]
    ccases, exh = _capped(comp_pairs, budget, rng)
    report.records.append(run_law(
        "composition-units", "Eq 3.4", morphisms,
        lambda pm: None if (
            bundle.morphism_eq(bundle.compose(pm, bundle.identity(*bundle.source(pm))), pm)
            and bundle.morphism_eq(bundle.compose(bundle.identity(*bundle.target(pm)), pm), pm)
        ) else {"gamma": repr(pm.gamma)},
        True,
    ))
    g_comp = [
        (TwoGroupMorphism(h2, cm.target(TwoGroupMorphism(h1, g1))), TwoGroupMorphism(h1, g1))
        for h1 in cm.H.elements for g1 in cm.G.elements for h2 in cm.H.elements
    ]
    acases, exh = _capped(
        [(pp, mm) for pp in comp_pairs for mm in g_comp], budget, rng)
    report.records.append(run_law(
        "action-functoriality", "Eq 3.2", acases,
        lambda c: None if _action_functoriality_ok(bundle, c[0], c[1]) else
        {"gamma2": repr(c[0][0].gamma), "gamma1": repr(c[0][1].gamma),
         "m2": cm.fmt_m(c[1][0]), "m1": cm.fmt_m(c[1][1])},
        exh,
    ))
    return report


def _action_functoriality_ok(bundle: ProductBundle, pms, mms) -> bool:
    """The right action commutes with s, t and composition: acting by a
    composable (m2, m1) on a composite equals composing the acted morphisms."""
    cm = bundle.cm
    pm2, pm1 = pms
    m2, m1 = mms
    comp = bundle.compose(pm2, pm1)
    acted = bundle.act(comp, cm.compose_vertical(m2, m1))
    split = bundle.compose(bundle.act(pm2, m2), bundle.act(pm1, m1))
    if not bundle.morphism_eq(acted, split):
        return False
    s = bundle.source(bundle.act(pm1, m1))
    s_want = bundle.act_object(bundle.source(pm1), cm.source(m1))
    t = bundle.target(bundle.act(pm1, m1))
    t_want = bundle.act_object(bundle.target(pm1), cm.target(m1))
    return (s[0] == s_want[0] and cm.G.eq(s[1], s_want[1])
            and t[0] == t_want[0] and cm.G.eq(t[1], t_want[1]))
