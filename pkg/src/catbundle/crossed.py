"""Crossed modules and the 2-group morphism calculus on H ⋊ G.

A crossed module (G, H, alpha, tau) determines a categorical group whose
object group is G and whose morphism group is the semidirect product H ⋊ G:
the pair (h, g) has source g and target tau(h)·g, group multiplication

    (h2, g2)·(h1, g1) = (h2·alpha_{g2}(h1), g2·g1)

and categorical (vertical) composition

    (h2, g2) ∘ (h1, g1) = (h2·h1, g1)   defined only when tau(h1)·g1 = g2.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .groups import (
    CyclicGroup,
    Element,
    Group,
    SpecialOrthogonalGroup,
    StructuralError,
    SymmetricGroup,
)
from .report import LawReport, run_law

DEFAULT_BUDGET = 10_000


@dataclass(frozen=True)
class TwoGroupMorphism:
    """A morphism (h, g) of the categorical group, in (h, g) coordinates."""
    h: Element
    g: Element


class CompositionUndefined(ValueError):
    """Vertical composition attempted on a source/target mismatch."""

    def __init__(self, message: str, target_value=None, source_value=None):
        super().__init__(message)
        self.target_value = target_value
        self.source_value = source_value


class CrossedModule:
    def __init__(
        self,
        name: str,
        G: Group,
        H: Group,
        alpha: Callable[[Element, Element], Element],
        tau: Callable[[Element], Element],
        broken: bool = False,
        description: str = "",
    ):
        self.name = name
        self.G = G
        self.H = H
        self.alpha = alpha
        self.tau = tau
        self.broken = broken
        self.description = description

    def __repr__(self) -> str:
        return f"<CrossedModule {self.name}>"

    # -- morphism structure maps (source, target, identities) --

    def source(self, m: TwoGroupMorphism) -> Element:
        return m.g

    def target(self, m: TwoGroupMorphism) -> Element:
        return self.G.mul(self.tau(m.h), m.g)

    def identity_morphism(self, g: Element) -> TwoGroupMorphism:
        return TwoGroupMorphism(self.H.identity, g)

    @property
    def unit(self) -> TwoGroupMorphism:
        return TwoGroupMorphism(self.H.identity, self.G.identity)

    def m_eq(self, m1: TwoGroupMorphism, m2: TwoGroupMorphism) -> bool:
        return self.H.eq(m1.h, m2.h) and self.G.eq(m1.g, m2.g)

    def fmt_m(self, m: TwoGroupMorphism) -> str:
        return f"({self.H.fmt(m.h)}, {self.G.fmt(m.g)})"

    # -- the two compositions --

    def sdp_multiply(self, m2: TwoGroupMorphism, m1: TwoGroupMorphism) -> TwoGroupMorphism:
        return TwoGroupMorphism(
            self.H.mul(m2.h, self.alpha(m2.g, m1.h)),
            self.G.mul(m2.g, m1.g),
        )

    def sdp_inverse(self, m: TwoGroupMorphism) -> TwoGroupMorphism:
        ginv = self.G.inv(m.g)
        return TwoGroupMorphism(self.alpha(ginv, self.H.inv(m.h)), ginv)

    def compose_vertical(self, m2: TwoGroupMorphism, m1: TwoGroupMorphism) -> TwoGroupMorphism:
        t1 = self.target(m1)
        if not self.G.eq(t1, m2.g):
            raise CompositionUndefined(
                f"target {self.G.fmt(t1)} of first morphism != source {self.G.fmt(m2.g)} of second",
                target_value=t1,
                source_value=m2.g,
            )
        return TwoGroupMorphism(self.H.mul(m2.h, m1.h), m1.g)

    def compositional_inverse(self, m: TwoGroupMorphism) -> TwoGroupMorphism:
        return TwoGroupMorphism(self.H.inv(m.h), self.target(m))

    # -- enumeration / sampling --

    @property
    def is_finite(self) -> bool:
        return self.G.is_finite and self.H.is_finite

    def enumerate_morphisms(self) -> list[TwoGroupMorphism]:
        if not self.is_finite:
            raise StructuralError(f"{self.name} has an infinite morphism set")
        return [TwoGroupMorphism(h, g) for h in self.H.elements for g in self.G.elements]

    def sample_morphism(self, rng: np.random.Generator) -> TwoGroupMorphism:
        return TwoGroupMorphism(self.H.sample(rng), self.G.sample(rng))


# -- verification --

def _check_carriers(cm: CrossedModule, rng: np.random.Generator, n: int = 64) -> None:
    """Structural probe, distinct from axiom failure: alpha must land in H
    and tau in G."""
    for _ in range(n):
        g = cm.G.sample(rng)
        h = cm.H.sample(rng)
        if not cm.G.contains(cm.tau(h)):
            raise StructuralError(f"tau({cm.H.fmt(h)}) is not an element of {cm.G.name}")
        if not cm.H.contains(cm.alpha(g, h)):
            raise StructuralError(
                f"alpha_{cm.G.fmt(g)}({cm.H.fmt(h)}) is not an element of {cm.H.name}"
            )


def _space(cm: CrossedModule, *sizes) -> int | None:
    """Product of carrier orders for 'g'/'h' slots; None if infinite."""
    total = 1
    for s in sizes:
        grp = cm.G if s == "g" else cm.H
        if grp.order is None:
            return None
        total *= grp.order
    return total


def _tuples(cm: CrossedModule, slots: str, budget: int, rng: np.random.Generator):
    """Deterministic exhaustive product when small enough, else seeded samples.

    Returns (iterable of tuples, exhaustive flag).
    """
    total = _space(cm, *slots)
    if total is not None and total <= budget:
        pools = [(cm.G.elements if s == "g" else cm.H.elements) for s in slots]
        return itertools.product(*pools), True

    def gen():
        for _ in range(budget):
            yield tuple(
                (cm.G.sample(rng) if s == "g" else cm.H.sample(rng)) for s in slots
            )

    return gen(), False


def verify_crossed_module(
    cm: CrossedModule,
    sample_budget: int = DEFAULT_BUDGET,
    rng: np.random.Generator | None = None,
) -> LawReport:
    """Certify the crossed-module axioms, with witnesses on failure.

    Checks tau-homomorphism, alpha_g in Aut(H), g -> alpha_g homomorphism,
    the Peiffer law, plus source/target/identity-assignment homomorphism
    properties of the induced maps on H ⋊ G."""
    rng = rng or np.random.default_rng(0)
    _check_carriers(cm, rng)
    report = LawReport(suite="crossed-module")
    G, H = cm.G, cm.H

    cases, exh = _tuples(cm, "hh", sample_budget, rng)
    report.records.append(run_law(
        "tau-homomorphism", "§2.1", cases,
        lambda t: None if G.eq(cm.tau(H.mul(t[0], t[1])), G.mul(cm.tau(t[0]), cm.tau(t[1])))
        else {"h": H.fmt(t[0]), "h2": H.fmt(t[1])},
        exh,
    ))

    cases, exh = _tuples(cm, "ghh", sample_budget, rng)
    report.records.append(run_law(
        "alpha-automorphism", "§2.1", cases,
        lambda t: None if (
            H.eq(cm.alpha(t[0], H.mul(t[1], t[2])), H.mul(cm.alpha(t[0], t[1]), cm.alpha(t[0], t[2])))
            and H.eq(cm.alpha(t[0], cm.alpha(G.inv(t[0]), t[1])), t[1])
        ) else {"g": G.fmt(t[0]), "h": H.fmt(t[1]), "h2": H.fmt(t[2])},
        exh,
    ))

    cases, exh = _tuples(cm, "ggh", sample_budget, rng)
    report.records.append(run_law(
        "alpha-family-homomorphism", "§2.1", cases,
        lambda t: None if (
            H.eq(cm.alpha(G.mul(t[0], t[1]), t[2]), cm.alpha(t[0], cm.alpha(t[1], t[2])))
            and H.eq(cm.alpha(G.identity, t[2]), t[2])
        ) else {"g": G.fmt(t[0]), "g2": G.fmt(t[1]), "h": H.fmt(t[2])},
        exh,
    ))

    cases, exh = _tuples(cm, "hh", sample_budget, rng)
    report.records.append(run_law(
        "peiffer", "Eq 2.4", cases,
        lambda t: None if H.eq(
            cm.alpha(cm.tau(t[0]), t[1]),
            H.mul(H.mul(t[0], t[1]), H.inv(t[0])),
        ) else {
            "h": H.fmt(t[0]), "h2": H.fmt(t[1]),
            "lhs": H.fmt(cm.alpha(cm.tau(t[0]), t[1])),
            "rhs": H.fmt(H.mul(H.mul(t[0], t[1]), H.inv(t[0]))),
        },
        exh,
    ))

    # s and t on H ⋊ G are homomorphisms; t-hom is the equivariance of tau.
    cases, exh = _tuples(cm, "hghg", sample_budget, rng)
    report.records.append(run_law(
        "source-homomorphism", "Eq 2.2", cases,
        lambda t: None if G.eq(
            cm.source(cm.sdp_multiply(TwoGroupMorphism(t[0], t[1]), TwoGroupMorphism(t[2], t[3]))),
            G.mul(t[1], t[3]),
        ) else {"m2": cm.fmt_m(TwoGroupMorphism(t[0], t[1])), "m1": cm.fmt_m(TwoGroupMorphism(t[2], t[3]))},
        exh,
    ))

    cases, exh = _tuples(cm, "hghg", sample_budget, rng)
    report.records.append(run_law(
        "target-homomorphism", "Eq 2.2", cases,
        lambda t: None if G.eq(
            cm.target(cm.sdp_multiply(TwoGroupMorphism(t[0], t[1]), TwoGroupMorphism(t[2], t[3]))),
            G.mul(cm.target(TwoGroupMorphism(t[0], t[1])), cm.target(TwoGroupMorphism(t[2], t[3]))),
        ) else {"m2": cm.fmt_m(TwoGroupMorphism(t[0], t[1])), "m1": cm.fmt_m(TwoGroupMorphism(t[2], t[3]))},
        exh,
    ))

    cases, exh = _tuples(cm, "gg", sample_budget, rng)
    report.records.append(run_law(
        "identity-assignment-homomorphism", "§2.1", cases,
        lambda t: None if cm.m_eq(
            cm.identity_morphism(G.mul(t[0], t[1])),
            cm.sdp_multiply(cm.identity_morphism(t[0]), cm.identity_morphism(t[1])),
        ) else {"g": G.fmt(t[0]), "g2": G.fmt(t[1])},
        exh,
    ))
    return report


def composable_quadruples(
    cm: CrossedModule, budget: int, rng: np.random.Generator
):
    """(phi2, phi1, psi2, psi1) with both vertical composites defined.

    Free parameters are (h_phi1, g_phi1, h_phi2) and likewise for psi; the
    sources of phi2/psi2 are forced by composability."""
    total = _space(cm, "hghhgh")
    exhaustive = total is not None and total <= budget

    def build(h1, g1, h2, k1, u1, k2):
        phi1 = TwoGroupMorphism(h1, g1)
        phi2 = TwoGroupMorphism(h2, cm.target(phi1))
        psi1 = TwoGroupMorphism(k1, u1)
        psi2 = TwoGroupMorphism(k2, cm.target(psi1))
        return phi2, phi1, psi2, psi1

    if exhaustive:
        cases = (
            build(*t)
            for t in itertools.product(
                cm.H.elements, cm.G.elements, cm.H.elements,
                cm.H.elements, cm.G.elements, cm.H.elements,
            )
        )
    else:
        def gen():
            for _ in range(budget):
                yield build(
                    cm.H.sample(rng), cm.G.sample(rng), cm.H.sample(rng),
                    cm.H.sample(rng), cm.G.sample(rng), cm.H.sample(rng),
                )
        cases = gen()
    return cases, exhaustive


def verify_exchange_law(
    cm: CrossedModule,
    sample_budget: int = DEFAULT_BUDGET,
    rng: np.random.Generator | None = None,
) -> LawReport:
    """(phi2 psi2) ∘ (phi1 psi1) = (phi2 ∘ phi1)(psi2 ∘ psi1) on composable
    quadruples."""
    rng = rng or np.random.default_rng(0)
    report = LawReport(suite="exchange-law")
    cases, exh = composable_quadruples(cm, sample_budget, rng)

    def check(q):
        phi2, phi1, psi2, psi1 = q
        lhs = cm.compose_vertical(cm.sdp_multiply(phi2, psi2), cm.sdp_multiply(phi1, psi1))
        rhs = cm.sdp_multiply(cm.compose_vertical(phi2, phi1), cm.compose_vertical(psi2, psi1))
        if cm.m_eq(lhs, rhs):
            return None
        return {
            "phi2": cm.fmt_m(phi2), "phi1": cm.fmt_m(phi1),
            "psi2": cm.fmt_m(psi2), "psi1": cm.fmt_m(psi1),
            "lhs": cm.fmt_m(lhs), "rhs": cm.fmt_m(rhs),
        }

    report.records.append(run_law("exchange-law", "Eq 2.3", cases, check, exh))
    return report


# -- built-in catalog --

def _conjugation_module(name: str, grp: Group, description: str) -> CrossedModule:
    return CrossedModule(
        name, grp, grp,
        alpha=lambda g, h: grp.mul(grp.mul(g, h), grp.inv(g)),
        tau=lambda h: h,
        description=description,
    )


def _trivial_module(name: str, G: Group, H: Group, description: str, broken: bool = False) -> CrossedModule:
    return CrossedModule(
        name, G, H,
        alpha=lambda g, h: h,
        tau=lambda h: G.identity,
        broken=broken,
        description=description,
    )


def catalog() -> dict[str, CrossedModule]:
    """Built-in crossed modules, addressable by id; stable ordering."""
    z2, z4 = CyclicGroup(2), CyclicGroup(4)
    s3 = SymmetricGroup(3)
    so2, so3 = SpecialOrthogonalGroup(2), SpecialOrthogonalGroup(3)
    entries = [
        _conjugation_module("z4-conj", CyclicGroup(4), "conjugation module on Z4 (abelian, so the action is trivial)"),
        _conjugation_module("s3-conj", s3, "conjugation module on S3"),
        _conjugation_module("so2-conj", so2, "conjugation module on SO(2)"),
        _conjugation_module("so3-conj", so3, "conjugation module on SO(3)"),
        _trivial_module("z4-abelian", CyclicGroup(4), z4, "trivial action and trivial tau on Z4/Z4"),
        _trivial_module("z4-z2", CyclicGroup(4), z2, "trivial action and trivial tau on Z4/Z2"),
        _trivial_module(
            "z2-s3-broken", CyclicGroup(2), SymmetricGroup(3),
            "deliberately broken: trivial action with nonabelian H violates the Peiffer law",
            broken=True,
        ),
    ]
    return {cm.name: cm for cm in entries}


def get_module(name: str) -> CrossedModule:
    cat = catalog()
    if name not in cat:
        raise KeyError(f"unknown crossed module {name!r}; known: {', '.join(cat)}")
    return cat[name]
