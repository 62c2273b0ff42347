"""Concrete base categories: free categories on finite quivers, and a
category of piecewise-linear sampled paths on a Euclidean chart.

Quiver morphisms are arrow words stored in application order (first arrow
first), so composition is word concatenation and strictly associative.

A SampledPath is an ordered array of points; composing paths records the
junction as a binary tree node so that parallel transport of a composite is,
by construction, the product of the transports of its pieces.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .crossed import CompositionUndefined

DEFAULT_WORD_BOUND = 4
DEFAULT_PT_TOL = 1e-12


@dataclass(frozen=True)
class QuiverMorphism:
    source: str
    target: str
    word: tuple[str, ...]  # arrow names, first applied first

    @property
    def is_identity(self) -> bool:
        return not self.word

    def __repr__(self) -> str:
        body = "∘".join(reversed(self.word)) if self.word else f"id_{self.source}"
        return f"{body}:{self.source}->{self.target}"


class QuiverCategory:
    """Free category on a finite quiver; morphisms enumerated up to a word
    length bound."""

    def __init__(self, objects: Sequence[str], arrows: Sequence[tuple[str, str, str]],
                 word_bound: int = DEFAULT_WORD_BOUND):
        self.objects = tuple(objects)
        self.arrows: dict[str, tuple[str, str]] = {}
        for name, src, dst in arrows:
            if name in self.arrows:
                raise ValueError(f"duplicate arrow name {name!r}")
            if src not in self.objects or dst not in self.objects:
                raise ValueError(f"arrow {name!r} endpoints not among objects")
            self.arrows[name] = (src, dst)
        self.word_bound = word_bound

    def identity(self, obj: str) -> QuiverMorphism:
        if obj not in self.objects:
            raise ValueError(f"unknown object {obj!r}")
        return QuiverMorphism(obj, obj, ())

    def arrow(self, name: str) -> QuiverMorphism:
        src, dst = self.arrows[name]
        return QuiverMorphism(src, dst, (name,))

    def generators(self) -> list[QuiverMorphism]:
        return [self.arrow(name) for name in self.arrows]

    def source(self, m: QuiverMorphism) -> str:
        return m.source

    def target(self, m: QuiverMorphism) -> str:
        return m.target

    def compose(self, m2: QuiverMorphism, m1: QuiverMorphism) -> QuiverMorphism:
        """m2 ∘ m1: apply m1 first."""
        if m1.target != m2.source:
            raise CompositionUndefined(
                f"base morphisms not composable: target {m1.target!r} != source {m2.source!r}",
                target_value=m1.target, source_value=m2.source,
            )
        return QuiverMorphism(m1.source, m2.target, m1.word + m2.word)

    def morphisms_upto(self, max_len: int | None = None) -> list[QuiverMorphism]:
        """All composable arrow words of length <= max_len, plus identities;
        deterministic order (identities first, then by length, then lexicographic)."""
        if max_len is None:
            max_len = self.word_bound
        out = [self.identity(o) for o in self.objects]
        current: list[tuple[str, tuple[str, ...], str]] = [
            (src, (), src) for src in self.objects
        ]  # (source, word, current target)
        for _ in range(max_len):
            nxt = []
            for src, word, at in current:
                for name in self.arrows:
                    a_src, a_dst = self.arrows[name]
                    if a_src == at:
                        nxt.append((src, word + (name,), a_dst))
            nxt.sort()
            for src, word, at in nxt:
                out.append(QuiverMorphism(src, at, word))
            current = nxt
            if not current:
                break
        return out

    def composable_pairs(self, max_len: int | None = None) -> Iterator[tuple[QuiverMorphism, QuiverMorphism]]:
        ms = self.morphisms_upto(max_len)
        for m1 in ms:
            for m2 in ms:
                if m1.target == m2.source:
                    yield m2, m1


class SampledPath:
    """Piecewise-linear path through `samples` (shape (k, dim), k >= 2),
    parametrized over [0, 1].

    `pieces` records composition structure: None for a directly-sampled path,
    else (first, second). Flat ends are declared metadata; sampled paths
    cannot be literally smooth.
    """

    def __init__(self, samples, flat_ends: bool = True,
                 pieces: tuple["SampledPath", "SampledPath"] | None = None):
        arr = np.asarray(samples, dtype=float)
        if arr.ndim == 1:
            arr = arr[:, None]
        if arr.ndim != 2 or arr.shape[0] < 2:
            raise ValueError("a path needs at least 2 samples of equal dimension")
        self.samples = arr
        self.flat_ends = flat_ends
        self.pieces = pieces

    @property
    def dim(self) -> int:
        return self.samples.shape[1]

    @property
    def start(self) -> np.ndarray:
        return self.samples[0]

    @property
    def end(self) -> np.ndarray:
        return self.samples[-1]

    def leaves(self) -> Iterator["SampledPath"]:
        if self.pieces is None:
            yield self
        else:
            yield from self.pieces[0].leaves()
            yield from self.pieces[1].leaves()

    def segments(self) -> Iterator[tuple[np.ndarray, np.ndarray]]:
        for a, b in zip(self.samples[:-1], self.samples[1:]):
            yield a, b

    def reverse(self) -> "SampledPath":
        if self.pieces is None:
            return SampledPath(self.samples[::-1].copy(), self.flat_ends)
        first, second = self.pieces
        rev = compose_paths(first.reverse(), second.reverse())
        return rev

    def dedup(self, tol: float = DEFAULT_PT_TOL) -> np.ndarray:
        """Samples with consecutive duplicates (zero-length segments) removed;
        canonical form for path equality in tests."""
        keep = [self.samples[0]]
        for p in self.samples[1:]:
            if np.max(np.abs(p - keep[-1])) > tol:
                keep.append(p)
        if len(keep) == 1:
            keep.append(self.samples[-1])
        return np.array(keep)

    def __repr__(self) -> str:
        return f"<SampledPath dim={self.dim} samples={len(self.samples)}>"


def constant_path(point) -> SampledPath:
    p = np.atleast_1d(np.asarray(point, dtype=float))
    return SampledPath(np.stack([p, p]))


def compose_paths(gamma2: SampledPath, gamma1: SampledPath,
                  tol: float = DEFAULT_PT_TOL) -> SampledPath:
    """gamma2 ∘ gamma1 (gamma1 first): concatenated samples with the shared
    junction point deduplicated, renormalized over [0, 1]."""
    if gamma1.dim != gamma2.dim:
        raise CompositionUndefined("paths live in different ambient dimensions")
    if np.max(np.abs(gamma1.end - gamma2.start)) > tol:
        raise CompositionUndefined(
            f"path endpoints do not match within {tol}: {gamma1.end} vs {gamma2.start}",
            target_value=gamma1.end, source_value=gamma2.start,
        )
    samples = np.vstack([gamma1.samples, gamma2.samples[1:]])
    return SampledPath(samples, gamma1.flat_ends and gamma2.flat_ends,
                       pieces=(gamma1, gamma2))


class PathCategory:
    """Points of R^dim as objects, sampled paths as morphisms; composition is
    concatenation when endpoints match within eps_pt."""

    def __init__(self, dim: int, eps_pt: float = DEFAULT_PT_TOL):
        if dim not in (1, 2, 3):
            raise ValueError("ambient dimension must be 1, 2 or 3")
        self.dim = dim
        self.eps_pt = eps_pt

    def identity(self, point) -> SampledPath:
        return constant_path(point)

    def source(self, p: SampledPath) -> np.ndarray:
        return p.start

    def target(self, p: SampledPath) -> np.ndarray:
        return p.end

    def compose(self, gamma2: SampledPath, gamma1: SampledPath) -> SampledPath:
        return compose_paths(gamma2, gamma1, self.eps_pt)

    def point_eq(self, a, b) -> bool:
        return bool(np.max(np.abs(np.asarray(a, dtype=float) - np.asarray(b, dtype=float))) <= self.eps_pt)

    def random_path(self, rng: np.random.Generator, n_segments: int | None = None,
                    start=None, scale: float = 1.0) -> SampledPath:
        """Seeded random piecewise-linear path used by sampled suites."""
        if n_segments is None:
            n_segments = int(rng.integers(1, 4))
        if start is None:
            start = rng.uniform(-1.0, 1.0, size=self.dim)
        pts = [np.asarray(start, dtype=float)]
        for _ in range(n_segments):
            pts.append(pts[-1] + rng.uniform(-scale, scale, size=self.dim))
        return SampledPath(np.stack(pts))
