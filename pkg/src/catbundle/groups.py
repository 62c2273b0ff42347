"""Group carriers: finite cyclic and symmetric groups, and SO(2)/SO(3).

Finite elements are hashable plain values (ints for cyclic groups, image
tuples for permutations). Matrix elements are numpy arrays; equality is a
declared max-abs-entry tolerance (default 1e-9) because downstream transport
values are floating point.
"""
from __future__ import annotations

import itertools
import math
from typing import Any

import numpy as np

Element = Any

DEFAULT_GRP_TOL = 1e-9


class StructuralError(ValueError):
    """A value lies outside the carrier it was declared to belong to."""


class Group:
    """Identity, multiplication, inverse and equality; finite groups also
    expose their element list, which switches verification code between
    exhaustive and sampled modes."""

    name: str = "group"
    elements: list[Element] | None = None

    @property
    def identity(self) -> Element:
        raise NotImplementedError

    def mul(self, a: Element, b: Element) -> Element:
        raise NotImplementedError

    def inv(self, a: Element) -> Element:
        raise NotImplementedError

    def eq(self, a: Element, b: Element) -> bool:
        raise NotImplementedError

    def contains(self, a: Element) -> bool:
        raise NotImplementedError

    def sample(self, rng: np.random.Generator) -> Element:
        if self.elements is None:
            raise NotImplementedError
        return self.elements[int(rng.integers(len(self.elements)))]

    def fmt(self, a: Element) -> str:
        return str(a)

    @property
    def order(self) -> int | None:
        return None if self.elements is None else len(self.elements)

    @property
    def is_finite(self) -> bool:
        return self.elements is not None

    def __repr__(self) -> str:
        return f"<Group {self.name}>"


class CyclicGroup(Group):
    def __init__(self, n: int):
        self.n = n
        self.name = f"z{n}"
        self.elements = list(range(n))

    @property
    def identity(self) -> int:
        return 0

    def mul(self, a: int, b: int) -> int:
        return (a + b) % self.n

    def inv(self, a: int) -> int:
        return (-a) % self.n

    def eq(self, a: int, b: int) -> bool:
        return a == b

    def contains(self, a: Element) -> bool:
        return isinstance(a, int) and 0 <= a < self.n


# -- permutations as image tuples: p maps i to p[i]; (p*q)(i) = p(q(i)) --

def perm_mul(p: tuple, q: tuple) -> tuple:
    return tuple(p[q[i]] for i in range(len(p)))


def perm_inv(p: tuple) -> tuple:
    out = [0] * len(p)
    for i, v in enumerate(p):
        out[v] = i
    return tuple(out)


def perm_cycles(p: tuple) -> str:
    seen = [False] * len(p)
    parts = []
    for i in range(len(p)):
        if seen[i] or p[i] == i:
            seen[i] = True
            continue
        cyc = [i]
        seen[i] = True
        j = p[i]
        while j != i:
            cyc.append(j)
            seen[j] = True
            j = p[j]
        parts.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(parts) if parts else "e"


def perm_from_cycles(text: str, n: int) -> tuple:
    text = text.strip()
    if text in ("e", "", "()"):
        return tuple(range(n))
    out = list(range(n))
    for chunk in text.replace(")", ")|").split("|"):
        chunk = chunk.strip()
        if not chunk:
            continue
        pts = [int(t) for t in chunk.strip("()").replace(",", " ").split()]
        for a, b in zip(pts, pts[1:] + pts[:1]):
            out[a] = b
    return tuple(out)


class SymmetricGroup(Group):
    def __init__(self, n: int):
        self.n = n
        self.name = f"s{n}"
        self.elements = sorted(itertools.permutations(range(n)))

    @property
    def identity(self) -> tuple:
        return tuple(range(self.n))

    def mul(self, a: tuple, b: tuple) -> tuple:
        return perm_mul(a, b)

    def inv(self, a: tuple) -> tuple:
        return perm_inv(a)

    def eq(self, a: tuple, b: tuple) -> bool:
        return a == b

    def contains(self, a: Element) -> bool:
        return isinstance(a, tuple) and sorted(a) == list(range(self.n))

    def fmt(self, a: tuple) -> str:
        return perm_cycles(a)


# -- skew matrices and their exponentials (closed forms keep iterates on the
#    group up to roundoff, which downstream equality checks rely on) --

SO2_GEN = np.array([[0.0, -1.0], [1.0, 0.0]])


def rotation2(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def skew3(v) -> np.ndarray:
    x, y, z = v
    return np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])


def is_skew(a: np.ndarray, tol: float = 1e-12) -> bool:
    return bool(np.max(np.abs(a + a.T)) <= tol)


def skew_exp(a: np.ndarray) -> np.ndarray:
    """exp of a 2x2 or 3x3 skew matrix, in closed form."""
    n = a.shape[0]
    if n == 2:
        return rotation2(float(a[1, 0]))
    if n == 3:
        # Rodrigues; series near zero angle for stability
        theta2 = float(a[2, 1]) ** 2 + float(a[0, 2]) ** 2 + float(a[1, 0]) ** 2
        theta = math.sqrt(theta2)
        if theta < 1e-8:
            c1 = 1.0 - theta2 / 6.0
            c2 = 0.5 - theta2 / 24.0
        else:
            c1 = math.sin(theta) / theta
            c2 = (1.0 - math.cos(theta)) / theta2
        return np.eye(3) + c1 * a + c2 * (a @ a)
    raise StructuralError(f"skew_exp supports 2x2 and 3x3 matrices, got {a.shape}")


class SpecialOrthogonalGroup(Group):
    """SO(n) for n in {2, 3}; equality is max-abs entry difference <= tol."""

    def __init__(self, n: int, tol: float = DEFAULT_GRP_TOL):
        if n not in (2, 3):
            raise StructuralError("only SO(2) and SO(3) are supported")
        self.n = n
        self.tol = tol
        self.name = f"so{n}"
        self.elements = None

    @property
    def identity(self) -> np.ndarray:
        return np.eye(self.n)

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return a @ b

    def inv(self, a: np.ndarray) -> np.ndarray:
        return np.ascontiguousarray(a.T)

    def eq(self, a: np.ndarray, b: np.ndarray) -> bool:
        return bool(np.max(np.abs(np.asarray(a) - np.asarray(b))) <= self.tol)

    def contains(self, a: Element) -> bool:
        a = np.asarray(a)
        if a.shape != (self.n, self.n):
            return False
        ortho = np.max(np.abs(a @ a.T - np.eye(self.n))) <= 1e-7
        return bool(ortho and np.linalg.det(a) > 0)

    def sample(self, rng: np.random.Generator) -> np.ndarray:
        if self.n == 2:
            return rotation2(float(rng.uniform(-math.pi, math.pi)))
        return skew_exp(skew3(rng.uniform(-math.pi, math.pi, size=3)))

    def fmt(self, a: np.ndarray) -> str:
        rows = [" ".join(f"{x:.12g}" for x in row) for row in np.asarray(a)]
        return "[" + "; ".join(rows) + "]"

