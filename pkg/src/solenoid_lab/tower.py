"""Towers of finite covers of the n-torus.

A tower is a sequence of nonsingular integer matrices ``A_1, ..., A_d``; the
k-th cover corresponds to the sublattice ``L_k = (A_1 ... A_k) Z^n``.  Fibers
are the coset spaces ``Z^n / L_k``, holonomy is translation on them, and the
dual group of the inverse limit is the union of ``(A_1 ... A_k)^{-T} Z^n``.

Negative answers here are bounded searches, never proofs, unless a
divisibility certificate is available (see :func:`dual_membership`).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import lcm, prod
from typing import Sequence

from . import intmat
from .intmat import Matrix
from .rank_one import BaerType, type_from_degrees
from ._arith import factorize


@dataclass(frozen=True)
class TorusTower:
    n: int
    mats: tuple[Matrix, ...]
    repeat: bool = False

    def __post_init__(self):
        mats = tuple(intmat.as_matrix(m) for m in self.mats)
        object.__setattr__(self, "mats", mats)
        if not mats:
            raise ValueError("a tower needs at least one matrix")
        for k, m in enumerate(mats, start=1):
            if len(m) != self.n:
                raise ValueError(f"A_{k} is not {self.n}x{self.n}")
            if intmat.det(m) == 0:
                raise ValueError(f"A_{k} is singular")
        if all(abs(intmat.det(m)) == 1 for m in mats):
            raise ValueError("tower has no proper cover (all |det| = 1)")

    @classmethod
    def scalar(cls, n: int, c: int, depth: int = 1, repeat: bool = True) -> "TorusTower":
        m = tuple(tuple(c * int(i == j) for j in range(n)) for i in range(n))
        return cls(n, (m,) * depth, repeat)

    @classmethod
    def diagonal(cls, diags: Sequence[Sequence[int]], repeat: bool = True) -> "TorusTower":
        n = len(diags[0])
        mats = tuple(tuple(tuple(d[i] if i == j else 0 for j in range(n)) for i in range(n)) for d in diags)
        return cls(n, mats, repeat)

    @property
    def depth(self) -> int:
        return len(self.mats)

    def available_depth(self, wanted: int) -> int:
        return wanted if self.repeat else min(wanted, self.depth)

    def matrix(self, k: int) -> Matrix:
        """``A_k`` (1-based), continuing periodically when ``repeat`` is set."""
        if k < 1:
            raise IndexError("levels start at 1")
        if k > self.depth and not self.repeat:
            raise IndexError(f"tower has depth {self.depth} and no repeat flag")
        return self.mats[(k - 1) % self.depth]

    def product(self, k: int) -> Matrix:
        """``A_1 A_2 ... A_k`` (identity for k = 0)."""
        out = intmat.identity(self.n)
        for j in range(1, k + 1):
            out = intmat.matmul(out, self.matrix(j))
        return out

    def to_json(self) -> dict:
        return {"n": self.n, "mats": [[list(r) for r in m] for m in self.mats], "repeat": self.repeat}

    @classmethod
    def from_json(cls, data: dict) -> "TorusTower":
        return cls(int(data["n"]), tuple(data["mats"]), bool(data.get("repeat", False)))


class LatticeChain:
    """The nested sublattices ``L_0 = Z^n ⊇ L_1 ⊇ ... ⊇ L_d`` of a tower."""

    def __init__(self, tower: TorusTower, depth: int | None = None):
        self.tower = tower
        self.depth = tower.depth if depth is None else tower.available_depth(depth)
        self.bases: list[Matrix] = [tower.product(k) for k in range(self.depth + 1)]
        for k in range(self.depth):
            if not intmat.contains_lattice(self.bases[k], self.bases[k + 1]):
                raise AssertionError(f"L_{k + 1} not inside L_{k}")
            idx = abs(intmat.det(self.bases[k + 1])) // abs(intmat.det(self.bases[k]))
            if idx != abs(intmat.det(tower.matrix(k + 1))):
                raise AssertionError(f"index [L_{k}:L_{k + 1}] = {idx}")

    def __getitem__(self, k: int) -> Matrix:
        return self.bases[k]

    def index(self, k: int) -> int:
        return abs(intmat.det(self.bases[k]))

    def hermite(self, k: int) -> Matrix:
        return intmat.hermite_lower(self.bases[k])


@dataclass(frozen=True)
class FiberElement:
    level: int
    rep: tuple[int, ...]


class Fiber:
    """The coset space ``Z^n / L_k`` with canonical labels in lexicographic order."""

    def __init__(self, tower: TorusTower, k: int):
        self.level = k
        self.n = tower.n
        self.hnf = intmat.hermite_lower(tower.product(k)) if k else intmat.identity(tower.n)

    def reduce(self, v: Sequence[int]) -> FiberElement:
        return FiberElement(self.level, intmat.reduce_mod_hermite(v, self.hnf))

    @cached_property
    def elements(self) -> list[tuple[int, ...]]:
        return list(itertools.product(*(range(self.hnf[i][i]) for i in range(self.n))))

    @cached_property
    def _position(self) -> dict[tuple[int, ...], int]:
        return {v: i for i, v in enumerate(self.elements)}

    def position(self, v: Sequence[int]) -> int:
        return self._position[intmat.reduce_mod_hermite(v, self.hnf)]

    def __len__(self):
        return len(self.elements)


@dataclass(frozen=True)
class DualMembership:
    """Outcome of the bounded dual-group search.

    ``depth`` is the least level where the vector becomes integral, or None.
    ``searched`` is the deepest level examined; ``never`` is True only when a
    divisibility argument shows no level can ever succeed.
    """

    depth: int | None
    searched: int
    never: bool = False

    @property
    def found(self) -> bool:
        return self.depth is not None


def dual_membership(t: TorusTower, q: Sequence, max_depth: int) -> DualMembership:
    q = tuple(Fraction(x) for x in q)
    if len(q) != t.n:
        raise ValueError("vector dimension does not match tower")
    depth = t.available_depth(max_depth)
    p = intmat.identity(t.n)
    for k in range(depth + 1):
        if k:
            p = intmat.matmul(p, t.matrix(k))
        if all(x.denominator == 1 for x in intmat.matvec(intmat.transpose(p), q)):
            return DualMembership(k, k)
    # (A_1...A_k)^T q integral forces every denominator prime to divide some det(A_j)
    dets = [abs(intmat.det(m)) for m in t.mats]
    support = set().union(*(factorize(d) for d in dets if d > 1))
    den = lcm(*(x.denominator for x in q))
    never = any(p not in support for p in factorize(den)) if den > 1 else False
    return DualMembership(None, depth, never)


def fiber_group(t: TorusTower, k: int) -> list[int]:
    """Smith invariant factors of ``A_1 ... A_k`` (empty at level 0).

    Unit factors are kept, so ``diag(2, 3)`` gives ``[1, 6]``.
    """
    if k == 0:
        return []
    if not t.repeat and k > t.depth:
        raise IndexError(f"level {k} beyond depth {t.depth}")
    return intmat.smith_invariants(t.product(k))


def holonomy(t: TorusTower, loop: Sequence[int], k: int) -> list[int]:
    """Translation by ``loop`` on the level-k fiber as a permutation of positions."""
    fib = Fiber(t, k)
    return [fib.position(tuple(a + b for a, b in zip(v, loop))) for v in fib.elements]


def compose(p: Sequence[int], q: Sequence[int]) -> list[int]:
    """Permutation ``p`` followed by ``q``."""
    return [q[i] for i in p]


def project_level(t: TorusTower, k: int) -> list[int]:
    """Positions in fiber ``k - 1`` of the images of fiber ``k`` elements."""
    upper, lower = Fiber(t, k), Fiber(t, k - 1)
    return [lower.position(v) for v in upper.elements]


def shift(t: TorusTower) -> TorusTower:
    if t.repeat:
        return TorusTower(t.n, t.mats[1:] + t.mats[:1], True)
    if t.depth < 2:
        raise ValueError("cannot shift a depth-1 tower without the repeat flag")
    return TorusTower(t.n, t.mats[1:], False)


def dominates(t1: TorusTower, t2: TorusTower, depth: int, search_depth: int | None = None) -> bool:
    """Whether every ``L1_k`` (k <= depth) contains some ``L2_j``.

    ``j`` is searched up to ``search_depth`` (default ``4 * depth``) so that
    towers with faster-growing index are still compared fairly.  True means
    "true up to the examined depth"; it is not a proof about the full towers.
    """
    if t1.n != t2.n:
        raise ValueError("towers over tori of different dimension")
    jmax = t2.available_depth(4 * depth if search_depth is None else search_depth)
    l2 = [t2.product(j) for j in range(jmax + 1)]
    for k in range(t1.available_depth(depth) + 1):
        l1k = t1.product(k)
        idx = abs(intmat.det(l1k))
        if not any(abs(intmat.det(m)) % idx == 0 and intmat.contains_lattice(l1k, m) for m in l2):
            return False
    return True


class NotDiagonal(ValueError):
    pass


def as_product_of_1d(t: TorusTower) -> list[BaerType]:
    """Coordinate Baer types of a tower of diagonal matrices.

    Raises :class:`NotDiagonal` otherwise; no claim is made about such towers.
    """
    if not all(intmat.is_diagonal(m) for m in t.mats):
        raise NotDiagonal("tower has a non-diagonal bonding matrix")
    return [type_from_degrees((m[i][i] for m in t.mats), repeat=t.repeat) for i in range(t.n)]


def fiber_size(t: TorusTower, k: int) -> int:
    return prod(abs(intmat.det(t.matrix(j))) for j in range(1, k + 1))
