"""Truncated arithmetic in the profinite integers.

An element of the profinite completion of Z is stored as a compatible list of
residues along a divisibility chain of moduli.  Every operation at depth ``d``
is an exact statement about the element modulo ``modulus(d)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

DEFAULT_DEPTH = 12


class ChainMismatch(ValueError):
    pass


class InsufficientDepth(ValueError):
    pass


@dataclass(frozen=True)
class ModulusChain:
    """A finite divisibility chain ``m_1 | m_2 | ... | m_d``.

    ``kind`` records how the chain is meant to continue past its last level
    (``"factorial"``, ``"geometric"`` or ``"explicit"``); it matters only when
    the chain is read as a finite block of an idealized infinite chain.
    """

    moduli: tuple[int, ...]
    kind: str = "explicit"

    def __post_init__(self):
        moduli = tuple(int(m) for m in self.moduli)
        object.__setattr__(self, "moduli", moduli)
        if not moduli:
            raise ValueError("modulus chain must have depth >= 1")
        if any(m < 1 for m in moduli):
            raise ValueError(f"moduli must be positive: {moduli}")
        for k, (a, b) in enumerate(zip(moduli, moduli[1:]), start=1):
            if b % a:
                raise ValueError(f"modulus({k})={a} does not divide modulus({k + 1})={b}")
        if self.kind not in ("factorial", "geometric", "explicit"):
            raise ValueError(f"unknown chain kind {self.kind!r}")

    @property
    def depth(self) -> int:
        return len(self.moduli)

    def modulus(self, k: int) -> int:
        """Modulus at level ``k`` (1-based)."""
        if not 1 <= k <= self.depth:
            raise IndexError(f"level {k} outside 1..{self.depth}")
        return self.moduli[k - 1]

    @property
    def top(self) -> int:
        return self.moduli[-1]

    def ratios(self) -> tuple[int, ...]:
        """Successive quotients ``m_{k+1} / m_k``."""
        return tuple(b // a for a, b in zip(self.moduli, self.moduli[1:]))

    def truncate(self, depth: int) -> "ModulusChain":
        return ModulusChain(self.moduli[:depth], self.kind)


def factorial_chain(depth: int = DEFAULT_DEPTH) -> ModulusChain:
    """Moduli ``1!, 2!, ..., depth!``; cofinal for divisibility."""
    return ModulusChain(tuple(math.factorial(k) for k in range(1, depth + 1)), "factorial")


def geometric_chain(base: int, depth: int) -> ModulusChain:
    """Moduli ``base, base**2, ..., base**depth``."""
    if base < 2:
        raise ValueError("geometric chain needs base >= 2")
    return ModulusChain(tuple(base**k for k in range(1, depth + 1)), "geometric")


@dataclass(frozen=True)
class ProfiniteInt:
    chain: ModulusChain
    residues: tuple[int, ...]

    def __post_init__(self):
        residues = tuple(int(r) for r in self.residues)
        object.__setattr__(self, "residues", residues)
        if len(residues) != self.chain.depth:
            raise ValueError("one residue per level is required")
        for m, r in zip(self.chain.moduli, residues):
            if not 0 <= r < m:
                raise ValueError(f"residue {r} not reduced modulo {m}")
        _check_compatible(self.chain.moduli, residues)

    def residue(self, k: int) -> int:
        return self.residues[k - 1]

    def project(self, k: int) -> int:
        """Image in Z / modulus(k)."""
        return self.residues[k - 1]

    def __add__(self, other: "ProfiniteInt") -> "ProfiniteInt":
        return add(self, other)

    def __mul__(self, other: "ProfiniteInt") -> "ProfiniteInt":
        return mul(self, other)

    def __neg__(self) -> "ProfiniteInt":
        return ProfiniteInt(self.chain, tuple((-r) % m for r, m in zip(self.residues, self.chain.moduli)))

    def __sub__(self, other: "ProfiniteInt") -> "ProfiniteInt":
        return add(self, -other)

    def to_json(self) -> dict:
        return {"moduli": list(self.chain.moduli), "residues": list(self.residues)}

    @classmethod
    def from_json(cls, data: dict) -> "ProfiniteInt":
        return cls(ModulusChain(tuple(data["moduli"])), tuple(data["residues"]))


def _check_compatible(moduli: Sequence[int], residues: Sequence[int]) -> None:
    for k in range(len(moduli) - 1):
        if (residues[k + 1] - residues[k]) % moduli[k]:
            raise ValueError(f"residues incompatible between levels {k + 1} and {k + 2}")


def embed_integer(a: int, chain: ModulusChain) -> ProfiniteInt:
    """Image of the integer ``a`` under the canonical embedding of Z."""
    return ProfiniteInt(chain, tuple(a % m for m in chain.moduli))


def _same_chain(x: ProfiniteInt, y: ProfiniteInt) -> ModulusChain:
    if x.chain.moduli != y.chain.moduli:
        raise ChainMismatch(f"chains differ: {x.chain.moduli} vs {y.chain.moduli}")
    return x.chain


def add(x: ProfiniteInt, y: ProfiniteInt) -> ProfiniteInt:
    chain = _same_chain(x, y)
    return ProfiniteInt(chain, tuple((a + b) % m for a, b, m in zip(x.residues, y.residues, chain.moduli)))


def mul(x: ProfiniteInt, y: ProfiniteInt) -> ProfiniteInt:
    chain = _same_chain(x, y)
    return ProfiniteInt(chain, tuple((a * b) % m for a, b, m in zip(x.residues, y.residues, chain.moduli)))


def component_p(x: ProfiniteInt, p: int, e: int) -> int:
    """The image of ``x`` in Z/p^e, read from the first level it is visible at."""
    if e < 1:
        raise ValueError("exponent must be positive")
    q = p**e
    for m, r in zip(x.chain.moduli, x.residues):
        if m % q == 0:
            return r % q
    raise InsufficientDepth(f"{p}^{e} divides no modulus in {x.chain.moduli}")


@dataclass(frozen=True)
class ClopenCylinder:
    modulus: int
    residue: int

    def __post_init__(self):
        if self.modulus < 1 or not 0 <= self.residue < self.modulus:
            raise ValueError(f"invalid cylinder {self.residue} mod {self.modulus}")

    def translate(self, t: int) -> "ClopenCylinder":
        return ClopenCylinder(self.modulus, (self.residue + t) % self.modulus)

    def refine(self, n: int) -> list["ClopenCylinder"]:
        """Split into the cylinders of modulus ``modulus * n`` it contains."""
        big = self.modulus * n
        return [ClopenCylinder(big, self.residue + j * self.modulus) for j in range(n)]


def haar_measure(c: ClopenCylinder) -> Fraction:
    return Fraction(1, c.modulus)


def total_measure(cylinders: Iterable[ClopenCylinder]) -> Fraction:
    return sum((haar_measure(c) for c in cylinders), Fraction(0))


def translation_orbit_is_dense(chain: ModulusChain, t: int = 1) -> bool:
    """Whether translation by ``t`` has a single orbit at every level of ``chain``.

    The orbit of 0 under ``x -> x + t`` in Z/m is the subgroup generated by
    ``t``, which is everything exactly when ``gcd(t, m) == 1``.
    """
    return all(math.gcd(t, m) == 1 for m in chain.moduli)
