"""Odometers: the +1 map on an inverse limit of cyclic groups.

A one-dimensional homogeneous solenoid is the mapping torus of an odometer;
the odometer is its first-return map to a transversal Cantor fiber.
"""
from __future__ import annotations

from dataclasses import dataclass

from .profinite import ModulusChain, ProfiniteInt, add, embed_integer
from .rank_one import BaerType, SolenoidTower1D, type_from_degrees, type_from_tower


@dataclass(frozen=True)
class Odometer:
    chain: ModulusChain

    @property
    def one(self) -> ProfiniteInt:
        return embed_integer(1, self.chain)

    def __call__(self, x: ProfiniteInt) -> ProfiniteInt:
        return first_return(self, x)


def first_return(o: Odometer, x: ProfiniteInt) -> ProfiniteInt:
    return add(x, o.one)


def orbit_covers_level(o: Odometer, k: int) -> bool:
    """Certificate that the orbit of 0 fills ``Z / modulus(k)`` in modulus(k) steps."""
    m = o.chain.modulus(k)
    seen = set()
    r = 0
    for _ in range(m):
        seen.add(r)
        r = (r + 1) % m
    return r == 0 and len(seen) == m


def orbit_of_zero(o: Odometer, k: int) -> list[int]:
    m = o.chain.modulus(k)
    x = embed_integer(0, o.chain)
    out = []
    for _ in range(m):
        out.append(x.project(k))
        x = first_return(o, x)
    return out


def dual_tower(o: Odometer) -> SolenoidTower1D | None:
    """Tower of circle covers whose inverse limit suspends ``o``.

    Factorial chains continue with every prime; geometric chains repeat their
    ratio; explicit chains are read as a finite block.  Returns None when the
    chain has no proper step.
    """
    if o.chain.kind == "factorial":
        return SolenoidTower1D((), False, (), frozenset())
    steps = tuple(r for r in (o.chain.moduli[0],) + o.chain.ratios() if r > 1)
    if not steps:
        return None
    return SolenoidTower1D(steps, repeat=o.chain.kind == "geometric")


def matches_dual_type(o: Odometer, repeat: bool | None = None) -> BaerType:
    """Baer type dual to the suspension of ``o``.

    ``repeat`` overrides the chain's own continuation rule for explicit chains.
    """
    tower = dual_tower(o)
    if tower is None:
        return type_from_degrees(())
    if tower.universal_excluding is not None:
        return type_from_tower(tower)
    return type_from_tower(tower, repeat=repeat)
