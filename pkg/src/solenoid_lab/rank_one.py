"""Rank-one solenoids: Baer types of subgroups of Q and their covering towers.

A finitely described type assigns an exponent in N u {inf} to each prime:
a finite list of exceptions plus a default (0 or inf) for every other prime.
The subgroup of Q it names is ``{q : v_p(q) >= -type(p) for all p}``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from ._arith import factorize, is_prime

INF = math.inf


class NotASolenoid(ValueError):
    """The type is equivalent to the zero type; its dual is just the circle."""


def _check_exponent(e) -> float | int:
    if e == INF:
        return INF
    if isinstance(e, bool) or int(e) != e or e < 0:
        raise ValueError(f"exponent must be a nonnegative integer or inf, got {e!r}")
    return int(e)


@dataclass(frozen=True)
class BaerType:
    entries: tuple[tuple[int, float | int], ...] = ()
    default: float | int = 0

    def __post_init__(self):
        if self.default not in (0, INF):
            raise ValueError("default exponent must be 0 or inf")
        seen = {}
        for p, e in self.entries:
            if not is_prime(p):
                raise ValueError(f"{p} is not prime")
            if p in seen:
                raise ValueError(f"prime {p} listed twice")
            seen[p] = _check_exponent(e)
        canon = tuple(sorted((p, e) for p, e in seen.items() if e != self.default))
        object.__setattr__(self, "entries", canon)
        object.__setattr__(self, "default", INF if self.default == INF else 0)

    @classmethod
    def from_mapping(cls, exps: Mapping[int, float | int], default=0) -> "BaerType":
        return cls(tuple(exps.items()), default)

    def exponent(self, p: int) -> float | int:
        for q, e in self.entries:
            if q == p:
                return e
        return self.default

    def infinite_primes(self) -> frozenset[int]:
        """Listed primes carrying exponent inf (meaningful when default is 0)."""
        return frozenset(p for p, e in self.entries if e == INF)

    def finite_exceptions(self) -> dict[int, int]:
        return {p: e for p, e in self.entries if e != INF}

    def is_zero(self) -> bool:
        return self.default == 0 and not self.entries

    def to_json(self) -> dict:
        def enc(e):
            return "inf" if e == INF else e

        return {"entries": [[p, enc(e)] for p, e in self.entries], "default": enc(self.default)}

    @classmethod
    def from_json(cls, data: dict) -> "BaerType":
        def dec(e):
            return INF if e == "inf" else int(e)

        return cls(tuple((int(p), dec(e)) for p, e in data["entries"]), dec(data.get("default", 0)))

    def __str__(self):
        body = ", ".join(f"{p}->{'inf' if e == INF else e}" for p, e in self.entries)
        tail = "" if self.default == 0 else " (default inf)"
        return f"<{body}>{tail}"


@dataclass(frozen=True)
class RationalSubgroup:
    type: BaerType

    def contains(self, q) -> bool:
        return contains(self, q)


def contains(G: RationalSubgroup, q) -> bool:
    q = Fraction(q)
    if q.denominator == 1:
        return True
    return all(e <= G.type.exponent(p) for p, e in factorize(q.denominator).items())


@dataclass(frozen=True)
class SolenoidTower1D:
    """Degrees of a tower of circle covers ``z -> z**n_k``.

    ``prefix`` is used once, then ``degrees`` follows once or, when ``repeat``
    is set, periodically forever.  ``universal_excluding`` (a set of primes)
    appends an idealized tail in which every other prime occurs infinitely
    often, e.g. the factorial tower when the set is empty.
    """

    degrees: tuple[int, ...] = ()
    repeat: bool = False
    prefix: tuple[int, ...] = ()
    universal_excluding: frozenset[int] | None = None

    def __post_init__(self):
        object.__setattr__(self, "degrees", tuple(int(n) for n in self.degrees))
        object.__setattr__(self, "prefix", tuple(int(n) for n in self.prefix))
        if self.universal_excluding is not None:
            object.__setattr__(self, "universal_excluding", frozenset(self.universal_excluding))
        if any(n < 2 for n in self.degrees + self.prefix):
            raise ValueError("every covering degree must be >= 2")
        if not (self.degrees or self.prefix or self.universal_excluding is not None):
            raise ValueError("tower must be nonempty")
        if self.repeat and not self.degrees:
            raise ValueError("repeat flag needs a nonempty block")

    def head(self, length: int) -> list[int]:
        """The first ``length`` degrees of the (idealized) sequence."""
        out = list(self.prefix)
        if self.degrees:
            if self.repeat:
                while len(out) < length:
                    out.extend(self.degrees)
            else:
                out.extend(self.degrees)
        if self.universal_excluding is not None:
            k = 2
            while len(out) < length:
                n = math.prod(p for p in range(2, k + 1) if is_prime(p) and p not in self.universal_excluding)
                if n > 1:
                    out.append(n)
                k += 1
        return out[:length]

    def shift(self) -> "SolenoidTower1D":
        """Drop the first covering of the tower."""
        if self.prefix:
            return SolenoidTower1D(self.degrees, self.repeat, self.prefix[1:], self.universal_excluding)
        if self.repeat:
            return SolenoidTower1D(self.degrees[1:] + self.degrees[:1], True, (), self.universal_excluding)
        if len(self.degrees) <= 1 and self.universal_excluding is None:
            raise ValueError("cannot shift a tower of depth 1")
        if not self.degrees:
            # the idealized tail is invariant under dropping finitely many terms
            return self
        return SolenoidTower1D(self.degrees[1:], False, (), self.universal_excluding)


def type_from_degrees(degrees: Iterable[int], repeat: bool = False) -> BaerType:
    """Baer type of the dual of the tower with these degrees (degree 1 allowed)."""
    counts: dict[int, float | int] = {}
    for n in degrees:
        n = abs(int(n))
        if n == 0:
            raise ValueError("degree 0 is not a covering")
        if n == 1:
            continue
        for p, e in factorize(n).items():
            counts[p] = INF if repeat else counts.get(p, 0) + e
    return BaerType.from_mapping(counts)


def type_from_tower(t: SolenoidTower1D, repeat: bool | None = None) -> BaerType:
    """Exponent of p is the total multiplicity of p across the covering degrees."""
    rep = t.repeat if repeat is None else repeat
    counts: dict[int, float | int] = {}
    for n in t.prefix + (() if rep else t.degrees):
        for p, e in factorize(n).items():
            counts[p] = counts.get(p, 0) + e
    if rep:
        for n in t.degrees:
            for p in factorize(n):
                counts[p] = INF
    if t.universal_excluding is None:
        return BaerType.from_mapping(counts)
    exps = {p: counts.get(p, 0) for p in t.universal_excluding}
    return BaerType.from_mapping(exps, default=INF)


def tower_from_type(t: BaerType) -> SolenoidTower1D:
    """Canonical tower realizing ``t``: finite part first, then the periodic block."""
    if t.is_zero():
        raise NotASolenoid("zero type: the dual is Z and the inverse limit is a circle")
    prefix = tuple(p for p, e in sorted(t.finite_exceptions().items()) for _ in range(e))
    if t.default == INF:
        return SolenoidTower1D((), False, prefix, frozenset(t.finite_exceptions()))
    block = tuple(sorted(t.infinite_primes()))
    if not block:
        return SolenoidTower1D(prefix, False)
    return SolenoidTower1D(block, True, prefix)


def isomorphic(t1: BaerType, t2: BaerType) -> bool:
    """Types agree up to finitely many finite changes, the inf set being fixed.

    For finitely described types this reduces to equal defaults and equal
    sets of primes with exponent inf among the listed ones.
    """
    if t1.default != t2.default:
        return False
    if t1.default == INF:
        # the inf set is the complement of the listed (finite) exceptions
        return frozenset(t1.finite_exceptions()) == frozenset(t2.finite_exceptions())
    return t1.infinite_primes() == t2.infinite_primes()


def is_dense_in_Q(t: BaerType) -> bool:
    return t.default == INF or bool(t.infinite_primes())
