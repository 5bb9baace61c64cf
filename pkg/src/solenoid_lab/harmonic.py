"""Discrete harmonic maps from weighted graphs into the hyperbolic plane.

Points live in the Poincaré disk, stored as complex numbers.  The energy of a
map is ``1/2 * sum_e w_e * d(f(u), f(v))**2``; its heat flow moves each free
vertex along the geodesic toward the weighted hyperbolic centroid of its
neighbours.  With at least one pinned vertex the minimizer is unique.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

CENTROID_TOL = 1e-12
ENERGY_SLACK = 1e-14


class CentroidError(RuntimeError):
    pass


class HarmonicNonConvergence(RuntimeError):
    pass


# --- Poincaré disk primitives -------------------------------------------------


def mobius_to_origin(z, w):
    """Image of ``w`` under the disk automorphism sending ``z`` to 0."""
    return (w - z) / (1 - np.conj(z) * w)


def mobius_from_origin(z, w):
    return (w + z) / (1 + np.conj(z) * w)


def distance(z, w):
    return 2.0 * np.arctanh(np.minimum(np.abs(mobius_to_origin(z, w)), 1.0))


def log_map(z, w):
    """Tangent vector at ``z`` (Euclidean coordinates) pointing to ``w`` with hyperbolic length d(z, w)."""
    zeta = mobius_to_origin(z, w)
    r = np.abs(zeta)
    scale = np.where(r > 0, np.arctanh(np.minimum(r, 1.0)) / np.where(r > 0, r, 1.0), 1.0)
    return (1 - np.abs(z) ** 2) * zeta * scale


def exp_map(z, v):
    v0 = v / (1 - np.abs(z) ** 2)
    r = np.abs(v0)
    scale = np.where(r > 0, np.tanh(r) / np.where(r > 0, r, 1.0), 1.0)
    return mobius_from_origin(z, v0 * scale)


def geodesic_point(z, w, s):
    """Point at fraction ``s`` along the geodesic from ``z`` to ``w``."""
    return exp_map(z, s * log_map(z, w))


def conformal_factor(z):
    """``lambda(z)`` with hyperbolic metric ``lambda^2 |dz|^2``."""
    return 2.0 / (1 - np.abs(z) ** 2)


@dataclass(frozen=True)
class DiskAutomorphism:
    """``z -> e^{i theta} (z - a) / (1 - conj(a) z)``."""

    a: complex
    theta: float = 0.0

    def __call__(self, z):
        return np.exp(1j * self.theta) * mobius_to_origin(self.a, z)


# --- graphs and maps ------------------------------------------------------------


@dataclass(frozen=True)
class LeafGraph:
    n_vertices: int
    edges: tuple[tuple[int, int, float], ...]
    pins: Mapping[int, complex] = field(default_factory=dict)

    def __post_init__(self):
        edges = tuple((int(u), int(v), float(w)) for u, v, w in self.edges)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "pins", {int(k): complex(z) for k, z in self.pins.items()})
        for u, v, w in edges:
            if not (0 <= u < self.n_vertices and 0 <= v < self.n_vertices) or u == v:
                raise ValueError(f"bad edge ({u}, {v})")
            if w <= 0:
                raise ValueError("edge weights must be positive")
        for z in self.pins.values():
            if abs(z) >= 1:
                raise ValueError("pins must lie in the open unit disk")
        if not self.pins:
            raise ValueError("at least one pinned vertex is required")
        self._check_connected()

    def _check_connected(self):
        adj: list[list[int]] = [[] for _ in range(self.n_vertices)]
        for u, v, _ in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        seen = set(self.pins)
        stack = list(self.pins)
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        if len(seen) != self.n_vertices:
            raise ValueError("every vertex needs a path to a pinned vertex")

    @property
    def free(self) -> np.ndarray:
        return np.array([v for v in range(self.n_vertices) if v not in self.pins], dtype=np.int64)

    @property
    def arrays(self):
        e = np.array([(u, v) for u, v, _ in self.edges], dtype=np.int64).reshape(-1, 2)
        w = np.array([w for _, _, w in self.edges])
        return e[:, 0], e[:, 1], w

    def to_json(self) -> dict:
        return {
            "vertices": self.n_vertices,
            "edges": [[u, v, w] for u, v, w in self.edges],
            "pins": {str(k): [z.real, z.imag] for k, z in self.pins.items()},
        }

    @classmethod
    def from_json(cls, data: dict) -> "LeafGraph":
        pins = {int(k): complex(x, y) for k, (x, y) in data["pins"].items()}
        return cls(int(data["vertices"]), tuple(tuple(e) for e in data["edges"]), pins)


def load_graph(path: str | Path) -> LeafGraph:
    return LeafGraph.from_json(json.loads(Path(path).read_text()))


@dataclass(frozen=True)
class DiscreteMap:
    points: np.ndarray

    def __post_init__(self):
        p = np.array(self.points, dtype=complex)
        if np.any(np.abs(p) >= 1):
            raise ValueError("map leaves the open unit disk")
        p.setflags(write=False)
        object.__setattr__(self, "points", p)

    def __eq__(self, other):
        return isinstance(other, DiscreteMap) and np.array_equal(self.points, other.points)

    __hash__ = None  # type: ignore[assignment]


def initial_map(G: LeafGraph, free_points: Sequence[complex] | np.ndarray) -> DiscreteMap:
    pts = np.zeros(G.n_vertices, dtype=complex)
    pts[G.free] = np.asarray(free_points, dtype=complex)
    for k, z in G.pins.items():
        pts[k] = z
    return DiscreteMap(pts)


def random_map(G: LeafGraph, rng: np.random.Generator, radius: float = 0.8) -> DiscreteMap:
    n = len(G.free)
    r = radius * np.sqrt(rng.uniform(0, 1, n))
    return initial_map(G, r * np.exp(2j * np.pi * rng.uniform(0, 1, n)))


def dirichlet_energy(G: LeafGraph, f: DiscreteMap) -> float:
    u, v, w = G.arrays
    d = distance(f.points[u], f.points[v])
    return float(0.5 * np.sum(w * d * d))


def tension(G: LeafGraph, f: DiscreteMap) -> np.ndarray:
    """Minus the Riemannian gradient of the energy, per vertex (zero at pins)."""
    u, v, w = G.arrays
    p = f.points
    t = np.zeros(G.n_vertices, dtype=complex)
    np.add.at(t, u, w * log_map(p[u], p[v]))
    np.add.at(t, v, w * log_map(p[v], p[u]))
    t[list(G.pins)] = 0
    return t


def _incidence(G: LeafGraph):
    """Directed (vertex, neighbour, weight) arrays restricted to free vertices."""
    u, v, w = G.arrays
    src = np.concatenate([u, v])
    dst = np.concatenate([v, u])
    ww = np.concatenate([w, w])
    free = np.isin(src, G.free)
    return src[free], dst[free], ww[free]


def weighted_centroid(points, weights, start=None, tol: float = CENTROID_TOL, max_iter: int = 10_000) -> complex:
    """Hyperbolic (Karcher) mean of ``points``."""
    points = np.asarray(points, dtype=complex)
    idx = np.zeros(len(points), dtype=np.int64)
    c0 = None if start is None else np.array([start], dtype=complex)
    return complex(_centroids(idx, points, np.asarray(weights, float), 1, c0, tol, max_iter)[0])


def _centroids(owner, targets, weights, n, start, tol, max_iter):
    """Karcher means of several weighted point sets at once.

    ``owner[i]`` says which set target ``i`` belongs to.  Gradient steps are
    scaled by the inverse of a Hessian bound, ``sum w d coth d / sum w``.
    """
    wsum = np.bincount(owner, weights=weights, minlength=n)
    if start is None:
        c = np.zeros(n, dtype=complex)
        np.add.at(c, owner, weights * targets)
        c = c / wsum
        c = np.where(np.abs(c) < 1, c, 0)
    else:
        c = np.array(start, dtype=complex)
    for _ in range(max_iter):
        logs = log_map(c[owner], targets)
        g = np.zeros(n, dtype=complex)
        np.add.at(g, owner, weights * logs)
        g /= wsum
        d = np.abs(logs) * conformal_factor(c[owner])
        dcoth = np.where(d > 1e-8, d / np.tanh(np.where(d > 1e-8, d, 1.0)), 1.0)
        h = np.bincount(owner, weights=weights * dcoth, minlength=n) / wsum
        gnorm = np.abs(g) * conformal_factor(c)
        if np.all(gnorm < tol):
            return c
        c = exp_map(c, g / h)
    raise CentroidError("centroid iteration did not converge")


def centroids(G: LeafGraph, f: DiscreteMap) -> np.ndarray:
    """Weighted centroid of the neighbours of every free vertex."""
    src, dst, w = _incidence(G)
    free = G.free
    pos = np.full(G.n_vertices, -1, dtype=np.int64)
    pos[free] = np.arange(len(free))
    return _centroids(pos[src], f.points[dst], w, len(free), f.points[free], CENTROID_TOL, 10_000)


def heat_step(G: LeafGraph, f: DiscreteMap, dt: float = 1.0, max_halvings: int = 40) -> tuple[DiscreteMap, float]:
    """Move free vertices toward their neighbour centroids by fraction ``dt``.

    All vertices move simultaneously; ``dt`` is halved until the energy does
    not increase.  Near a critical point the energy change drops below
    double-precision resolution, so a step whose energy agrees to within
    ``ENERGY_SLACK`` (relative) is accepted when it lowers the largest tension.
    Returns the new map and the fraction actually used.
    """
    if not 0 < dt <= 1:
        raise ValueError("dt must lie in (0, 1]")
    free = G.free
    if len(free) == 0:
        return f, dt
    cents = centroids(G, f)
    e0 = dirichlet_energy(G, f)
    t0 = None
    for _ in range(max_halvings + 1):
        pts = f.points.copy()
        pts[free] = geodesic_point(f.points[free], cents, dt)
        g = DiscreteMap(pts)
        e1 = dirichlet_energy(G, g)
        if e1 <= e0:
            return g, dt
        if e1 - e0 <= ENERGY_SLACK * e0:
            t0 = _max_tension(G, f) if t0 is None else t0
            if _max_tension(G, g) < t0:
                return g, dt
        dt *= 0.5
    return f, 0.0


def _max_tension(G: LeafGraph, f: DiscreteMap) -> float:
    """Largest tension in hyperbolic norm."""
    return float(np.max(np.abs(tension(G, f)) * conformal_factor(f.points)))


@dataclass
class HarmonicResult:
    map: DiscreteMap
    energies: list[float]
    steps: int


def flow_to_harmonic(
    G: LeafGraph, f0: DiscreteMap, tol: float = 1e-10, max_steps: int = 100_000
) -> HarmonicResult:
    """Iterate heat steps until no vertex moves more than ``tol`` (hyperbolic distance).

    The tension must also have fallen below ``tol`` in hyperbolic norm, so the
    returned map is a critical point to that accuracy and not merely a slow step.
    """
    f = f0
    energies = [dirichlet_energy(G, f)]
    for step in range(1, max_steps + 1):
        g, _ = heat_step(G, f)
        moved = float(np.max(distance(f.points, g.points))) if len(G.free) else 0.0
        energies.append(dirichlet_energy(G, g))
        stalled = g == f
        f = g
        if moved < tol and _max_tension(G, f) < tol:
            return HarmonicResult(f, energies, step)
        if stalled:
            # the centroid solver's own tolerance bounds how small the tension can get
            raise HarmonicNonConvergence(f"stalled with tension {_max_tension(G, f):.3g} above tol {tol:g}")
    raise HarmonicNonConvergence(f"no convergence within {max_steps} steps")


def random_instance(n_vertices: int, rng: np.random.Generator, n_pins: int = 3, extra_edges: int = 6) -> LeafGraph:
    """Random connected weighted graph with pins scattered in the disk of radius 0.8."""
    edges = {}
    for v in range(1, n_vertices):
        edges[(int(rng.integers(v)), v)] = float(rng.uniform(0.5, 2.0))
    while len(edges) < n_vertices - 1 + extra_edges:
        a, b = sorted(int(x) for x in rng.choice(n_vertices, 2, replace=False))
        edges.setdefault((a, b), float(rng.uniform(0.5, 2.0)))
    pins_at = rng.choice(n_vertices, n_pins, replace=False)
    r = 0.8 * np.sqrt(rng.uniform(0, 1, n_pins))
    pts = r * np.exp(2j * np.pi * rng.uniform(0, 1, n_pins))
    return LeafGraph(n_vertices, tuple((a, b, w) for (a, b), w in edges.items()), dict(zip(pins_at.tolist(), pts)))


def star_graph(pins: Sequence[complex], weights: Sequence[float] | None = None) -> LeafGraph:
    """Free centre 0 joined to pinned leaves ``1..len(pins)``."""
    weights = [1.0] * len(pins) if weights is None else list(weights)
    edges = tuple((0, k + 1, w) for k, w in enumerate(weights))
    return LeafGraph(len(pins) + 1, edges, {k + 1: z for k, z in enumerate(pins)})
