"""Combinatorial Ricci flow on circle-packing metrics.

Each vertex carries a log-radius ``u_i``; edge lengths are ``r_i + r_j`` and
the curvature at a vertex is its angle defect.  The flow

    du_i/dt = c - K_i,    c = 2*pi*chi / V

is the gradient flow of a convex energy and drives every vertex to the same
curvature.  A laminated run applies it to a finite family of metrics indexed
by a finite quotient group, standing in for a Cantor transversal.
"""
from __future__ import annotations

import csv
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .meshes import TriMesh

GB_TOL = 1e-10


class GeometryError(ValueError):
    pass


class StiffConfiguration(RuntimeError):
    pass


class NonConvergence(RuntimeError):
    def __init__(self, msg: str, trace: "FlowTrace"):
        super().__init__(msg)
        self.trace = trace


@dataclass(frozen=True)
class CirclePackingMetric:
    u: np.ndarray

    def __post_init__(self):
        u = np.array(self.u, dtype=float)
        u.setflags(write=False)
        object.__setattr__(self, "u", u)

    @property
    def radii(self) -> np.ndarray:
        with np.errstate(over="ignore"):
            return np.exp(self.u)

    def __eq__(self, other):
        return isinstance(other, CirclePackingMetric) and np.array_equal(self.u, other.u)

    def __hash__(self):
        return hash(self.u.tobytes())


def uniform_metric(mesh: TriMesh, u0: float = 0.0) -> CirclePackingMetric:
    return CirclePackingMetric(np.full(mesh.n_vertices, u0))


def perturbed_metric(mesh: TriMesh, amplitude: float, seed: int) -> CirclePackingMetric:
    """Uniform log-radii plus independent uniform noise in ``[-amplitude, amplitude]``."""
    rng = np.random.default_rng(seed)
    return CirclePackingMetric(rng.uniform(-amplitude, amplitude, mesh.n_vertices))


def edge_lengths(mesh: TriMesh, m: CirclePackingMetric) -> np.ndarray:
    """Side lengths per triangle, ordered ``(v0v1, v1v2, v2v0)``."""
    r = m.radii[mesh.triangles]
    return np.stack([r[:, 0] + r[:, 1], r[:, 1] + r[:, 2], r[:, 2] + r[:, 0]], axis=1)


def corner_angles(mesh: TriMesh, m: CirclePackingMetric) -> np.ndarray:
    """Interior angle at each corner of each triangle."""
    r = m.radii[mesh.triangles]
    if not np.all(np.isfinite(r)) or np.any(r <= 0):
        bad = int(np.flatnonzero(~np.all(np.isfinite(r) & (r > 0), axis=1))[0])
        raise GeometryError(f"triangle {bad} has a non-positive or non-finite radius")
    lengths = edge_lengths(mesh, m)
    a, b, c = lengths[:, 0], lengths[:, 1], lengths[:, 2]
    slack = np.minimum.reduce([a + b - c, b + c - a, c + a - b])
    if np.any(slack <= 0):
        raise GeometryError(f"triangle {int(np.argmin(slack))} violates the triangle inequality")
    angles = np.empty_like(r)
    for s in range(3):
        ri, rj, rk = r[:, s], r[:, (s + 1) % 3], r[:, (s + 2) % 3]
        # half-angle form of the law of cosines for tangent circles
        angles[:, s] = 2.0 * np.arcsin(np.sqrt(rj * rk / ((ri + rj) * (ri + rk))))
    return angles


def discrete_curvature(mesh: TriMesh, m: CirclePackingMetric) -> np.ndarray:
    angles = corner_angles(mesh, m)
    total = np.bincount(mesh.triangles.ravel(), weights=angles.ravel(), minlength=mesh.n_vertices)
    return 2.0 * math.pi - total


def target_curvature(mesh: TriMesh) -> float:
    return 2.0 * math.pi * mesh.euler_characteristic / mesh.n_vertices


def _valid(mesh: TriMesh, m: CirclePackingMetric) -> bool:
    try:
        corner_angles(mesh, m)
    except GeometryError:
        return False
    return True


def ricci_step(
    mesh: TriMesh, m: CirclePackingMetric, c: float, dt: float, max_halvings: int = 30
) -> CirclePackingMetric:
    """One Euler step of the normalized flow, halving ``dt`` until the metric stays valid.

    The update is recentred so that ``sum(u)`` does not move.
    """
    return _step(mesh, m, c, dt, max_halvings)[0]


def _step(mesh, m, c, dt, max_halvings=30, K=None):
    if dt <= 0:
        raise ValueError("dt must be positive")
    if K is None:
        K = discrete_curvature(mesh, m)
    drive = c - K
    drive = drive - drive.mean()
    for _ in range(max_halvings + 1):
        new = CirclePackingMetric(m.u + dt * drive)
        if _valid(mesh, new):
            return new, dt
        dt *= 0.5
    raise StiffConfiguration(f"step size underflow after {max_halvings} halvings")


@dataclass
class FlowTrace:
    """Per-step records ``(step, t, max_dev, total_curv, energy, k_max, k_min)``."""

    rows: list[tuple] = field(default_factory=list)

    COLUMNS = ("step", "t", "max_dev", "total_curv", "energy", "k_max", "k_min")

    def record(self, step: int, t: float, K: np.ndarray, c: float) -> None:
        dev = K - c
        self.rows.append(
            (step, t, float(np.max(np.abs(dev))), float(K.sum()), float(0.5 * dev @ dev), float(K.max()), float(K.min()))
        )

    def column(self, name: str) -> np.ndarray:
        return np.array([r[self.COLUMNS.index(name)] for r in self.rows])

    def __len__(self):
        return len(self.rows)

    def write_csv(self, path: str | Path, columns: Sequence[str] = ("step", "t", "max_dev", "total_curv")) -> None:
        idx = [self.COLUMNS.index(c) for c in columns]
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(columns)
            for r in self.rows:
                w.writerow([repr(r[i]) for i in idx])


def flow_to_convergence(
    mesh: TriMesh,
    m: CirclePackingMetric,
    c: float | None = None,
    tol: float = 1e-8,
    max_steps: int = 100_000,
    dt: float = 0.1,
) -> tuple[CirclePackingMetric, FlowTrace]:
    """Run the flow until ``max |K_i - c| < tol``.

    Only the compatible constant ``c = 2*pi*chi/V`` is accepted, and only on
    surfaces with ``chi <= 0``.
    """
    chi = mesh.euler_characteristic
    if chi > 0:
        raise ValueError("spherical meshes are not supported")
    c_ok = target_curvature(mesh)
    if c is None:
        c = c_ok
    if abs(c - c_ok) > 1e-12:
        raise ValueError(f"target curvature must be 2*pi*chi/V = {c_ok!r}, got {c!r}")
    trace = FlowTrace()
    t = 0.0
    K = discrete_curvature(mesh, m)
    trace.record(0, t, K, c)
    for step in range(1, max_steps + 1):
        if trace.rows[-1][2] < tol:
            return m, trace
        m, used = _step(mesh, m, c, dt, K=K)
        t += used
        K = discrete_curvature(mesh, m)
        trace.record(step, t, K, c)
    if trace.rows[-1][2] < tol:
        return m, trace
    raise NonConvergence(f"no convergence to {tol} within {max_steps} steps", trace)


def background_step(
    mesh: TriMesh, u: np.ndarray, R0: np.ndarray, c: float, dt: float
) -> np.ndarray:
    """Experimental: one step of ``du/dt = exp(-u) (L u - R0) + c``.

    ``L`` is the uniform graph Laplacian of the mesh standing in for the
    background Laplacian.  Intended for flat torus meshes only.
    """
    nbrs = mesh.neighbors()
    lap = np.array([sum(u[j] for j in nb) - len(nb) * u[i] for i, nb in enumerate(nbrs)])
    return u + dt * (np.exp(-u) * (lap - R0) + c)


# --- laminated runs -----------------------------------------------------------


@dataclass(frozen=True)
class FiberFamily:
    """Metrics on one mesh indexed by ``Z / order``."""

    order: int
    metrics: tuple[CirclePackingMetric, ...]

    def __post_init__(self):
        if len(self.metrics) != self.order:
            raise ValueError("one metric per label is required")
        sizes = {len(m.u) for m in self.metrics}
        if len(sizes) != 1:
            raise ValueError("all fibers must share one mesh")

    @property
    def labels(self) -> range:
        return range(self.order)

    def transverse_modulus(self) -> float:
        """Largest sup-distance of log-radii between labels ``k`` and ``k+1``."""
        if self.order == 1:
            return 0.0
        return max(
            float(np.max(np.abs(self.metrics[k].u - self.metrics[(k + 1) % self.order].u)))
            for k in range(self.order)
        )


@dataclass
class LaminatedReport:
    family: FiberFamily
    traces: dict[int, FlowTrace]
    input_modulus: float
    output_modulus: float

    @property
    def modulus_ratio(self) -> float | None:
        if self.input_modulus == 0:
            return None
        return self.output_modulus / self.input_modulus

    def summary(self) -> dict:
        return {
            "fibers": self.family.order,
            "input_modulus": self.input_modulus,
            "output_modulus": self.output_modulus,
            "modulus_ratio": self.modulus_ratio,
            "steps": {str(k): len(tr) - 1 for k, tr in self.traces.items()},
            "final_max_dev": {str(k): tr.rows[-1][2] for k, tr in self.traces.items()},
        }


class FiberFailure(RuntimeError):
    def __init__(self, label: int, cause: Exception):
        super().__init__(f"fiber {label}: {cause}")
        self.label = label
        self.cause = cause


def thread_cap() -> int:
    raw = os.environ.get("SOLENOID_LAB_THREADS", "")
    return max(1, int(raw)) if raw.strip() else 1


def laminated_flow(
    mesh: TriMesh,
    fam: FiberFamily,
    c: float | None = None,
    tol: float = 1e-8,
    max_steps: int = 100_000,
    dt: float = 0.1,
    threads: int | None = None,
) -> tuple[FiberFamily, LaminatedReport]:
    """Flow every fiber to constant curvature and measure transverse moduli.

    Fibers are independent and use identical step schedules, so the result
    does not depend on ``threads``.
    """

    def run(k):
        try:
            return flow_to_convergence(mesh, fam.metrics[k], c, tol, max_steps, dt)
        except (NonConvergence, StiffConfiguration, GeometryError) as exc:
            raise FiberFailure(k, exc) from exc

    workers = thread_cap() if threads is None else threads
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(run, fam.labels))
    else:
        results = [run(k) for k in fam.labels]
    out = FiberFamily(fam.order, tuple(m for m, _ in results))
    report = LaminatedReport(
        out, {k: tr for k, (_, tr) in enumerate(results)}, fam.transverse_modulus(), out.transverse_modulus()
    )
    return out, report
