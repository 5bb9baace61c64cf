"""Closed triangulated surfaces used by the flows, plus JSON mesh files."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


@dataclass(frozen=True)
class TriMesh:
    """A closed triangulated surface.

    ``triangles`` holds vertex triples.  Meshes whose triangles meet along
    several edges joining the same vertices (one-vertex triangulations, say)
    pass ``triangle_edges``: an edge id for each side ``(v0v1, v1v2, v2v0)``.
    """

    n_vertices: int
    triangles: np.ndarray
    triangle_edges: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        tri = np.asarray(self.triangles, dtype=np.int64).reshape(-1, 3)
        tri.setflags(write=False)
        object.__setattr__(self, "triangles", tri)
        if tri.min() < 0 or tri.max() >= self.n_vertices:
            raise ValueError("triangle references a missing vertex")
        if self.triangle_edges is None:
            keys: dict[tuple[int, int], int] = {}
            ids = np.empty_like(tri)
            for f, t in enumerate(tri):
                for s in range(3):
                    a, b = int(t[s]), int(t[(s + 1) % 3])
                    ids[f, s] = keys.setdefault((min(a, b), max(a, b)), len(keys))
        else:
            ids = np.asarray(self.triangle_edges, dtype=np.int64).reshape(-1, 3)
            if ids.shape != tri.shape:
                raise ValueError("triangle_edges must match triangles")
        ids.setflags(write=False)
        object.__setattr__(self, "triangle_edges", ids)
        counts = np.bincount(ids.ravel())
        if np.any(counts != 2):
            bad = int(np.flatnonzero(counts != 2)[0])
            raise ValueError(f"not a closed surface: edge {bad} lies in {counts[bad]} triangles")
        if np.bincount(tri.ravel(), minlength=self.n_vertices).min() == 0:
            raise ValueError("isolated vertex")

    @property
    def n_edges(self) -> int:
        return int(self.triangle_edges.max()) + 1

    @property
    def n_faces(self) -> int:
        return len(self.triangles)

    @property
    def euler_characteristic(self) -> int:
        return self.n_vertices - self.n_edges + self.n_faces

    @property
    def genus(self) -> int:
        return (2 - self.euler_characteristic) // 2

    def neighbors(self) -> list[set[int]]:
        out: list[set[int]] = [set() for _ in range(self.n_vertices)]
        for a, b, c in self.triangles:
            for x, y in ((a, b), (b, c), (c, a)):
                if x != y:
                    out[x].add(int(y))
                    out[y].add(int(x))
        return out

    def to_json(self) -> dict:
        data = {"vertices": self.n_vertices, "triangles": self.triangles.tolist()}
        if not _simple(self):
            data["triangle_edges"] = self.triangle_edges.tolist()
        return data

    @classmethod
    def from_json(cls, data: dict) -> "TriMesh":
        v = data["vertices"]
        n = v if isinstance(v, int) else len(v)
        return cls(n, np.asarray(data["triangles"]), data.get("triangle_edges"))


def _simple(mesh: TriMesh) -> bool:
    seen = set()
    for t in mesh.triangles:
        if len(set(t.tolist())) < 3:
            return False
        for s in range(3):
            a, b = int(t[s]), int(t[(s + 1) % 3])
            seen.add((min(a, b), max(a, b)))
    return len(seen) == mesh.n_edges


def load_mesh(path: str | Path) -> TriMesh:
    return TriMesh.from_json(json.loads(Path(path).read_text()))


def torus_mesh(n: int, m: int | None = None) -> TriMesh:
    """Regular 6-valent triangulation of the torus on an ``n x m`` grid."""
    m = n if m is None else m
    if n < 3 or m < 3:
        raise ValueError("grid must be at least 3x3 to be simplicial")

    def vid(i, j):
        return (i % n) * m + (j % m)

    tris = []
    for i in range(n):
        for j in range(m):
            tris.append((vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)))
            tris.append((vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)))
    return TriMesh(n * m, np.array(tris))


def genus2_mesh(n: int = 6) -> TriMesh:
    """Connected sum of two ``n x n`` tori along one removed triangle each."""
    t = torus_mesh(n)
    base = t.triangles
    cut = base[0]
    keep = base[1:]
    second = keep + t.n_vertices
    # glue the boundary triangle of the second copy onto the first
    relabel = {int(cut[k]) + t.n_vertices: int(cut[k]) for k in range(3)}
    second = np.vectorize(lambda v: relabel.get(int(v), int(v)))(second)
    # orientation of the second copy is reversed so the sum is orientable
    second = second[:, ::-1]
    tris = np.vstack([keep, second])
    used = np.unique(tris)
    remap = -np.ones(used.max() + 1, dtype=np.int64)
    remap[used] = np.arange(len(used))
    return TriMesh(len(used), remap[tris])


def one_vertex_genus2() -> TriMesh:
    """Octagon with sides ``a b a' b' c d c' d'`` fanned from one corner.

    All eight corners become a single vertex: V=1, E=9, F=6.
    """
    side = [0, 1, 0, 1, 2, 3, 2, 3]  # edge ids of the octagon sides
    diag = {k: k + 2 for k in range(2, 7)}  # diagonal from corner 0 to corner k
    tris, edges = [], []
    for k in range(6):
        a, b = k + 1, k + 2
        e01 = side[0] if a == 1 else diag[a]
        e12 = side[a]
        e20 = side[7] if b == 7 else diag[b]
        tris.append((0, 0, 0))
        edges.append((e01, e12, e20))
    return TriMesh(1, np.array(tris), np.array(edges))
