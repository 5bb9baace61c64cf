"""Brute-force oracles.  None of these call into the code paths they check."""
from __future__ import annotations

import itertools
import math
from fractions import Fraction
from math import isqrt

import numpy as np

PRIMES = (2, 3, 5)


# --- Baer types: scaling search ----------------------------------------------------


def _vals(n: int) -> tuple[int, int, int, int]:
    out = []
    for p in PRIMES:
        v = 0
        while n % p == 0:
            n //= p
            v += 1
        out.append(v)
    return (*out, n)


def scaling_candidates(bound: int = 10_000) -> np.ndarray:
    """Valuation vectors at 2, 3, 5 of every q = a/b with 1 <= a, b <= bound.

    A scaling that involves another prime moves 1 outside a group whose
    exponent there is 0 (on either side), which the generator test would
    reject; those q are dropped here so the search stays small.
    """
    smooth = [(n, _vals(n)[:3]) for n in range(1, bound + 1) if _vals(n)[3] == 1]
    vecs = {tuple(x - y for x, y in zip(va, vb)) for (_, va), (_, vb) in itertools.product(smooth, repeat=2)}
    return np.array(sorted(vecs), dtype=np.int64)


def _maps_into(vq: np.ndarray, e1: tuple, e2: tuple, cutoff: int) -> np.ndarray:
    """For each scaling q (rows of vq), whether q*G1 is inside G2.

    G_i = {x : v_p(x) >= -e_i[p]} over p in {2, 3, 5}, exponent 0 elsewhere.
    G1 is generated by the 1/p^k with k <= e1[p] (k <= cutoff for inf); the
    membership condition on q/p^k only tightens as k grows, so testing the
    largest generator per prime covers the rest.
    """
    ok = np.ones(len(vq), dtype=bool)
    for j in range(3):
        if e2[j] == math.inf:
            continue
        top = cutoff if e1[j] == math.inf else int(e1[j])
        ok &= vq[:, j] - top >= -e2[j]
    return ok


def scaling_isomorphic(e1: tuple, e2: tuple, vq: np.ndarray, cutoff: int = 40) -> bool:
    """Is there q with q*G1 = G2 among the candidate scalings?"""
    fwd = _maps_into(vq, e1, e2, cutoff)
    back = _maps_into(-vq, e2, e1, cutoff)
    return bool(np.any(fwd & back))


# --- GL(2, Z) conjugacy ---------------------------------------------------------------


def unimodular_matrices(bound: int) -> np.ndarray:
    r = np.arange(-bound, bound + 1)
    a, b, c, d = (x.ravel() for x in np.meshgrid(r, r, r, r, indexing="ij"))
    det = a * d - b * c
    keep = np.abs(det) == 1
    return np.stack([a[keep], b[keep], c[keep], d[keep]], axis=1)


def conjugacy_orbit(A, P: np.ndarray) -> set[tuple[int, int, int, int]]:
    """{P A P^-1} over the rows of P (each row a, b, c, d with det +-1)."""
    a, b, c, d = (P[:, i] for i in range(4))
    det = a * d - b * c
    # P^-1 = det * [[d, -b], [-c, a]]
    ia, ib, ic, id_ = det * d, -det * b, -det * c, det * a
    (x, y), (z, w) = A
    # M = P A
    m11, m12 = a * x + b * z, a * y + b * w
    m21, m22 = c * x + d * z, c * y + d * w
    r11, r12 = m11 * ia + m12 * ic, m11 * ib + m12 * id_
    r21, r22 = m21 * ia + m22 * ic, m21 * ib + m22 * id_
    return set(map(tuple, np.stack([r11, r12, r21, r22], axis=1).tolist()))


def hyperbolic_matrices(bound: int) -> list[tuple[tuple[int, int], tuple[int, int]]]:
    r = range(-bound, bound + 1)
    return [((a, b), (c, d)) for a, b, c, d in itertools.product(r, repeat=4) if a * d - b * c == 1 and abs(a + d) > 2]


# --- Pell equations --------------------------------------------------------------------


def pell_search(d: int, y_max: int) -> tuple[Fraction, Fraction] | None:
    """Smallest unit (x + y sqrt d) > 1 of the ring of integers with y <= y_max.

    Searches y = 1, 2, ... (in halves when d = 1 mod 4) for d y^2 +- 1
    (resp. d Y^2 +- 4 with X = Y mod 2) a perfect square.
    """
    half = d % 4 == 1
    ys = np.arange(1, (2 * y_max if half else y_max) + 1, dtype=np.int64)
    base = d * ys * ys
    shift = 4 if half else 1
    best = None
    for s in (-shift, shift):
        t = base + s
        ok = t > 0
        r = np.zeros_like(t)
        r[ok] = np.floor(np.sqrt(t[ok].astype(float))).astype(np.int64)
        for fix in (-1, 0, 1):
            rr = r + fix
            hit = ok & (rr >= 0) & (rr * rr == t)
            if half:
                hit &= (rr - ys) % 2 == 0
            idx = np.flatnonzero(hit)
            if len(idx):
                i = int(idx[0])
                if best is None or ys[i] < best[1]:
                    best = (int(rr[i]), int(ys[i]))
    if best is None:
        return None
    X, Y = best
    if half:
        return Fraction(X, 2), Fraction(Y, 2)
    return Fraction(X), Fraction(Y)


def exact_root_unit(x: Fraction, y: Fraction, d: int, k: int):
    """A unit eta of Q(sqrt d) with eta**k == x + y sqrt d, or None.

    The candidate is rounded from a high-precision root and then checked in
    exact arithmetic; the trace of eta is an integer and so is 2 * y_eta.
    """
    import mpmath

    mpmath.mp.dps = 80
    eps = mpmath.mpf(x.numerator) / x.denominator + mpmath.mpf(y.numerator) / y.denominator * mpmath.sqrt(d)
    eta = eps ** (mpmath.mpf(1) / k)
    for conj in (1 / eta, -1 / eta):
        tr = int(mpmath.nint(eta + conj))
        twoy = int(mpmath.nint((eta - conj) / mpmath.sqrt(d)))
        ex, ey = Fraction(tr, 2), Fraction(twoy, 2)
        if ey <= 0:
            continue
        # exact power
        px, py = Fraction(1), Fraction(0)
        for _ in range(k):
            px, py = px * ex + d * py * ey, px * ey + py * ex
        if (px, py) == (x, y) and abs(ex * ex - d * ey * ey) == 1:
            return ex, ey
    return None


def is_minimal_unit(x: Fraction, y: Fraction, d: int) -> bool:
    """A unit > 1 is fundamental iff it is not a proper power of a unit > 1.

    The exponent is bounded by log(eps) / log(golden ratio), the smallest unit
    > 1 in any real quadratic field.
    """
    eps = float(x) + float(y) * math.sqrt(d)
    kmax = int(math.log(eps) / math.log((1 + math.sqrt(5)) / 2)) + 1
    return all(exact_root_unit(x, y, d, k) is None for k in range(2, kmax + 1))


# --- quadratic formula ------------------------------------------------------------------


def eigenvalue_by_formula(trace: int) -> tuple[Fraction, Fraction, int]:
    """``(t + sqrt(t^2-4))/2`` written as x + y sqrt(d) with d squarefree."""
    disc = trace * trace - 4
    d, s2 = 1, 1
    n = disc
    p = 2
    while p * p <= n:
        while n % (p * p) == 0:
            n //= p * p
            s2 *= p
        p += 1
    d = n
    # disc = s2^2 * d
    assert s2 * s2 * d == disc
    return Fraction(trace, 2), Fraction(s2, 2), d


# --- harmonic maps -----------------------------------------------------------------------


def hyperbolic_distance(z: complex, w: complex) -> float:
    """Closed-form distance, independent of the Möbius route.

    ``cosh d = 1 + 2|z-w|^2 / ((1-|z|^2)(1-|w|^2))`` rewritten with asinh,
    which keeps full relative precision for nearby points.
    """
    den = math.sqrt((1 - abs(z) ** 2) * (1 - abs(w) ** 2))
    return 2 * math.asinh(abs(z - w) / den)


def grid_minimizer(pins, weights, levels: int = 7, n: int = 201) -> complex:
    """Minimize sum w d(z, p)^2 by successively refined dense grids."""
    pins = np.asarray(pins, dtype=complex)
    weights = np.asarray(weights, dtype=float)
    center, half = 0j, 0.999
    for _ in range(levels):
        xs = np.linspace(center.real - half, center.real + half, n)
        ys = np.linspace(center.imag - half, center.imag + half, n)
        Z = xs[None, :] + 1j * ys[:, None]
        inside = np.abs(Z) < 0.9999
        E = np.zeros(Z.shape)
        for p, w in zip(pins, weights):
            num = 2 * np.abs(Z - p) ** 2
            den = (1 - np.abs(Z) ** 2) * (1 - abs(p) ** 2)
            with np.errstate(invalid="ignore", divide="ignore"):
                E += w * np.arccosh(1 + num / den) ** 2
        E[~inside] = np.inf
        i, j = np.unravel_index(np.argmin(E), E.shape)
        center = complex(Z[i, j])
        half = 4 * (2 * half / (n - 1))
    return center


def finite_difference_gradient(fun, z: complex, h: float = 1e-6) -> complex:
    gx = (fun(z + h) - fun(z - h)) / (2 * h)
    gy = (fun(z + 1j * h) - fun(z - 1j * h)) / (2 * h)
    return complex(gx, gy)
