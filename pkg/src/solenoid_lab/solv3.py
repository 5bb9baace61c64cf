"""Sol-geometry torus bundles and real quadratic fields.

The torus bundle with hyperbolic monodromy ``A`` is determined up to isometry
by the GL(2, Z) conjugacy class of ``A`` or ``A^{-1}``, and up to
commensurability by the real quadratic field containing the eigenvalues of
``A``.  Conjugacy is decided through the cycles of reduced indefinite binary
quadratic forms attached to the matrices.

Commensurability by field: two dilatations lying in the same field are units
> 1 of the same rank-one unit group modulo torsion, hence multiplicatively
dependent, and the bundles share a finite cover.  This is a classical theorem
and is not re-proved at runtime.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import Sequence

from ._arith import is_squarefree, squarefree_part

Matrix2 = tuple[tuple[int, int], tuple[int, int]]


def parse_matrix(text: str) -> Matrix2:
    """Parse the literal ``"a,b;c,d"``."""
    try:
        rows = [[int(x) for x in row.split(",")] for row in text.split(";")]
    except ValueError as exc:
        raise ValueError(f"bad matrix literal {text!r}") from exc
    if len(rows) != 2 or any(len(r) != 2 for r in rows):
        raise ValueError(f"expected a 2x2 literal 'a,b;c,d', got {text!r}")
    return (tuple(rows[0]), tuple(rows[1]))  # type: ignore[return-value]


def format_matrix(m: Sequence[Sequence[int]]) -> str:
    return ";".join(",".join(str(x) for x in row) for row in m)


@dataclass(frozen=True)
class HypMatrix:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError(f"{self.rows} does not have determinant 1")
        if abs(self.trace) <= 2:
            raise ValueError(f"{self.rows} is not hyperbolic (|trace| <= 2)")

    @classmethod
    def of(cls, m) -> "HypMatrix":
        if isinstance(m, HypMatrix):
            return m
        if isinstance(m, str):
            m = parse_matrix(m)
        (a, b), (c, d) = m
        return cls(int(a), int(b), int(c), int(d))

    @property
    def rows(self) -> Matrix2:
        return ((self.a, self.b), (self.c, self.d))

    @property
    def trace(self) -> int:
        return self.a + self.d

    def inverse(self) -> "HypMatrix":
        return HypMatrix(self.d, -self.b, -self.c, self.a)

    def __matmul__(self, other: "HypMatrix") -> "HypMatrix":
        return HypMatrix.of(_mul(self.rows, other.rows))

    def power(self, n: int) -> "HypMatrix":
        if n < 1:
            raise ValueError("positive powers only")
        out = self
        for _ in range(n - 1):
            out = out @ self
        return out

    def __str__(self):
        return format_matrix(self.rows)


def _mul(x, y):
    return tuple(tuple(sum(x[i][k] * y[k][j] for k in range(2)) for j in range(2)) for i in range(2))


def is_hyperbolic(m) -> bool:
    (a, b), (c, d) = parse_matrix(m) if isinstance(m, str) else m
    if a * d - b * c != 1:
        raise ValueError("matrix must have determinant 1")
    return abs(a + d) > 2


@dataclass(frozen=True)
class QuadField:
    d: int

    def __post_init__(self):
        if self.d < 2 or not is_squarefree(self.d):
            raise ValueError(f"d = {self.d} must be squarefree and >= 2")

    @property
    def omega_is_half(self) -> bool:
        """Ring of integers is Z[(1+sqrt d)/2] rather than Z[sqrt d]."""
        return self.d % 4 == 1

    def to_json(self) -> dict:
        return {"d": self.d}


@dataclass(frozen=True)
class QuadNumber:
    """``x + y*sqrt(d)`` with rational ``x``, ``y``."""

    x: Fraction
    y: Fraction
    d: int

    def __post_init__(self):
        object.__setattr__(self, "x", Fraction(self.x))
        object.__setattr__(self, "y", Fraction(self.y))

    def _check(self, other: "QuadNumber") -> None:
        if other.d != self.d:
            raise ValueError("numbers from different fields")

    def __add__(self, other):
        if not isinstance(other, QuadNumber):
            return QuadNumber(self.x + other, self.y, self.d)
        self._check(other)
        return QuadNumber(self.x + other.x, self.y + other.y, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadNumber(-self.x, -self.y, self.d)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, QuadNumber):
            return QuadNumber(self.x * other, self.y * other, self.d)
        self._check(other)
        return QuadNumber(self.x * other.x + self.d * self.y * other.y, self.x * other.y + self.y * other.x, self.d)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadNumber":
        return QuadNumber(self.x, -self.y, self.d)

    def norm(self) -> Fraction:
        return self.x * self.x - self.d * self.y * self.y

    def trace(self) -> Fraction:
        return 2 * self.x

    def __truediv__(self, other):
        if not isinstance(other, QuadNumber):
            return QuadNumber(self.x / other, self.y / other, self.d)
        n = other.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in quadratic field")
        return self * other.conjugate() / n

    def __rtruediv__(self, other):
        return QuadNumber(Fraction(other), 0, self.d) / self

    def __pow__(self, n: int):
        out = QuadNumber(1, 0, self.d)
        for _ in range(n):
            out = out * self
        return out

    def sign(self) -> int:
        """Exact sign of the real number ``x + y*sqrt(d)``."""
        sx, sy = _sgn(self.x), _sgn(self.y)
        if sy == 0 or sx == sy:
            return sx or sy
        # opposite signs: compare x^2 with d*y^2
        diff = self.x * self.x - self.d * self.y * self.y
        return sx * _sgn(diff)

    def __float__(self):
        return float(self.x) + float(self.y) * self.d**0.5

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def is_integral(self) -> bool:
        """Membership in the ring of integers of Q(sqrt d)."""
        if self.x.denominator == 1 and self.y.denominator == 1:
            return True
        if self.d % 4 != 1:
            return False
        return self.x.denominator == 2 and self.y.denominator == 2

    def omega_coords(self) -> tuple[Fraction, Fraction]:
        """Coordinates ``(u, v)`` with self = u + v*omega."""
        if self.d % 4 == 1:
            return self.x - self.y, 2 * self.y
        return self.x, self.y

    def __str__(self):
        return format_surd(self)


def _sgn(x) -> int:
    return (x > 0) - (x < 0)


def format_surd(z: QuadNumber) -> str:
    """Render like ``(3+sqrt5)/2`` or ``3+2sqrt2``."""
    den = z.x.denominator * z.y.denominator // gcd(z.x.denominator, z.y.denominator)
    X, Y = int(z.x * den), int(z.y * den)
    if Y == 0:
        body = str(X)
    else:
        coef = {1: "", -1: "-"}.get(Y, str(Y))
        surd = f"{coef}sqrt{z.d}"
        if X == 0:
            body = surd
        else:
            body = f"{X}{'+' if Y > 0 else ''}{surd}"
    if den == 1:
        return body
    return f"({body})/{den}" if (Y and X) else f"{body}/{den}"


def field_invariant(A) -> QuadField:
    A = HypMatrix.of(A)
    return QuadField(squarefree_part(A.trace**2 - 4))


@dataclass(frozen=True)
class EigenData:
    lam: QuadNumber
    expanding_slope: QuadNumber
    contracting_slope: QuadNumber


def eigen_data(A) -> EigenData:
    """Eigenvalue ``(t + sqrt(t^2-4))/2`` and the two eigen-slopes, exactly."""
    A = HypMatrix.of(A)
    t = A.trace
    disc = t * t - 4
    d = squarefree_part(disc)
    s = isqrt(disc // d)
    lam = QuadNumber(Fraction(t, 2), Fraction(s, 2), d)
    lam_inv = QuadNumber(Fraction(t, 2), Fraction(-s, 2), d)
    assert lam * lam_inv == QuadNumber(1, 0, d)
    # eigenvector (mu - d_entry, c) has slope c / (mu - d_entry)
    big = lam if abs(float(lam)) > 1 else lam_inv
    small = lam_inv if big is lam else lam
    return EigenData(lam, QuadNumber(A.c, 0, d) / (big - A.d), QuadNumber(A.c, 0, d) / (small - A.d))


# --- binary quadratic forms -------------------------------------------------

Form = tuple[int, int, int]


def matrix_form(A: HypMatrix) -> Form:
    """Form ``c x^2 + (d-a) x y - b y^2`` whose roots are the fixed points of A."""
    return (A.c, A.d - A.a, -A.b)


def _disc(f: Form) -> int:
    a, b, c = f
    return b * b - 4 * a * c


def _normalize_b(b: int, a: int, root: int) -> int:
    """Unique ``r = b mod 2|a|`` in the normal window for discriminant with isqrt ``root``."""
    m = 2 * abs(a)
    if abs(a) > root:
        r = b % m
        return r - m if r > abs(a) else r
    return root - ((root - b) % m)


def is_reduced(f: Form) -> bool:
    a, b, c = f
    root = isqrt(_disc(f))
    return 0 < b <= root and b + 2 * abs(a) > root and 2 * abs(a) - b <= root


def rho(f: Form) -> Form:
    """One proper reduction step ``(a, b, c) -> (c, b', (b'^2 - D) / 4c)``."""
    a, b, c = f
    D = _disc(f)
    b2 = _normalize_b(-b, c, isqrt(D))
    return (c, b2, (b2 * b2 - D) // (4 * c))


def reduce_form(f: Form, max_steps: int = 10_000) -> Form:
    D = _disc(f)
    if D <= 0 or isqrt(D) ** 2 == D:
        raise ValueError("indefinite forms with non-square discriminant only")
    for _ in range(max_steps):
        if is_reduced(f):
            return f
        f = rho(f)
    raise RuntimeError("form reduction did not terminate")


def form_cycle(f: Form) -> list[Form]:
    start = reduce_form(f)
    cyc = [start]
    g = rho(start)
    while g != start:
        cyc.append(g)
        g = rho(g)
        if len(cyc) > 100_000:
            raise RuntimeError("cycle too long")
    return cyc


def proper_class_key(f: Form) -> Form:
    """Canonical representative of the SL(2, Z)-class of an indefinite form."""
    return min(form_cycle(f))


def gl2z_conjugate(A, B) -> bool:
    """Whether ``P A P^{-1} = B`` for some ``P`` in GL(2, Z).

    Conjugation by ``P`` transports forms as ``F_B = det(P) * F_A o P^{-1}``,
    so ``B`` is conjugate to ``A`` iff the traces agree and ``F_B`` is properly
    equivalent to ``F_A`` or to the twisted form ``-F_A(x, -y)``.
    """
    A, B = HypMatrix.of(A), HypMatrix.of(B)
    if A.trace != B.trace:
        return False
    fa, fb = matrix_form(A), matrix_form(B)
    if _content(fa) != _content(fb):
        return False
    kb = proper_class_key(fb)
    if kb == proper_class_key(fa):
        return True
    a, b, c = fa
    return kb == proper_class_key((-a, b, -c))


def _content(f: Form) -> int:
    return gcd(gcd(f[0], f[1]), f[2])


def isometric_bundles(A, B) -> bool:
    B = HypMatrix.of(B)
    return gl2z_conjugate(A, B) or gl2z_conjugate(A, B.inverse())


def commensurable_bundles(A, B) -> bool:
    return field_invariant(A) == field_invariant(B)


# --- units --------------------------------------------------------------------


def _floor_surd(P: int, D: int, Q: int) -> int:
    """``floor((P + sqrt D) / Q)`` exactly, D not a square."""
    n = int((P + D**0.5) // Q)

    def at_least(k: int) -> bool:
        # (P + sqrt D) / Q >= k
        rhs = k * Q - P
        if Q > 0:
            return rhs <= 0 or rhs * rhs <= D
        return rhs >= 0 and rhs * rhs >= D

    while not at_least(n):
        n -= 1
    while at_least(n + 1):
        n += 1
    return n


def continued_fraction_convergents(P: int, D: int, Q: int):
    """Yield ``(a_k, p_k, q_k)`` for the expansion of ``(P + sqrt D) / Q``."""
    if (D - P * P) % Q:
        raise ValueError("need Q | D - P^2")
    p_prev, p = 0, 1
    q_prev, q = 1, 0
    while True:
        a = _floor_surd(P, D, Q)
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        yield a, p, q
        P = a * Q - P
        Q = (D - P * P) // Q


def fundamental_unit(F) -> QuadNumber:
    """Smallest unit > 1 of the ring of integers, from the expansion of omega."""
    F = F if isinstance(F, QuadField) else QuadField(int(F))
    d = F.d
    half = F.omega_is_half
    P, Q = (1, 2) if half else (0, 1)
    for _, p, q in continued_fraction_convergents(P, d, Q):
        # p - q*omega is small; its conjugate is the unit > 1
        if half:
            x, y = Fraction(2 * p - q, 2), Fraction(q, 2)
        else:
            x, y = Fraction(p), Fraction(q)
        eps = QuadNumber(x, y, d)
        if abs(eps.norm()) == 1:
            assert eps.is_integral() and eps.sign() > 0
            return eps
    raise AssertionError("unreachable")


def unit_for_bundle(F) -> QuadNumber:
    """The unit used for the canonical bundle: epsilon, or epsilon^2 if its norm is -1."""
    eps = fundamental_unit(F)
    return eps if eps.norm() == 1 else eps * eps


def multiplication_matrix(u: QuadNumber) -> Matrix2:
    """Matrix of multiplication by ``u`` on the basis ``{1, omega}`` (columns = images)."""
    x, y = (int(c) for c in u.omega_coords())
    if u.d % 4 == 1:
        tr, n0 = 1, (u.d - 1) // 4
    else:
        tr, n0 = 0, u.d
    # omega^2 = tr*omega + n0
    return ((x, y * n0), (y, x + y * tr))


def matrix_from_field(F) -> HypMatrix:
    return HypMatrix.of(multiplication_matrix(unit_for_bundle(F)))
