"""Exact arithmetic over the ring of integers of an imaginary quadratic field.

Elements are ``u + v w`` with integer ``u, v`` and ``w`` the standard
generator: ``sqrt(-d)`` for ``d = 1, 2 mod 4`` and ``(1 + sqrt(-d))/2`` for
``d = 3 mod 4``.  ``w`` is a root of ``x^2 - t x + n``, which is all the
multiplication table needs.  Floats only appear when a matrix is handed to the
geometry modules.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
import math

import numpy as np
import sympy

from .exceptions import DomainError, NotSquarefree
from .models import MoebiusMatrix

__all__ = [
    "BianchiContext",
    "RingElement",
    "RingMatrix",
    "ring_ctx",
    "Polygon",
    "f_infty",
    "enumerate_bianchi",
    "IdealPoint",
    "ideal_points",
    "class_number",
    "ideal_norm",
    "ideal_is_proper",
    "cusp_parabolics",
    "stabilizer_elements",
    "bianchi_generators",
]


@dataclass(frozen=True)
class BianchiContext:
    d: int
    t: int
    n: int

    @property
    def discriminant(self):
        return -self.d if self.d % 4 == 3 else -4 * self.d

    @property
    def omega(self):
        return RingElement(0, 1, self)

    @property
    def omega_complex(self):
        root = complex(0.0, math.sqrt(self.d))
        return (1 + root) / 2 if self.t else root

    @property
    def omega_k(self):
        """``(d_K + sqrt(d_K))/2`` written in the basis ``1, w``."""
        if self.t:
            return RingElement(-(self.d + 1) // 2, 1, self)
        return RingElement(-2 * self.d, 1, self)

    def element(self, u, v=0):
        return RingElement(int(u), int(v), self)

    def elements_up_to_norm(self, bound):
        return [RingElement(u, v, self) for u, v in _elements_up_to_norm(self.d, self.t, self.n, bound)]


def ring_ctx(d):
    d = int(d)
    if d < 1:
        raise NotSquarefree(f"d must be a positive integer, got {d}")
    if any(e > 1 for e in sympy.factorint(d).values()):
        raise NotSquarefree(f"{d} is not squarefree")
    if d % 4 == 3:
        return BianchiContext(d, 1, (1 + d) // 4)
    return BianchiContext(d, 0, d)


@dataclass(frozen=True)
class RingElement:
    u: int
    v: int
    ctx: BianchiContext

    def _check(self, other):
        if isinstance(other, int):
            return RingElement(other, 0, self.ctx)
        if other.ctx != self.ctx:
            raise ValueError("ring elements from different contexts")
        return other

    def __add__(self, other):
        other = self._check(other)
        return RingElement(self.u + other.u, self.v + other.v, self.ctx)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._check(other)
        return RingElement(self.u - other.u, self.v - other.v, self.ctx)

    def __rsub__(self, other):
        return self._check(other) - self

    def __neg__(self):
        return RingElement(-self.u, -self.v, self.ctx)

    def __mul__(self, other):
        other = self._check(other)
        u, v = _mul(self.u, self.v, other.u, other.v, self.ctx.t, self.ctx.n)
        return RingElement(u, v, self.ctx)

    __rmul__ = __mul__

    def __pow__(self, k):
        out = RingElement(1, 0, self.ctx)
        for _ in range(int(k)):
            out = out * self
        return out

    def norm(self):
        """``|x|^2`` as an exact integer."""
        return _norm(self.u, self.v, self.ctx.t, self.ctx.n)

    def conjugate(self):
        return RingElement(self.u + self.ctx.t * self.v, -self.v, self.ctx)

    def is_zero(self):
        return self.u == 0 and self.v == 0

    def exact_div(self, other):
        """``self / other`` when it lies in the ring, else ``None``."""
        other = self._check(other)
        q = _exact_div(self.u, self.v, other.u, other.v, self.ctx.t, self.ctx.n)
        return None if q is None else RingElement(q[0], q[1], self.ctx)

    def real_part(self):
        return Fraction(2 * self.u + self.ctx.t * self.v, 2)

    def imag_sq(self):
        """``Im(x)^2`` as an exact rational."""
        if self.ctx.t:
            return Fraction(self.ctx.d * self.v * self.v, 4)
        return Fraction(self.ctx.d * self.v * self.v)

    def __complex__(self):
        return self.u + self.v * self.ctx.omega_complex

    def __repr__(self):
        return f"RingElement({self.u} + {self.v}w, d={self.ctx.d})"


def _mul(u1, v1, u2, v2, t, n):
    return u1 * u2 - n * v1 * v2, u1 * v2 + u2 * v1 + t * v1 * v2


def _norm(u, v, t, n):
    return u * u + t * u * v + n * v * v


def _exact_div(u1, v1, u2, v2, t, n):
    den = _norm(u2, v2, t, n)
    if den == 0:
        raise ZeroDivisionError("division by zero in the ring")
    # multiply by the conjugate (u2 + t v2) - v2 w
    nu, nv = _mul(u1, v1, u2 + t * v2, -v2, t, n)
    if nu % den or nv % den:
        return None
    return nu // den, nv // den


@lru_cache(maxsize=None)
def _elements_up_to_norm(d, t, n, bound):
    out = []
    if t:
        vmax = int(math.isqrt(4 * bound // d)) + 1
    else:
        vmax = int(math.isqrt(bound // d)) + 1
    umax = int(math.isqrt(bound)) + vmax + 1
    for v in range(-vmax, vmax + 1):
        for u in range(-umax, umax + 1):
            if _norm(u, v, t, n) <= bound:
                out.append((u, v))
    out.sort(key=lambda e: (_norm(e[0], e[1], t, n), e))
    return tuple(out)


@dataclass(frozen=True)
class RingMatrix:
    """2x2 matrix over the ring with exact products."""

    a: RingElement
    b: RingElement
    c: RingElement
    d: RingElement

    def __matmul__(self, o):
        return RingMatrix(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    def det(self):
        return self.a * self.d - self.b * self.c

    def trace(self):
        return self.a + self.d

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def norm2(self):
        return sum(e.norm() for e in self.entries())

    def to_moebius(self):
        return MoebiusMatrix(*(complex(e) for e in self.entries()))

    def key(self):
        return tuple((e.u, e.v) for e in self.entries())

    def __eq__(self, other):
        return isinstance(other, RingMatrix) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())


# --- the cusp prism over a fundamental domain of the stabiliser of infinity ---


@dataclass(frozen=True)
class Polygon:
    """Convex polygon as half-planes ``Re(conj(n) z) <= h`` plus its vertices.

    ``exact_vertices`` holds ``(x, y_coeff)`` with ``z = x + y_coeff sqrt(d) i``
    for Bianchi prisms; ``vertices`` are the float values in order.
    """

    constraints: tuple
    vertices: tuple
    exact_vertices: tuple = ()
    sqrt_d: int = 1

    def contains(self, z, tol=1e-9):
        z = np.asarray(z)
        ok = np.ones(z.shape, dtype=bool)
        for normal, h in self.constraints:
            ok &= np.real(np.conj(normal) * z) <= h + tol
        return ok

    def on_boundary(self, z, tol=1e-9):
        z = np.asarray(z)
        hit = np.zeros(z.shape, dtype=bool)
        for normal, h in self.constraints:
            hit |= np.abs(np.real(np.conj(normal) * z) - h) <= tol
        return hit & self.contains(z, tol)

    def bbox(self):
        xs = [v.real for v in self.vertices]
        ys = [v.imag for v in self.vertices]
        return min(xs), max(xs), min(ys), max(ys)

    def exact_vertex_norms(self):
        return [x * x + y * y * self.sqrt_d for x, y in self.exact_vertices]

    def to_json(self):
        return {"vertices": [[v.real, v.imag] for v in self.vertices]}


def _polygon(exact, d):
    root = math.sqrt(d)
    verts = tuple(complex(float(x), float(y) * root) for x, y in exact)
    cons = []
    m = len(verts)
    for i in range(m):
        p, q = verts[i], verts[(i + 1) % m]
        edge = q - p
        normal = -1j * edge  # outward for counter-clockwise vertices
        normal /= abs(normal)
        cons.append((normal, float(np.real(np.conj(normal) * p))))
    return Polygon(tuple(cons), verts, tuple(exact), d)


def f_infty(ctx):
    """Fundamental polygon of the stabiliser of infinity, vertices counter-clockwise."""
    d = ctx.d
    F = Fraction
    if d == 1:
        exact = [(F(-1, 2), F(0)), (F(1, 2), F(0)), (F(1, 2), F(1, 2)), (F(-1, 2), F(1, 2))]
    elif d == 3:
        exact = [(F(0), F(0)), (F(1, 2), F(-1, 6)), (F(1, 2), F(1, 6)), (F(0), F(1, 3))]
    elif ctx.t == 0:
        exact = [(F(-1, 2), F(-1, 2)), (F(1, 2), F(-1, 2)), (F(1, 2), F(1, 2)), (F(-1, 2), F(1, 2))]
    else:
        top = F(d + 1, 4 * d)
        side = F(d - 1, 4 * d)
        exact = [
            (F(0), -top), (F(1, 2), -side), (F(1, 2), side),
            (F(0), top), (F(-1, 2), side), (F(-1, 2), -side),
        ]
    return _polygon(exact, d)


def f_infty_constraints(ctx):
    """The printed inequalities as ``(coef_re, coef_im, lo, hi)`` rows, for cross-checking the polygon."""
    d = ctx.d
    root = math.sqrt(d)
    if d == 1:
        return [(1, 0, -0.5, 0.5), (0, 1, 0.0, 0.5)]
    if d == 3:
        return [(1, 0, 0.0, 0.5), (1, root, 0.0, 1.0)]
    if ctx.t == 0:
        return [(1, 0, -0.5, 0.5), (0, 1, -root / 2, root / 2)]
    b = (1 + d) / 4
    return [(1, 0, -0.5, 0.5), (1, root, -b, b), (1, -root, -b, b)]


# --- bounded enumeration ---


def _canonical_key(entries):
    for u, v in entries:
        if u or v:
            return u > 0 or (u == 0 and v > 0)
    return True


@lru_cache(maxsize=None)
def _enumerate(d, t, n, bound):
    elems = _elements_up_to_norm(d, t, n, bound)
    norms = {e: _norm(e[0], e[1], t, n) for e in elems}
    units = [e for e in elems if norms[e] == 1]
    out = []
    for a in elems:
        na = norms[a]
        for c in elems:
            nc = norms[c]
            if na + nc > bound or (na == 0 and nc == 0):
                continue
            for b in elems:
                nb = norms[b]
                if na + nb + nc > bound:
                    break
                if na:
                    bc = _mul(b[0], b[1], c[0], c[1], t, n)
                    dd = _exact_div(1 + bc[0], bc[1], a[0], a[1], t, n)
                    if dd is None:
                        continue
                    if na + nb + nc + _norm(dd[0], dd[1], t, n) > bound:
                        continue
                    cand = (a, b, c, dd)
                    if _canonical_key(cand):
                        out.append(cand)
                else:
                    # a = 0 forces -bc = 1, so b and c are units and d is free
                    if c not in units or b not in units:
                        continue
                    if _mul(b[0], b[1], c[0], c[1], t, n) != (-1, 0):
                        continue
                    for dd in elems:
                        if nb + nc + norms[dd] > bound:
                            break
                        cand = (a, b, c, dd)
                        if _canonical_key(cand):
                            out.append(cand)
    out = sorted(set(out), key=lambda m: (sum(_norm(x, y, t, n) for x, y in m), m))
    return tuple(out)


def enumerate_bianchi(ctx, normsq_bound):
    """All determinant-one matrices over the ring with ``||g||^2 <= normsq_bound``, one per sign pair."""
    if normsq_bound < 2:
        raise DomainError("normsq_bound must be at least 2")
    rows = _enumerate(ctx.d, ctx.t, ctx.n, int(normsq_bound))
    return [RingMatrix(*(RingElement(u, v, ctx) for u, v in m)) for m in rows]


def stabilizer_elements(ctx):
    """Elements of norm^2 2, i.e. the finite stabiliser of ``j``."""
    return [m for m in enumerate_bianchi(ctx, 2)]


def bianchi_generators(ctx):
    """A small generating set: translations by 1 and w, the inversion, and unit rotations."""
    one, zero, w = ctx.element(1), ctx.element(0), ctx.omega
    gens = [
        RingMatrix(one, one, zero, one),
        RingMatrix(one, w, zero, one),
        RingMatrix(zero, -one, one, zero),
    ]
    for m in stabilizer_elements(ctx):
        if m.b.is_zero() and m.c.is_zero() and not (m.a.u == 1 and m.a.v == 0):
            gens.append(m)
    return gens


# --- ideal points, class numbers, ideals ---


@dataclass(frozen=True)
class IdealPoint:
    """``infinity`` or the finite point ``(r + w)/q``; ``orbit`` lists the symmetric images."""

    kind: str
    r: int = None
    q: int = None
    ctx: BianchiContext = None
    orbit: tuple = ()

    @property
    def z(self):
        if self.kind == "infinity":
            return None
        return (self.r + self.ctx.omega_complex) / self.q

    def to_json(self):
        if self.kind == "infinity":
            return {"kind": "infinity"}
        z = self.z
        # integer translate with real part in (-1/2, 1/2]
        w = z - math.ceil(z.real - 0.5)
        return {"kind": "finite", "r": self.r, "q": self.q, "z": [z.real, z.imag], "z_reduced": [w.real, w.imag]}


def _q_in_range(ctx, q):
    if q <= 1:
        return False
    if ctx.t == 0:
        return 4 <= q * q and 3 * q * q <= 4 * ctx.d
    return (3 * q - 2) ** 2 <= 4 + 3 * ctx.d


def _candidate_ok(ctx, r, q):
    x = ctx.element(r, 1)
    N = x.norm()
    if N % q:
        return False
    if 2 * abs(x.real_part()) > q:
        return False
    if q * q > N:
        return False
    return x.imag_sq() * 4 <= ctx.d * q * q


def ideal_point_candidates(ctx, full_scan=False):
    """Pairs ``(r, q)`` meeting the printed constraints.

    ``full_scan`` drops the case bound on ``q`` and uses only the general
    constraints (which already force ``q <= |r + w|``), as a brute-force oracle.
    """
    qmax = math.isqrt(ctx.d + ctx.n) + 2 if full_scan else math.isqrt(4 * ctx.d) + 2
    out = []
    for q in range(2, qmax + 1):
        if not full_scan and not _q_in_range(ctx, q):
            continue
        for r in range(q):
            if _candidate_ok(ctx, r, q):
                out.append((r, q))
    return out


def _reduce_form(a, b, c):
    """Gauss reduction of a positive definite form."""
    while True:
        if c < a:
            a, b, c = c, -b, a
            continue
        if abs(b) > a:
            k = (a - b) // (2 * a)
            # choose k so that -a < b + 2ak <= a
            b, c = b + 2 * a * k, a * k * k + b * k + c
            continue
        if b < 0 and (-b == a or a == c):
            b = -b
            continue
        return (a, b, c)


def _ideal_class_form(ctx, r, q):
    """Reduced form attached to the ideal ``q Z + (r + w) Z``."""
    x = ctx.element(r, 1)
    return _reduce_form(q, 2 * r + ctx.t, x.norm() // q)


def _principal_form(ctx):
    D = ctx.discriminant
    b = D % 2
    return (1, b, (b * b - D) // 4)


def _tau_image(ctx, r, q):
    # -conj((r + w)/q) = (r' + w)/q - k for an integer k
    return ((-r - ctx.t) % q, q)


def ideal_points(ctx):
    """``infinity`` plus one finite representative per non-principal ideal class met by the candidates.

    Each candidate and its image under ``z -> -conj(z)`` are grouped by ideal
    class; representatives are the smallest ``(q, r)`` in each class.
    """
    seen = {}
    principal = _principal_form(ctx)
    for r, q in ideal_point_candidates(ctx):
        for rr, qq in {(r, q), _tau_image(ctx, r, q)}:
            if ctx.element(rr, 1).norm() % qq:
                continue
            form = _ideal_class_form(ctx, rr, qq)
            if form == principal:
                continue
            seen.setdefault(form, []).append((qq, rr))
    points = [IdealPoint("infinity")]
    for form in sorted(seen):
        reps = sorted(set(seen[form]))
        q, r = reps[0]
        points.append(IdealPoint("finite", r, q, ctx, tuple((rr, qq) for qq, rr in reps)))
    return points


def ideal_points_symmetry_dedup(ctx):
    """Dedup of the raw candidates under ``z -> -z`` and ``z -> conj(z)`` only (kept for comparison)."""
    groups = {}
    for r, q in ideal_point_candidates(ctx):
        z = (r + ctx.omega_complex) / q
        orbit = [z, -z, z.conjugate(), -z.conjugate()]
        # points differing by a lattice translation are the same cusp for the prism
        key = min((round(w.real % 1.0, 9) % 1.0, round(abs(w.imag), 9)) for w in orbit)
        groups.setdefault(key, (r, q))
    return [IdealPoint("infinity")] + [IdealPoint("finite", r, q, ctx) for r, q in sorted(groups.values(), key=lambda p: (p[1], p[0]))]


def reduced_forms(D):
    """Reduced primitive positive definite forms ``(a, b, c)`` of discriminant ``D < 0``."""
    forms = []
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if c < a:
                continue
            if b < 0 and a == c:
                continue
            if math.gcd(math.gcd(a, abs(b)), c) != 1:
                continue
            forms.append((a, b, c))
        a += 1
    return forms


def class_number(ctx):
    return len(reduced_forms(ctx.discriminant))


def _coords(x):
    return (x.u, x.v)


def ideal_norm(alpha, beta):
    """Index in the ring of the ideal generated by ``alpha`` and ``beta``.

    The ideal is the Z-span of ``alpha, beta, w alpha, w beta``; its index is
    the gcd of the 2x2 minors of those coordinate vectors.
    """
    if alpha.is_zero() and beta.is_zero():
        raise DomainError("the zero ideal has no norm")
    w = alpha.ctx.omega
    vecs = [_coords(x) for x in (alpha, beta, w * alpha, w * beta)]
    g = 0
    for i in range(4):
        for j in range(i + 1, 4):
            (p, q), (s, t) = vecs[i], vecs[j]
            g = math.gcd(g, p * t - q * s)
    return g


def ideal_is_proper(alpha, beta, ctx=None):
    return ideal_norm(alpha, beta) > 1


@dataclass(frozen=True)
class CuspParabolics:
    gamma_plus: RingMatrix
    gamma_minus: RingMatrix
    gamma: RingMatrix


def cusp_parabolics(alpha, beta, ctx=None):
    """The two commuting parabolics fixing ``alpha/beta`` and the conjugator ``gamma``.

    ``gamma`` has determinant ``-beta^2``, so the conjugation identities are
    verified in the equivalent form ``g_+ gamma = gamma T``.
    """
    ctx = ctx or alpha.ctx
    if beta.is_zero():
        raise DomainError("beta must be nonzero")
    one = ctx.element(1)
    wk = ctx.omega_k
    ab = alpha * beta
    gp = RingMatrix(one + ab, -(alpha * alpha), beta * beta, one - ab)
    gm = RingMatrix(one + wk * ab, -(wk * alpha * alpha), wk * beta * beta, one - wk * ab)
    g = RingMatrix(ab, one, beta * beta, ctx.element(0))
    return CuspParabolics(gp, gm, g)


def conjugation_identities(cp, ctx):
    """Exact checks ``g_+ g = g [[1,1],[0,1]]`` and ``g_- g = g [[1,w_K],[0,1]]``."""
    one, zero = ctx.element(1), ctx.element(0)
    T1 = RingMatrix(one, one, zero, one)
    Tw = RingMatrix(one, ctx.omega_k, zero, one)
    return (cp.gamma_plus @ cp.gamma == cp.gamma @ T1, cp.gamma_minus @ cp.gamma == cp.gamma @ Tw)
