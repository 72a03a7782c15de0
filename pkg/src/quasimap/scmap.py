"""Ground-truth conformal maps: Moebius normalization, model corners, and a
Schwarz-Christoffel solver for bounded polygons.

The SC map from the upper half plane onto a polygon with interior angles
alpha_k pi is

    Phi(z) = B + A * integral from x_1 to z of  prod_k (t - x_k)^(alpha_k - 1) dt,

with real prevertices x_1 < ... < x_n and the closure constraint
sum (1 - alpha_k) = 2.  Three prevertices are fixed at -1, 0, 1; the remaining
gaps are solved in a log-transformed unconstrained parameterization by damped
Newton on side-length ratios.  Integrals use Gauss-Jacobi rules that absorb
the endpoint singularities, with adaptive node doubling.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.special import roots_jacobi

from .errors import DegenerateTransform, InvalidAngles, NonConvergence
from .exponents import Exponent
from .powerseries import AnalyticFunc, PowerSeries
from .reflection import MapGerm
from .series import LogPolynomial, LogPowerSeries, zpow
from .surface import LPoint


# -- Moebius transforms ----------------------------------------------------------


class MobiusTransform:
    """w = (a z + b) / (c z + d), ad - bc != 0."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d):
        self.a, self.b, self.c, self.d = (complex(a), complex(b), complex(c), complex(d))
        if self.a * self.d - self.b * self.c == 0:
            raise DegenerateTransform("ad - bc = 0")

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = (self.a * z + self.b) / (self.c * z + self.d)
        return out if out.shape else complex(out)

    def compose(self, other: "MobiusTransform") -> "MobiusTransform":
        return MobiusTransform(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "MobiusTransform":
        return MobiusTransform(self.d, -self.b, -self.c, self.a)

    def derivative(self, z: complex) -> complex:
        det = self.a * self.d - self.b * self.c
        return det / (self.c * complex(z) + self.d) ** 2

    @classmethod
    def identity(cls) -> "MobiusTransform":
        return cls(1, 0, 0, 1)

    @classmethod
    def from_triple(cls, src, dst) -> "MobiusTransform":
        """Unique transform sending three distinct points to three others."""
        return cls._to_standard(dst).inverse().compose(cls._to_standard(src))

    @classmethod
    def _to_standard(cls, pts) -> "MobiusTransform":
        # sends (p1, p2, p3) to (0, 1, inf)
        p1, p2, p3 = (complex(p) for p in pts)
        return cls(p2 - p3, -p1 * (p2 - p3), p2 - p1, -p3 * (p2 - p1))

    def __repr__(self):
        return f"MobiusTransform({self.a}, {self.b}, {self.c}, {self.d})"


def mobius_H_to_disk() -> MobiusTransform:
    """The standard upper-half-plane to unit-disk map z -> (z - i)/(z + i)."""
    return MobiusTransform(1, -1j, 1, 1j)


def disk_automorphism(a: complex, rho: complex = 1.0) -> MobiusTransform:
    """z -> rho (z - a) / (conj(a) z - 1) with |a| < 1, |rho| = 1."""
    a = complex(a)
    rho = complex(rho)
    if abs(a) >= 1 or abs(abs(rho) - 1) > 1e-12:
        raise DegenerateTransform("need |a| < 1 and |rho| = 1")
    return MobiusTransform(rho, -rho * a, a.conjugate(), -1)


def normalize_at(map_value: complex, map_derivative: complex) -> MobiusTransform:
    """Disk automorphism A with A(map_value) = 0 and (A o map)'(a) > 0.

    Composing A with a Riemann map onto the disk realizes the uniqueness
    normalization phi(a) = 0, phi'(a) > 0.
    """
    w = complex(map_value)
    base = disk_automorphism(w)
    d = base.derivative(w) * complex(map_derivative)
    rho = cmath.exp(-1j * cmath.phase(d))
    return disk_automorphism(w, rho)


def cross_ratio(z1, z2, z3, z4) -> complex:
    z1, z2, z3, z4 = (complex(z) for z in (z1, z2, z3, z4))
    return ((z1 - z3) * (z2 - z4)) / ((z1 - z4) * (z2 - z3))


# -- model corner germs ------------------------------------------------------------


def model_corner_germ(alpha) -> MapGerm:
    """The sector model z -> z^alpha on H-bar: arcs are the two bounding rays."""
    a = Exponent.coerce(alpha) if not isinstance(alpha, (Exponent, float)) else alpha
    av = a.value() if isinstance(a, Exponent) else float(a)
    if not (0 < av <= 2):
        raise ValueError("model corner needs 0 < alpha <= 2")

    def on_H(z):
        z = np.asarray(z, dtype=complex)
        out = np.exp(av * np.log(z))
        return out if out.shape else complex(out)

    def on_L(z: LPoint) -> complex:
        return zpow(z.log(), av)

    rot = cmath.exp(1j * math.pi * av)
    arc1 = AnalyticFunc(PowerSeries.linear(1.0, scale=1.0, radius=np.inf), exact=lambda z: np.asarray(z, dtype=complex) + 0j, label="ray-0")
    arc2 = AnalyticFunc(PowerSeries.linear(rot, scale=1.0, radius=np.inf), exact=lambda z, r=rot: r * np.asarray(z, dtype=complex), label="ray-alpha-pi")
    return MapGerm(
        eval_complex=on_H,
        t_bar=1.0,
        alpha=a,
        growth=1.0,
        arc1=arc1,
        arc2=arc2,
        eval_lpoint=on_L,
        label=f"sector[{a}]",
    )


def model_series(alpha, r_max=math.inf) -> LogPowerSeries:
    """Exact one-term expansion of the sector model."""
    return LogPowerSeries.monomial(1.0, Exponent.coerce(alpha) if not isinstance(alpha, Exponent) else alpha, r_max=r_max)


# -- Schwarz-Christoffel -------------------------------------------------------------


@dataclass
class SCPolygon:
    """Solved parameter problem: prevertices, angles, and the affine constants."""

    vertices: list
    angles: list  # Fractions alpha_k with angle alpha_k * pi
    prevertices: np.ndarray
    A: complex
    B: complex
    residual: float

    def exponents(self) -> np.ndarray:
        return np.array([float(a) - 1.0 for a in self.angles])

    def side_lengths(self) -> np.ndarray:
        vs = np.asarray(self.vertices, dtype=complex)
        return np.abs(np.roll(vs, -1) - vs)


def _sc_integrand(t, prevertices, exponents):
    t = np.atleast_1d(np.asarray(t, dtype=complex))
    acc = np.ones_like(t)
    for x, e in zip(prevertices, exponents):
        if e != 0.0:
            acc = acc * (t - x) ** e
    return acc


def _gauss_jacobi_segment(a: complex, b: complex, sing_at_a: float | None, prevertices, exponents, n: int):
    """Integral over [a, b] with an optional endpoint singularity exponent at a.

    ``sing_at_a`` is the exponent e (> -1) of the factor (t - a)^e, which is
    pulled out of the integrand and absorbed by the Jacobi weight.
    """
    if sing_at_a is None:
        nodes, weights = roots_jacobi(n, 0.0, 0.0)
    else:
        nodes, weights = roots_jacobi(n, 0.0, sing_at_a)
    h = (b - a) / 2.0
    t = a + h * (nodes + 1.0)
    if sing_at_a is None:
        vals = _sc_integrand(t, prevertices, exponents)
        return h * np.dot(weights, vals)
    # factor (t - a)^e = h^e (1+s)^e; the (1+s)^e part sits in the weight
    t = t.astype(complex)
    vals = np.ones_like(t)
    for x, e in zip(prevertices, exponents):
        if x != a and e != 0.0:
            vals = vals * (t - x) ** e
    return complex(h) ** (sing_at_a + 1.0) * np.dot(weights, vals)


def _adaptive(segment_fn, n0: int = 24, nmax: int = 384, rtol: float = 1e-13):
    prev = segment_fn(n0)
    n = n0 * 2
    while n <= nmax:
        cur = segment_fn(n)
        if abs(cur - prev) <= rtol * max(1.0, abs(cur)):
            return cur
        prev = cur
        n *= 2
    return prev


def _side_integral_complex(prevertices, exponents, j: int) -> complex:
    """Oriented integral over the real segment [x_j, x_(j+1)]."""
    xs = prevertices
    a, b = xs[j], xs[j + 1]
    mid = 0.5 * (a + b)

    def left(n):
        return _gauss_jacobi_segment(a, mid, exponents[j], xs, exponents, n)

    def right(n):
        return _gauss_jacobi_segment(b, mid, exponents[j + 1], xs, exponents, n)

    return _adaptive(left) - _adaptive(right)


def _side_integral_abs(prevertices, exponents, j: int) -> float:
    """Side length up to |A|; the integrand phase is constant on each side."""
    return abs(_side_integral_complex(prevertices, exponents, j))


def _sc_integral_from(x_k: complex, sing_e: float | None, z: complex, prevertices, exponents) -> complex:
    """Integral of the SC integrand from x_k straight to z (principal branches)."""
    if z == x_k:
        return 0j

    def seg(n):
        return _gauss_jacobi_segment(x_k, z, sing_e, prevertices, exponents, n)

    return _adaptive(seg, n0=48, nmax=768)


def solve_sc(vertices, angles, tol: float = 1e-10, max_iter: int = 60) -> SCPolygon:
    """Solve the SC parameter problem for a bounded polygon.

    ``angles`` are the interior angles divided by pi, as exact rationals in
    (0, 2]; they must satisfy the closure rule sum(1 - alpha_k) = 2.  Vertices
    are in counterclockwise order.
    """
    vs = [complex(v[0], v[1]) if isinstance(v, (tuple, list)) else complex(v) for v in vertices]
    als = [Fraction(a) for a in angles]
    n = len(vs)
    if n < 3 or len(als) != n:
        raise InvalidAngles("need n >= 3 vertices with one angle each")
    if any(not (0 < a <= 2) for a in als):
        raise InvalidAngles("angles must lie in (0, 2] (as multiples of pi)")
    if sum((1 - a) for a in als) != 2:
        raise InvalidAngles("angle sum rule sum(1 - alpha_k) = 2 violated")
    exponents = np.array([float(a) - 1.0 for a in als])

    if n == 3:
        prev = np.array([-1.0, 0.0, 1.0])
        residual = 0.0
    else:
        target = np.log(
            np.array([abs(vs[j + 1] - vs[j]) for j in range(1, n - 2)]) / abs(vs[1] - vs[0])
        )

        def prevertices_from(u: np.ndarray) -> np.ndarray:
            gaps = np.exp(np.concatenate([[0.0], np.cumsum(u)]))
            gaps = gaps / gaps.sum()
            xs = np.empty(n)
            xs[0] = -1.0
            xs[1] = 0.0
            xs[2:] = np.cumsum(gaps)
            return xs

        def residual_of(u: np.ndarray) -> np.ndarray:
            xs = prevertices_from(u)
            base = _side_integral_abs(xs, exponents, 0)
            res = np.empty(n - 3)
            for j in range(1, n - 2):
                res[j - 1] = math.log(_side_integral_abs(xs, exponents, j) / base) - target[j - 1]
            return res

        u = np.zeros(n - 3)
        res = residual_of(u)
        norm = np.linalg.norm(res, np.inf)
        it = 0
        while norm > tol and it < max_iter:
            jac = np.empty((n - 3, n - 3))
            h = 1e-6
            for i in range(n - 3):
                up = u.copy()
                up[i] += h
                jac[:, i] = (residual_of(up) - res) / h
            try:
                step = np.linalg.solve(jac, res)
            except np.linalg.LinAlgError:
                step, *_ = np.linalg.lstsq(jac, res, rcond=None)
            lam = 1.0
            while lam > 1e-6:
                u_new = u - lam * step
                res_new = residual_of(u_new)
                if np.linalg.norm(res_new, np.inf) < norm:
                    u, res = u_new, res_new
                    norm = np.linalg.norm(res, np.inf)
                    break
                lam /= 2.0
            else:
                break
            it += 1
        if norm > tol:
            raise NonConvergence(norm)
        prev = prevertices_from(u)
        residual = float(norm)

    # affine constants from the first side
    i1 = _side_integral_complex(prev, exponents, 0)
    A = (vs[1] - vs[0]) / i1
    B = vs[0]
    poly = SCPolygon(vs, als, prev, A, B, residual)

    # closure: chain the oriented side integrals from x_1 and compare vertices
    worst = 0.0
    w_hat = vs[0]
    for j in range(n - 1):
        w_hat = w_hat + A * _side_integral_complex(prev, exponents, j)
        worst = max(worst, abs(w_hat - vs[j + 1]))
    scale = max(abs(v) for v in vs)
    if worst > 1e4 * tol * max(1.0, scale):
        raise NonConvergence(worst, f"vertex placement error {worst:.3e}")
    poly.residual = max(poly.residual, worst)
    return poly


def sc_evaluate(poly: SCPolygon, z) -> complex:
    """Phi(z) for z in the closed upper half plane, anchored at the nearest prevertex."""
    z = complex(z)
    xs = poly.prevertices
    es = poly.exponents()
    k = int(np.argmin(np.abs(xs - z)))
    anchor = xs[k]
    # image of the anchor prevertex
    w_anchor = poly.vertices[k]
    val = _sc_integral_from(anchor, es[k], z, xs, es)
    return w_anchor + poly.A * val


def sc_boundary_point(poly: SCPolygon, x: float) -> complex:
    return sc_evaluate(poly, complex(x, 0.0))


def sc_corner_germ(poly: SCPolygon, k: int, order: int = 24, t_frac: float = 0.5) -> MapGerm:
    """Germ of the SC map at vertex k: Phi(x_k + z) - w_k on H-bar.

    The expansion has pure powers z^(alpha_k + j): the integrand splits as
    (t - x_k)^(alpha_k - 1) times a factor analytic near x_k, and termwise
    integration never hits a log (alpha_k + j > 0 throughout).
    """
    xs = poly.prevertices
    es = poly.exponents()
    n = len(xs)
    x_k = xs[k]
    alpha_k = poly.angles[k]
    a_val = float(alpha_k)
    gap = min(abs(xs[j] - x_k) for j in range(n) if j != k)
    t_bar = t_frac * gap

    # Taylor coefficients of G(u) = prod_{j != k} (x_k - x_j + u)^(e_j)
    g = np.zeros(order + 1, dtype=complex)
    g[0] = 1.0
    for j in range(n):
        if j == k:
            continue
        base = complex(x_k - xs[j])
        if xs[j] > x_k:
            # principal branch approached from H: (negative real + u)^e
            pass
        fac = np.zeros(order + 1, dtype=complex)
        fac[0] = base**es[j]
        # (base + u)^e = base^e * (1 + u/base)^e, binomial in u/base
        coeff = 1.0
        for m in range(1, order + 1):
            coeff *= (es[j] - (m - 1)) / m
            fac[m] = fac[0] * coeff / base**m
        g = np.convolve(g, fac)[: order + 1]

    # term integrals: Phi(x_k + z) - w_k = A sum_m g_m z^(alpha_k + m) / (alpha_k + m)
    coeffs = poly.A * g / (a_val + np.arange(order + 1))
    terms = {}
    for m, c in enumerate(coeffs):
        if c != 0:
            terms[Exponent(alpha_k) + Exponent(m)] = LogPolynomial.constant(c)
    series = LogPowerSeries(terms, r_max=Exponent(alpha_k) + Exponent(order))

    w_k = poly.vertices[k]

    def germ_eval(z):
        z = np.asarray(z, dtype=complex)
        flat = np.atleast_1d(z)
        out = np.array([sc_evaluate(poly, x_k + w) - w_k for w in flat])
        return out.reshape(z.shape) if z.shape else complex(out[0])

    def germ_eval_lpoint(zp: LPoint) -> complex:
        # series evaluation is branch-exact on the surface and fast
        return series.eval_finite(zp)

    growth = float(np.sum(np.abs(coeffs) * t_bar ** np.arange(order + 1))) * 1.05

    vs = poly.vertices
    d1 = vs[(k + 1) % n] - w_k
    d2 = vs[(k - 1) % n] - w_k
    arc1 = AnalyticFunc(PowerSeries.linear(d1 / abs(d1), scale=1.0, radius=abs(d1)), exact=lambda z, c=d1 / abs(d1): c * np.asarray(z, dtype=complex), label="side-fwd")
    arc2 = AnalyticFunc(PowerSeries.linear(d2 / abs(d2), scale=1.0, radius=abs(d2)), exact=lambda z, c=d2 / abs(d2): c * np.asarray(z, dtype=complex), label="side-back")

    germ = MapGerm(
        eval_complex=germ_eval,
        t_bar=t_bar,
        alpha=Exponent(alpha_k),
        growth=growth,
        arc1=arc1,
        arc2=arc2,
        eval_lpoint=germ_eval_lpoint,
        label=f"sc-vertex-{k}",
    )
    germ.series = series
    return germ
