"""Truncated numeric power series with a certified radius.

The reflection tower multiplies radii down by 32 per level, so raw Taylor
coefficients would overflow doubles after a few levels.  Series are therefore
stored in scaled form

    f(z) = sum_n  c_n (z / scale)^n,

with ``scale`` chosen near the working radius so the stored coefficients stay
O(1).  ``radius`` records where the representation is trusted; evaluation
outside raises.

An :class:`AnalyticFunc` bundles the series with an optional exact evaluator
(closed form) used preferentially when present.
"""

from __future__ import annotations

import numpy as np

from .errors import ImageEscapesChart, InversionFailure


class PowerSeries:
    """f(z) = sum c_n (z/scale)^n, trusted on |z| < radius."""

    __slots__ = ("coeffs", "scale", "radius")

    def __init__(self, coeffs, scale: float = 1.0, radius: float = np.inf):
        self.coeffs = np.asarray(coeffs, dtype=complex)
        if self.coeffs.ndim != 1 or len(self.coeffs) == 0:
            raise ValueError("coeffs must be a nonempty 1-d array")
        self.scale = float(scale)
        if not self.scale > 0:
            raise ValueError("scale must be positive")
        self.radius = float(radius)

    # -- constructors -----------------------------------------------------------

    @classmethod
    def from_unscaled(cls, unscaled, scale: float = 1.0, radius: float = np.inf) -> "PowerSeries":
        """Build from plain Taylor coefficients a_n (of z^n)."""
        a = np.asarray(unscaled, dtype=complex)
        n = np.arange(len(a))
        return cls(a * (float(scale) ** n), scale, radius)

    @classmethod
    def identity(cls, scale: float = 1.0, radius: float = np.inf) -> "PowerSeries":
        return cls([0.0, scale], scale, radius)

    @classmethod
    def linear(cls, c1: complex, scale: float = 1.0, radius: float = np.inf) -> "PowerSeries":
        return cls([0.0, c1 * scale], scale, radius)

    # -- basics -------------------------------------------------------------------

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def unscaled(self) -> np.ndarray:
        n = np.arange(len(self.coeffs))
        return self.coeffs / (self.scale**n)

    def coefficient(self, n: int) -> complex:
        if n > self.order:
            return 0j
        return complex(self.coeffs[n] / self.scale**n)

    def deriv0(self) -> complex:
        """f'(0)."""
        return complex(self.coeffs[1] / self.scale) if self.order >= 1 else 0j

    def rescaled(self, new_scale: float) -> "PowerSeries":
        ratio = float(new_scale) / self.scale
        n = np.arange(len(self.coeffs))
        return PowerSeries(self.coeffs * ratio**n, new_scale, self.radius)

    def truncated(self, order: int) -> "PowerSeries":
        return PowerSeries(self.coeffs[: order + 1].copy(), self.scale, self.radius)

    def conjugated(self) -> "PowerSeries":
        """Series of z -> conj(f(conj z)): conjugate coefficients."""
        return PowerSeries(np.conj(self.coeffs), self.scale, self.radius)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        u = z / self.scale
        acc = np.zeros_like(u)
        for c in self.coeffs[::-1]:
            acc = acc * u + c
        return acc if acc.shape else complex(acc)

    def eval_deriv(self, z):
        z = np.asarray(z, dtype=complex)
        u = z / self.scale
        acc = np.zeros_like(u)
        for n in range(self.order, 0, -1):
            acc = acc * u + n * self.coeffs[n]
        acc = acc / self.scale
        return acc if acc.shape else complex(acc)

    # -- arithmetic ------------------------------------------------------------------

    def __add__(self, other: "PowerSeries") -> "PowerSeries":
        o = other.rescaled(self.scale) if other.scale != self.scale else other
        n = max(len(self.coeffs), len(o.coeffs))
        a = np.zeros(n, dtype=complex)
        a[: len(self.coeffs)] += self.coeffs
        a[: len(o.coeffs)] += o.coeffs
        return PowerSeries(a, self.scale, min(self.radius, o.radius))

    def __neg__(self):
        return PowerSeries(-self.coeffs, self.scale, self.radius)

    def __sub__(self, other):
        return self + (-other)

    def scaled_by(self, c: complex) -> "PowerSeries":
        return PowerSeries(self.coeffs * c, self.scale, self.radius)

    def shift_constant(self, c: complex) -> "PowerSeries":
        a = self.coeffs.copy()
        a[0] += c
        return PowerSeries(a, self.scale, self.radius)

    def multiplied(self, other: "PowerSeries", order: int | None = None) -> "PowerSeries":
        o = other.rescaled(self.scale) if other.scale != self.scale else other
        order = self.order if order is None else order
        full = np.convolve(self.coeffs, o.coeffs)[: order + 1]
        return PowerSeries(full, self.scale, min(self.radius, o.radius))

    def compose(self, inner: "PowerSeries", order: int | None = None) -> "PowerSeries":
        """self(inner(z)); inner(0) must be 0.  Result lives on inner's scale."""
        if abs(inner.coeffs[0]) != 0:
            raise ValueError("inner series must vanish at 0")
        order = inner.order if order is None else order
        # w/self.scale expressed in inner's variable u = z/inner.scale
        w = np.zeros(order + 1, dtype=complex)
        m = min(len(inner.coeffs) - 1, order)
        w[1 : m + 1] = inner.coeffs[1 : m + 1] / self.scale
        acc = np.zeros(order + 1, dtype=complex)
        for c in self.coeffs[::-1]:
            acc = np.convolve(acc, w)[: order + 1]
            acc[0] += c
        return PowerSeries(acc, inner.scale, inner.radius)

    def reversion(self, order: int | None = None, out_scale: float | None = None) -> "PowerSeries":
        """Series g with f(g(w)) = w + O(w^(order+1)); needs f(0)=0, f'(0) != 0.

        ``out_scale`` defaults to |f'(0)| * scale / 4, the Koebe-guaranteed
        image radius for normalized univalent charts.
        """
        if abs(self.coeffs[0]) > 0:
            raise ValueError("reversion requires f(0) = 0")
        c1 = complex(self.coeffs[1])
        if c1 == 0:
            raise InversionFailure("reversion requires f'(0) != 0")
        order = self.order if order is None else order
        out_abs = abs(c1) / 4.0 if out_scale is None else float(out_scale)
        # Normalized unknown G(v) = g(w)/scale in v = w/out_abs, satisfying
        #   c1 G + sum_{n>=2} c_n G^n = out_abs * v   (fixed point, one order per sweep).
        rhs = np.zeros(order + 1, dtype=complex)
        rhs[1] = out_abs
        g = np.zeros(order + 1, dtype=complex)
        g[1] = out_abs / c1
        head = self.coeffs[2 : order + 1]
        for _ in range(order):
            inner = np.zeros(order + 1, dtype=complex)
            for c in head[::-1]:
                inner = np.convolve(inner, g)[: order + 1]
                inner[0] += c
            tail = np.convolve(np.convolve(inner, g)[: order + 1], g)[: order + 1]
            g_new = (rhs - tail) / c1
            g_new[0] = 0.0
            if np.array_equal(g_new, g):
                break
            g = g_new
        return PowerSeries(g * self.scale, out_abs, out_abs)

    def newton_inverse(self, w: complex, z0: complex | None = None, tol: float = 1e-14, maxiter: int = 60) -> complex:
        """Solve f(z) = w near 0 by damped Newton, seeded by the reversion if needed."""
        if z0 is None:
            z0 = w / self.deriv0()
        z = complex(z0)
        fz = self(z) - w
        target = tol * max(abs(w), abs(self.coeffs[1]))
        for _ in range(maxiter):
            if abs(fz) <= target:
                return z
            d = self.eval_deriv(z)
            if d == 0:
                break
            step = fz / d
            lam = 1.0
            for _ in range(40):
                z_new = z - lam * step
                f_new = self(z_new) - w
                if abs(f_new) < abs(fz):
                    z, fz = z_new, f_new
                    break
                lam /= 2
            else:
                break
        if abs(fz) > 100 * target + 1e-300:
            raise InversionFailure(f"Newton inversion stalled at |f - w| = {abs(fz):.3e}")
        return z

    def tail_bound(self, z_abs: float, growth: float, growth_radius: float) -> float:
        """Cauchy tail bound past the stored order for |f| <= growth on |z|=growth_radius."""
        q = z_abs / growth_radius
        if q >= 1:
            return np.inf
        return growth * q ** (self.order + 1) / (1 - q)


class AnalyticFunc:
    """Analytic function data: certified series plus optional exact evaluator."""

    __slots__ = ("series", "exact", "label")

    def __init__(self, series: PowerSeries, exact=None, label: str = ""):
        self.series = series
        self.exact = exact
        self.label = label

    @classmethod
    def from_callable(cls, fn, radius: float, order: int = 40, scale: float | None = None, label: str = "") -> "AnalyticFunc":
        """Sample Taylor coefficients of ``fn`` on a circle by FFT."""
        m = max(4 * (order + 1), 256)
        rho = (scale or radius) * 0.5
        theta = 2 * np.pi * np.arange(m) / m
        vals = fn(rho * np.exp(1j * theta))
        coeffs = np.fft.fft(vals) / m
        coeffs = coeffs[: order + 1]
        # snap sampling noise to structural zeros (e.g. fn(0) = 0 exactly)
        floor = 1e-14 * np.max(np.abs(coeffs))
        coeffs[np.abs(coeffs) < floor] = 0.0
        return cls(PowerSeries(coeffs, rho, radius), exact=fn, label=label)

    @property
    def radius(self) -> float:
        return self.series.radius

    def deriv0(self) -> complex:
        return self.series.deriv0()

    def __call__(self, z):
        if self.exact is not None:
            return self.exact(z)
        return self.series(z)

    def via_series(self, z):
        return self.series(z)

    def conjugated(self) -> "AnalyticFunc":
        ex = None
        if self.exact is not None:
            inner = self.exact
            ex = lambda z: np.conj(inner(np.conj(z)))
        return AnalyticFunc(self.series.conjugated(), ex, label=self.label + "~")

    def inverse_at(self, w: complex, rev: PowerSeries | None = None) -> complex:
        z0 = rev(w) if rev is not None else None
        return self.series.newton_inverse(w, z0=z0)


def require_in_disk(value: complex, radius: float, what: str) -> None:
    if abs(value) >= radius:
        raise ImageEscapesChart(f"{what}: |{abs(value):.3e}| >= chart radius {radius:.3e}")
