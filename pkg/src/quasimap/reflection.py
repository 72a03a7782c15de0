"""Schwarz-reflection continuation onto the log surface.

Given a germ on the closed upper half plane that sends the positive direction
into the arc Gamma_1 and the negative direction into Gamma_2 (both regular
analytic arcs through 0 of an analytic corner), the continuation is built as a
tower of reflections across the successive image arcs:

    level charts    phi_0 = phi_(2),   phi_(k+1)(z) = conj(chi_k(phi_(1)(conj z)))
    reflectors      chi_k(z) = conj(phi_k(conj(phi_k^(-1)(z))))     on B(0, r_k/8)
    extension       Phi_(k+1)(z) = conj(chi_k(Phi_k(tau_k z)))      on T'_(k+1)

with the explicit constant ladder

    r_(k+1) = r_k / 32,   E_k = E 4^k,   t_k = (r_k / (16 E_k))^(1/alpha),
    s_k = min(t_k, E_k^(-2/alpha)),

under which |Phi_k| <= E_k |z|^alpha on T_k within |z| < t_k.  The chart
inverses exist on quarter disks and the reflectors obey |chi_k(z)| <= 4|z| by
the Koebe quarter theorem and the growth theorem for normalized univalent
functions; the Cauchy consequence |c_(k,l)| <= 4 (16/r_k)^(l-1) bounds the
reflector coefficients.

Negative arguments are reached by running the same construction on the
mirrored germ  z -> conj(Phi(-conj z))  with the two arcs swapped and
conjugated, gluing along (r, phi) -> (r, pi - phi).

Since t_k decays at the exact geometric rate (32*4)^(1/alpha) per level, the
union of the sector balls contains a region r < c exp(-C sqrt|phi|): a
quadratic domain, whose constants are certified from the ladder.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    GermTooSmall,
    ImageEscapesChart,
    NormalizationError,
    OutsideExtensionDomain,
)
from .exponents import Exponent
from .powerseries import AnalyticFunc, PowerSeries, require_in_disk
from .surface import LPoint, QuadraticDomain, sector_index_point

DEFAULT_ORDER = 40


@dataclass
class MapGerm:
    """Boundary-matched germ on the closed upper half plane near 0.

    ``eval_complex`` acts on points of H-bar as complex numbers; an optional
    ``eval_lpoint`` takes log-surface points with arg in [0, pi] directly (used
    to keep closed-form models branch-exact).  ``growth`` is E in the certified
    bound |Phi(z)| <= E |z|^alpha for |z| < t_bar.
    """

    eval_complex: object
    t_bar: float
    alpha: object  # Exponent | float
    growth: float
    arc1: AnalyticFunc
    arc2: AnalyticFunc
    eval_lpoint: object = None
    label: str = ""

    @property
    def alpha_value(self) -> float:
        return self.alpha.value() if isinstance(self.alpha, Exponent) else float(self.alpha)

    def at(self, z: LPoint) -> complex:
        if self.eval_lpoint is not None:
            return self.eval_lpoint(z)
        return complex(self.eval_complex(cmath.rect(z.r, z.phi)))

    def mirrored(self) -> "MapGerm":
        """Germ z -> conj(Phi(-conj z)) with swapped, conjugated arcs."""
        inner_c = self.eval_complex
        mirror_c = lambda z: np.conj(inner_c(-np.conj(z)))
        mirror_l = None
        if self.eval_lpoint is not None:
            inner_l = self.eval_lpoint

            def mirror_l(z: LPoint) -> complex:
                flipped = LPoint(z.r, phi_pi=1 - z.phi_pi, phi_rem=-z.phi_rem)
                return complex(inner_l(flipped)).conjugate()

        return MapGerm(
            eval_complex=mirror_c,
            t_bar=self.t_bar,
            alpha=self.alpha,
            growth=self.growth,
            arc1=self.arc2.conjugated(),
            arc2=self.arc1.conjugated(),
            eval_lpoint=mirror_l,
            label=self.label + "*",
        )


def reflect_across(chart: AnalyticFunc, F, chart_radius: float | None = None):
    """The reflection operator  F  ->  chart o conj o chart^(-1) o F o conj.

    Applied twice it is the identity wherever the compositions stay inside the
    chart's invertibility disk; values escaping that disk raise
    :class:`ImageEscapesChart`.
    """
    from .errors import InversionFailure

    radius = chart_radius or chart.radius
    rev = chart.series.reversion(order=chart.series.order)

    def reflected(z: complex) -> complex:
        z = complex(z)
        w = complex(F(z.conjugate()))
        seed = rev(w) if abs(w) < rev.radius else None
        try:
            pre = chart.series.newton_inverse(w, z0=seed)
        except InversionFailure as exc:
            raise ImageEscapesChart(f"no chart preimage for |w| = {abs(w):.3e}") from exc
        require_in_disk(pre, radius, "chart preimage")
        return complex(chart(pre.conjugate()))

    return reflected


def schwarz_reflect(f, chart: AnalyticFunc, chart_radius: float | None = None):
    """Holomorphic extension of f below the axis across the arc chart([0,1)).

    Returns the piecewise map equal to f for Im z >= 0 and to the reflected
    values chart(conj(chart^(-1)(f(conj z)))) for Im z < 0; f must send [0, r)
    into the arc for the two halves to glue.
    """
    lower = reflect_across(chart, f, chart_radius)

    def extended(z: complex) -> complex:
        z = complex(z)
        if z.imag >= 0:
            return complex(f(z))
        return lower(z)

    return extended


def build_chi(phi: AnalyticFunc, r: float, order: int = DEFAULT_ORDER) -> AnalyticFunc:
    """Reflector chi = conj . phi . conj . phi^(-1) on B(0, r/8).

    phi must be injective on B(0, r) with phi(0) = 0 and |phi'(0)| = 1; the
    chart inverse exists on B(0, r/4) and |phi^(-1)| <= 4|.| keeps the
    composition inside the chart.
    """
    d0 = phi.deriv0()
    if abs(abs(d0) - 1.0) > 1e-9:
        raise NormalizationError(f"|phi'(0)| = {abs(d0):.12f}, rescale the chart first")
    ser = phi.series
    if ser.scale > r:
        ser = ser.rescaled(r / 2.0)
    rev = ser.reversion(order=order, out_scale=r / 4.0)
    chi_series = ser.conjugated().compose(rev, order=order).rescaled(r / 8.0)
    chi_series.radius = r / 8.0

    exact = None
    if phi.exact is not None:
        phi_exact = phi.exact

        def exact(z: complex) -> complex:
            z = complex(z)
            if z == 0:
                return 0j
            pre = ser.newton_inverse(z, z0=rev(z))
            return complex(phi_exact(complex(pre).conjugate())).conjugate()

    return AnalyticFunc(chi_series, exact=None if phi.exact is None else exact, label="chi")


@dataclass
class TowerLevel:
    k: int
    r: float
    E: float
    t: float
    s: float
    phi: AnalyticFunc
    chi: AnalyticFunc


@dataclass
class ReflectionTower:
    """Positive-direction reflection ladder for one germ."""

    germ: MapGerm
    levels: list  # list[TowerLevel]
    r0: float
    alpha: float
    order: int

    @property
    def K(self) -> int:
        return len(self.levels) - 1

    def level(self, k: int) -> TowerLevel:
        return self.levels[k]

    def t_of(self, k: int) -> float:
        return self.levels[k].t if k <= self.K else 0.0

    def evaluate(self, z: LPoint, use_exact: bool = True) -> complex:
        """Unwind Phi_k at z = (r, phi) with 0 <= phi <= 2^K pi, r < t_(k(phi))."""
        k = sector_index_point(z)
        if k > self.K:
            raise OutsideExtensionDomain(f"arg {z.phi:.3f} needs level {k} > built {self.K}")
        if z.r >= self.levels[k].t:
            raise OutsideExtensionDomain(f"|z| = {z.r:.3e} >= t_{k} = {self.levels[k].t:.3e}")
        return self._unwind(z, k, use_exact)

    def _unwind(self, z: LPoint, k: int, use_exact: bool) -> complex:
        if k == 0:
            return self.germ.at(z)
        from .surface import reflect_tau, in_Tp

        if not in_Tp(k, z):
            return self._unwind(z, k - 1, use_exact)
        back = reflect_tau(k - 1, z)
        w = self._unwind(back, k - 1, use_exact)
        chi = self.levels[k - 1].chi
        require_in_disk(w, self.levels[k - 1].r / 8.0, f"chi_{k - 1} argument")
        val = chi(w) if (use_exact and chi.exact is not None) else chi.via_series(w)
        return complex(val).conjugate()


def build_tower(germ: MapGerm, K: int, order: int = DEFAULT_ORDER, r_bar: float | None = None) -> ReflectionTower:
    """Build the reflection ladder to depth K for a boundary-matched germ.

    The arcs are renormalized to unimodular derivative in-place (chart z ->
    phi(z / |phi'(0)|)); r0 is the largest admissible seed radius: at most
    r_bar (<= 1) and small enough that t_0 = (r0/(16E))^(1/alpha) <= t_bar.
    """
    alpha = germ.alpha_value
    E = germ.growth
    arc1 = _normalize_chart(germ.arc1)
    arc2 = _normalize_chart(germ.arc2)
    if r_bar is None:
        r_bar = min(1.0, arc1.radius, arc2.radius)
    if not (germ.t_bar > 0):
        raise GermTooSmall("germ has empty radius of validity")
    r0 = min(r_bar, 16.0 * E * germ.t_bar**alpha)
    if r0 <= 0:
        raise GermTooSmall("no admissible seed radius r0")

    levels = []
    phi_k = arc2
    r_k = r0
    for k in range(K + 1):
        E_k = E * 4.0**k
        t_k = (r_k / (16.0 * E_k)) ** (1.0 / alpha)
        s_k = min(t_k, E_k ** (-2.0 / alpha))
        chi_k = build_chi(phi_k, r_k, order=order)
        levels.append(TowerLevel(k, r_k, E_k, t_k, s_k, phi_k, chi_k))
        if k < K:
            r_next = r_k / 32.0
            phi_next_series = chi_k.series.conjugated().compose(
                arc1.series.conjugated().rescaled(min(arc1.series.scale, r_next)), order=order
            )
            phi_next_series.radius = r_next
            exact = None
            if chi_k.exact is not None and arc1.exact is not None:
                chi_ex, a1_ex = chi_k.exact, arc1.exact

                def exact(z: complex, _c=chi_ex, _a=a1_ex) -> complex:
                    return complex(_c(complex(_a(complex(z).conjugate())))).conjugate()

            phi_k = AnalyticFunc(phi_next_series, exact=exact, label=f"phi_{k + 1}")
            r_k = r_next
    return ReflectionTower(germ=germ, levels=levels, r0=r0, alpha=alpha, order=order)


def _normalize_chart(arc: AnalyticFunc) -> AnalyticFunc:
    d0 = arc.deriv0()
    lam = abs(d0)
    if abs(lam - 1.0) <= 1e-14:
        return arc
    if lam == 0:
        raise NormalizationError("arc chart is singular at 0")
    ser = arc.series
    scaled = PowerSeries(ser.coeffs.copy(), ser.scale * lam, ser.radius * lam)
    exact = None
    if arc.exact is not None:
        inner = arc.exact
        exact = lambda z: inner(np.asarray(z, dtype=complex) / lam)
    return AnalyticFunc(scaled, exact=exact, label=arc.label + "-norm")


# -- two-sided extension -----------------------------------------------------------


@dataclass
class Extension:
    """Two-sided extension: positive tower plus mirrored twin."""

    positive: ReflectionTower
    negative: ReflectionTower

    @property
    def alpha(self) -> float:
        return self.positive.alpha

    def evaluate(self, z: LPoint, use_exact: bool = True) -> complex:
        if z._phi_cmp_pi(0) >= 0:
            return self.positive.evaluate(z, use_exact)
        mirrored = LPoint(z.r, phi_pi=1 - z.phi_pi, phi_rem=-z.phi_rem)
        return self.negative.evaluate(mirrored, use_exact).conjugate()

    def max_level_needed(self, phi: float) -> int:
        from .surface import sector_index

        return sector_index(phi if phi >= 0 else math.pi - phi)


def build_extension(germ: MapGerm, K: int, order: int = DEFAULT_ORDER) -> Extension:
    return Extension(build_tower(germ, K, order), build_tower(germ.mirrored(), K, order))


def evaluate_extension(ext, z: LPoint, use_exact: bool = True) -> complex:
    if isinstance(ext, ReflectionTower):
        return ext.evaluate(z, use_exact)
    return ext.evaluate(z, use_exact)


def validate_koebe(tower: ReflectionTower, n_angles: int = 16, tol: float = 1e-9) -> dict:
    """Sampling validation of the univalent-chart bounds behind every level.

    For each stored chart phi_k on B(0, r_k): the inverse must reach the
    quarter disk of the image and |phi_k(z)| <= 4|z| must hold on the half
    disk; the reflector chi_k obeys the same growth on its half disk.
    Returns the worst measured ratios; raises nothing, callers assert.
    """
    import cmath

    worst_roundtrip = 0.0
    worst_growth = 0.0
    worst_chi_growth = 0.0
    for lv in tower.levels:
        ser = lv.phi.series
        d0 = abs(lv.phi.deriv0())
        rev = ser.reversion(order=tower.order, out_scale=d0 * lv.r / 4.0)
        for j in range(n_angles):
            w = 0.9 * d0 * lv.r / 4.0 * cmath.exp(2j * math.pi * j / n_angles)
            pre = ser.newton_inverse(w, z0=rev(w))
            worst_roundtrip = max(worst_roundtrip, abs(ser(pre) - w) / max(abs(w), 1e-300))
            z = 0.5 * lv.r * cmath.exp(2j * math.pi * j / n_angles)
            worst_growth = max(worst_growth, abs(complex(ser(z))) / (4.0 * abs(z)))
            zc = 0.5 * (lv.r / 8.0) * cmath.exp(2j * math.pi * j / n_angles)
            worst_chi_growth = max(worst_chi_growth, abs(complex(lv.chi.series(zc))) / (4.0 * abs(zc)))
    return {
        "inverse_roundtrip": worst_roundtrip,
        "growth_ratio": worst_growth,
        "chi_growth_ratio": worst_chi_growth,
        "passed": bool(worst_roundtrip < tol and worst_growth <= 1.0 + tol and worst_chi_growth <= 1.0 + tol),
    }


# -- certification -------------------------------------------------------------------


@dataclass
class CertifiedExtension:
    extension: object  # Extension | ReflectionTower
    quad: QuadraticDomain
    K_growth: float
    rate: float  # exact level ratio t_k / t_(k+1) = 128^(1/alpha)

    def report(self) -> dict:
        tower = self.extension.positive if isinstance(self.extension, Extension) else self.extension
        E = tower.germ.growth
        checks = {
            "r_ladder_exact": all(
                tower.levels[k].r * 32.0 == tower.levels[k - 1].r for k in range(1, tower.K + 1)
            ),
            "E_ladder_exact": all(lv.E == E * 4.0**lv.k for lv in tower.levels),
            "t_from_ladder_exact": all(
                lv.t == (lv.r / (16.0 * lv.E)) ** (1.0 / tower.alpha) for lv in tower.levels
            ),
            "t_above_growth_bound": all(
                tower.levels[k].t >= self.K_growth ** (-k) * (1 - 1e-12) for k in range(1, tower.K + 1)
            ),
        }
        return {
            "levels": [
                {"k": lv.k, "r_k": lv.r, "E_k": lv.E, "t_k": lv.t, "s_k": lv.s}
                for lv in tower.levels
            ],
            "quad": self.quad.to_json(),
            "K_growth": self.K_growth,
            "level_ratio": self.rate,
            "checks": checks,
        }


def certify_quadratic_domain(ext, safety: float = 1.0 - 1e-12, k_horizon: int = 400) -> CertifiedExtension:
    """Constants (c, C) with {r < c exp(-C sqrt|phi|)} inside the sector-ball union.

    The ladder is exact (t_k = t_0 * 128^(-k/alpha)), so the containment is
    checked against the closed-form schedule for every k, not only the built
    levels; evaluation remains limited to |phi| <= 2^K pi of the built tower.
    """
    pos = ext.positive if isinstance(ext, Extension) else ext
    neg = ext.negative if isinstance(ext, Extension) else ext
    alpha = pos.alpha
    rate = 128.0 ** (1.0 / alpha)

    t0_pos, t0_neg = pos.levels[0].t, neg.levels[0].t
    t1_neg = t0_neg / rate
    c = min(t0_pos, t1_neg) * safety
    log_rate = math.log(rate)

    C = 1e-9
    for k in range(1, k_horizon + 1):
        # positive side: phi in [2^(k-1) pi, 2^k pi] needs c e^(-C sqrt(2^(k-1) pi)) <= t_k,
        # with the exact schedule t_k = t_0 rate^(-k) (in logs to dodge underflow)
        need = (math.log(c / t0_pos) + k * log_rate) / math.sqrt(2 ** (k - 1) * math.pi)
        C = max(C, need)
        # negative side: |phi| in [(2^(k-1) - 1) pi, ...] maps to level k of the twin
        if k >= 2:
            need = (math.log(c / t0_neg) + k * log_rate) / math.sqrt((2 ** (k - 1) - 1) * math.pi)
            C = max(C, need)
    K_growth = rate
    for k in range(1, pos.K + 1):
        K_growth = max(K_growth, pos.levels[k].t ** (-1.0 / k))
    quad = QuadraticDomain(c, C, mirrored=isinstance(ext, Extension))
    return CertifiedExtension(ext, quad, K_growth, rate)


def sample_quadratic_domain(quad: QuadraticDomain, n: int, seed: int, max_abs_arg: float, r_frac=(0.05, 0.95)):
    """Deterministic member sample of the quadratic domain up to |arg| <= cap."""
    rng = np.random.default_rng(seed)
    phis = rng.uniform(-max_abs_arg if quad.mirrored else 0.0, max_abs_arg, size=n)
    fracs = rng.uniform(r_frac[0], r_frac[1], size=n)
    pts = []
    for phi, u in zip(phis, fracs):
        pts.append(LPoint(u * quad.radius_at(phi), phi))
    return pts
