"""Geometry of the Riemann surface of the logarithm.

Points are (r, phi) with r > 0 and unbounded real argument phi.  To keep
sector membership and the dyadic reflections exact on the rays where they are
decided, arguments are stored as an exact rational multiple of pi plus a float
remainder: phi = phi_pi * pi + phi_rem.  The reflections and sector tests only
ever touch the exact part.

Sectors follow the dyadic ladder: T_k = {0 <= phi <= 2^k pi}, and for k >= 1
T'_k = {2^(k-1) pi <= phi <= 2^k pi}.  The reflection tau_k maps T'_(k+1) onto
T_k by phi -> -phi + 2^(k+1) pi, fixing the ray phi = 2^k pi.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction

from .errors import OutOfSector, ProjectionError


class LPoint:
    """Point (r, phi) on the log surface; phi = phi_pi*pi + phi_rem exactly."""

    __slots__ = ("r", "phi_pi", "phi_rem")

    def __init__(self, r: float, phi=None, *, phi_pi=None, phi_rem=0.0):
        r = float(r)
        if not r > 0:
            raise ValueError("log-surface points need r > 0")
        self.r = r
        if phi_pi is not None:
            self.phi_pi = Fraction(phi_pi)
            self.phi_rem = float(phi_rem)
        else:
            self.phi_pi = Fraction(0)
            self.phi_rem = float(phi)

    @classmethod
    def from_pi_multiple(cls, r: float, phi_pi) -> "LPoint":
        return cls(r, phi_pi=Fraction(phi_pi))

    @property
    def phi(self) -> float:
        return float(self.phi_pi) * math.pi + self.phi_rem

    def log(self) -> complex:
        return complex(math.log(self.r), self.phi)

    def conj(self) -> "LPoint":
        return LPoint(self.r, phi_pi=-self.phi_pi, phi_rem=-self.phi_rem)

    def __repr__(self):
        if self.phi_rem == 0.0:
            return f"LPoint(r={self.r!r}, phi={self.phi_pi}*pi)"
        return f"LPoint(r={self.r!r}, phi={self.phi_pi}*pi + {self.phi_rem!r})"

    def to_json(self) -> dict:
        return {"r": self.r, "arg": self.phi}

    def __eq__(self, other):
        return (
            isinstance(other, LPoint)
            and self.r == other.r
            and self.phi_pi == other.phi_pi
            and self.phi_rem == other.phi_rem
        )

    # exact comparison of phi against q*pi, resolving ties by the remainder
    def _phi_cmp_pi(self, q: Fraction) -> int:
        d = self.phi_pi - q
        if d == 0:
            return (self.phi_rem > 0) - (self.phi_rem < 0)
        approx = float(d) * math.pi + self.phi_rem
        if approx > 0:
            return 1
        if approx < 0:
            return -1
        return 0


def log_L(z: LPoint) -> complex:
    """log(r, phi) = ln r + i phi; branches stay separated."""
    return z.log()


def pow_L(z: LPoint, alpha: float) -> complex:
    """z^alpha = exp(alpha log z) as a complex value."""
    return cmath.exp(float(alpha) * z.log())


def pow_map(z: LPoint, rho) -> LPoint:
    """p^rho(r, phi) = (r^rho, rho*phi), staying on the surface."""
    rho_f = Fraction(rho) if isinstance(rho, (int, Fraction)) else None
    if rho_f is not None:
        return LPoint(z.r ** float(rho_f), phi_pi=z.phi_pi * rho_f, phi_rem=z.phi_rem * float(rho_f))
    rho = float(rho)
    return LPoint(z.r**rho, z.phi * rho)


def mul_map(z1: LPoint, z2: LPoint) -> LPoint:
    """m((r1,phi1),(r2,phi2)) = (r1 r2, phi1 + phi2)."""
    return LPoint(z1.r * z2.r, phi_pi=z1.phi_pi + z2.phi_pi, phi_rem=z1.phi_rem + z2.phi_rem)


def embed(w: complex) -> LPoint:
    """Identify C minus the closed negative reals with (0,inf) x (-pi, pi)."""
    w = complex(w)
    if w == 0 or (w.imag == 0 and w.real < 0):
        raise ProjectionError("embedding requires a point off the closed negative real axis")
    if w.imag == 0:
        return LPoint(w.real, phi_pi=0)
    if w.real == 0:
        return LPoint(abs(w.imag), phi_pi=Fraction(1, 2) if w.imag > 0 else Fraction(-1, 2))
    return LPoint(abs(w), cmath.phase(w))


def project(z: LPoint) -> complex:
    """Back to the slit plane; errors when |phi| >= pi."""
    if z._phi_cmp_pi(Fraction(1)) >= 0 or z._phi_cmp_pi(Fraction(-1)) <= 0:
        raise ProjectionError(f"|arg| >= pi: {z!r}")
    return cmath.rect(z.r, z.phi)


# -- sectors ---------------------------------------------------------------------


class Sector:
    """T_k (kind 'T') or T'_k (kind 'Tp') of the dyadic ladder."""

    __slots__ = ("kind", "k")

    def __init__(self, kind: str, k: int):
        if kind not in ("T", "Tp"):
            raise ValueError("kind must be 'T' or 'Tp'")
        if k < 0 or (kind == "Tp" and k < 1):
            raise ValueError("T_k needs k >= 0; T'_k needs k >= 1")
        self.kind = kind
        self.k = int(k)

    def contains(self, z: LPoint) -> bool:
        hi = Fraction(2**self.k)
        if self.kind == "T":
            return z._phi_cmp_pi(Fraction(0)) >= 0 and z._phi_cmp_pi(hi) <= 0
        lo = Fraction(2 ** (self.k - 1))
        return z._phi_cmp_pi(lo) >= 0 and z._phi_cmp_pi(hi) <= 0

    def __repr__(self):
        tag = "T" if self.kind == "T" else "T'"
        return f"{tag}_{self.k}"


def in_T(k: int, z: LPoint) -> bool:
    return Sector("T", k).contains(z)


def in_Tp(k: int, z: LPoint) -> bool:
    return Sector("Tp", k).contains(z)


def sector_index(phi: float) -> int:
    """Smallest k with phi <= 2^k pi (for phi >= 0)."""
    if phi <= math.pi:
        return 0
    return max(1, math.ceil(math.log2(phi / math.pi - 1e-15)))


def sector_index_point(z: LPoint, k_max: int = 64) -> int:
    """Exact sector index from the pi-multiple representation."""
    k = 0
    while k <= k_max and z._phi_cmp_pi(Fraction(2**k)) > 0:
        k += 1
    return k


def reflect_tau(k: int, z: LPoint) -> LPoint:
    """tau_k: T'_(k+1) -> T_k, (r, phi) -> (r, -phi + 2^(k+1) pi)."""
    if not in_Tp(k + 1, z):
        raise OutOfSector(f"{z!r} is not in T'_{k + 1}")
    return LPoint(z.r, phi_pi=Fraction(2 ** (k + 1)) - z.phi_pi, phi_rem=-z.phi_rem)


def tau_log_identity(k: int, z: LPoint) -> tuple[complex, complex]:
    """Both sides of conj(log o tau_k) = log - i 2^(k+1) pi at z."""
    lhs = log_L(reflect_tau(k, z)).conjugate()
    rhs = log_L(z) - 1j * (2 ** (k + 1)) * math.pi
    return lhs, rhs


def tau_pow_identity(k: int, alpha: float, z: LPoint) -> tuple[complex, complex]:
    """Both sides of conj(z^alpha o tau_k) = exp(-i alpha 2^(k+1) pi) z^alpha."""
    lhs = pow_L(reflect_tau(k, z), alpha).conjugate()
    rhs = cmath.exp(-1j * alpha * (2 ** (k + 1)) * math.pi) * pow_L(z, alpha)
    return lhs, rhs


# -- quadratic domains -------------------------------------------------------------


class QuadraticDomain:
    """Region 0 < r < c * exp(-C sqrt(|phi|)); `mirrored` includes phi < 0."""

    __slots__ = ("c", "C", "mirrored")

    def __init__(self, c: float, C: float, mirrored: bool = True):
        if not (c > 0 and C > 0):
            raise ValueError("quadratic domain needs c, C > 0")
        self.c = float(c)
        self.C = float(C)
        self.mirrored = bool(mirrored)

    def radius_at(self, phi: float) -> float:
        return self.c * math.exp(-self.C * math.sqrt(abs(phi)))

    def contains(self, z: LPoint) -> bool:
        phi = z.phi
        if phi < 0 and not self.mirrored:
            return False
        return 0 < z.r < self.radius_at(phi)

    def max_arg_at(self, r: float) -> float:
        """Largest |phi| admitted at radius r (0 if r >= c)."""
        if r >= self.c:
            return 0.0
        return (math.log(self.c / r) / self.C) ** 2

    def to_json(self) -> dict:
        return {"c": self.c, "C": self.C, "mirrored": self.mirrored}

    def __repr__(self):
        return f"QuadraticDomain(c={self.c!r}, C={self.C!r}, mirrored={self.mirrored})"


def quad_contains(w: QuadraticDomain, z: LPoint) -> bool:
    return w.contains(z)


def quad_intersect(w1: QuadraticDomain, w2: QuadraticDomain) -> QuadraticDomain:
    return QuadraticDomain(
        min(w1.c, w2.c), max(w1.C, w2.C), mirrored=w1.mirrored and w2.mirrored
    )


# -- vectorized helpers (bulk identity checks; plain float arguments) ----------------


def tau_arg_array(k: int, phi):
    """Vectorized tau_k on argument arrays (no sector checking)."""
    return -phi + (2 ** (k + 1)) * math.pi
