"""Analytics on the complex roots of a Weil polynomial.

Root angles come from mpmath at a requested number of digits.  The density
simulation reduces n * theta mod 2 pi with a split-mantissa trick, so no drift
accumulates up to n ~ 10^7.  Discriminants are exact integers from
resultants and never see a float.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import log

import mpmath
import numpy as np

from . import intpoly
from .honda_tate import WeilPolynomialRecord


@dataclass
class WeilRootProfile:
    record: WeilPolynomialRecord
    roots: list      # one mpc per conjugate pair, upper half plane (or real)
    angles: list     # mpf in [0, pi]
    precision: int
    degenerate: bool = False  # repeated roots

    @property
    def g(self):
        return self.record.g

    @property
    def q(self):
        return self.record.q


def weil_root_profile(record: WeilPolynomialRecord, precision: int = 30) -> WeilRootProfile:
    """Roots alpha_j = sqrt(q) e^{i theta_j} with theta_j = arccos(x_j / 2 sqrt q).

    x_j are the roots of the real polynomial, so the conjugate pairing is exact.
    Repeated roots set ``degenerate``.
    """
    h = record.real_polynomial
    full = list(record.coeffs)
    degenerate = intpoly.degree(intpoly.squarefree_part(full)) < intpoly.degree(full)
    with mpmath.workdps(precision + 10):
        sq = mpmath.sqrt(record.q)
        xs = mpmath.polyroots(h, maxsteps=200, extraprec=4 * precision) if len(h) > 2 \
            else [mpmath.mpf(-h[1]) / h[0]]
        xs = sorted((mpmath.re(x) for x in xs), reverse=True)
        angles, roots = [], []
        for x in xs:
            c = x / (2 * sq)
            c = max(min(c, mpmath.mpf(1)), mpmath.mpf(-1))
            th = mpmath.acos(c)
            angles.append(th)
            roots.append(sq * mpmath.expj(th))
    return WeilRootProfile(record, roots, angles, precision, degenerate)


# --- angle relations --------------------------------------------------------

@dataclass
class IndependenceVerdict:
    independent: bool
    witness: tuple | None  # (m0, m1, ..., mg) with m0 2pi + sum m_j theta_j ~ 0
    residual: float | None
    bound: int
    tolerance: float

    @property
    def label(self):
        return "independent-up-to-bound" if self.independent else "relation-found"


def multiplicative_independence_heuristic(profile: WeilRootProfile, coeff_bound=20,
                                          tolerance=1e-9) -> IndependenceVerdict:
    """Scan integer vectors with entries in [-B, B] for an angle relation.

    A hit proves dependence only up to the tolerance; a miss proves nothing.
    """
    if coeff_bound < 1:
        raise ValueError("coeff_bound must be >= 1")
    g = len(profile.angles)
    with mpmath.workdps(profile.precision + 10):
        th = [profile.angles[j] for j in range(g)]
        two_pi = 2 * mpmath.pi
        rng = np.arange(-coeff_bound, coeff_bound + 1)
        # sum of the theta part over the grid, in float; candidates re-checked in mp
        grid = np.zeros(1)
        for t in th:
            grid = (grid[:, None] + rng[None, :] * float(t)).ravel()
        best = None
        for m0 in range(-coeff_bound, coeff_bound + 1):
            vals = np.abs(grid + m0 * float(two_pi))
            for flat in np.flatnonzero(vals < max(tolerance, 1e-6)):
                ms = np.unravel_index(flat, (len(rng),) * g)
                vec = (m0,) + tuple(int(rng[i]) for i in ms)
                if not any(vec[1:]):
                    continue
                exact = abs(m0 * two_pi + mpmath.fsum(m * t for m, t in zip(vec[1:], th)))
                if exact < tolerance:
                    cand = (sum(abs(v) for v in vec), vec, float(exact))
                    if best is None or cand < best:
                        best = cand
    if best is None:
        return IndependenceVerdict(True, None, None, coeff_bound, tolerance)
    return IndependenceVerdict(False, best[1], best[2], coeff_bound, tolerance)


# --- positivity density -----------------------------------------------------

def _split_turns(theta, bits=30):
    """theta / 2pi as hi + lo with hi carrying `bits` bits, so n * hi is exact."""
    with mpmath.workdps(60):
        t = mpmath.mpf(theta) / (2 * mpmath.pi)
        hi = mpmath.floor(t * 2**bits) / 2**bits
        return float(hi), float(t - hi)


def reduced_phases(theta, n):
    """n * theta mod 2pi for an integer array n (n < 2^23 keeps n * hi exact)."""
    hi, lo = _split_turns(theta)
    n = np.asarray(n, dtype=np.float64)
    frac = np.mod(n * hi, 1.0) + n * lo
    return 2 * np.pi * np.mod(frac, 1.0)


def positivity_indicator(angles, n):
    """Boolean array: sin(n t_j) prod_{k != j}(cos n t_j - cos n t_k) > 0 for all j."""
    phases = [reduced_phases(t, n) for t in angles]
    s = [np.sin(ph) for ph in phases]
    c = [np.cos(ph) for ph in phases]
    ok = np.ones(len(n), dtype=bool)
    for j in range(len(angles)):
        val = s[j].copy()
        for k in range(len(angles)):
            if k != j:
                val *= c[j] - c[k]
        ok &= val > 0
    return ok


@dataclass
class DensityReport:
    density: float
    n_max: int
    g: int
    target: float
    degenerate: bool
    flipped_density: float  # same inequality with the sign reversed in every j
    relation: tuple | None

    def as_dict(self):
        return dict(density=self.density, n_max=self.n_max, g=self.g, target=self.target,
                    degenerate=self.degenerate, flipped_density=self.flipped_density,
                    relation=list(self.relation) if self.relation else None)


def positivity_density(profile: WeilRootProfile, n_max: int = 100_000,
                       relation_bound: int = 12) -> DensityReport:
    """Fraction of 1 <= n <= n_max satisfying the positivity inequalities.

    Profiles with a small angle relation (for instance theta = pi/2) are flagged
    degenerate; their density need not be 2^-g.
    """
    n = np.arange(1, n_max + 1)
    ok = positivity_indicator(profile.angles, n)
    flipped = positivity_indicator([-t for t in profile.angles], n)
    verdict = multiplicative_independence_heuristic(profile, relation_bound, 1e-9)
    g = len(profile.angles)
    return DensityReport(float(ok.mean()), n_max, g, 2.0**-g,
                         profile.degenerate or not verdict.independent,
                         float(flipped.mean()), verdict.witness)


# --- discriminants ----------------------------------------------------------

@dataclass
class DiscriminantReport:
    n: int
    disc_Rprime: int
    disc_Rplus: int
    ratio_exponent: float        # log|disc_Rprime / disc_Rplus| / log q^n
    order_exponent: float        # after removing q^{n g (g-1)}: compare with g(g+1)/2
    target_exponent: float
    unit_circle_factor: float    # |prod_{j<k<=2g} (e^{i n t_j} - e^{i n t_k})|
    unit_circle_bound: int       # 2^{g(2g-1)}
    polar_Rprime: float | None = None
    polar_Rplus: float | None = None

    def as_dict(self):
        return {k: (str(v) if isinstance(v, int) and abs(v) > 2**53 else v)
                for k, v in self.__dict__.items()}

    @property
    def relerr_Rprime(self):
        return abs(self.polar_Rprime - self.disc_Rprime) / abs(self.disc_Rprime)

    @property
    def relerr_Rplus(self):
        if self.disc_Rplus == 1 and self.polar_Rplus is not None:
            return abs(self.polar_Rplus - 1)
        return abs(self.polar_Rplus - self.disc_Rplus) / abs(self.disc_Rplus)


class DegenerateError(ValueError):
    pass


def frobenius_power_polynomials(record: WeilPolynomialRecord, n: int):
    """(char poly of alpha^n, char poly of alpha^n + q^n / alpha^n), exact."""
    Pn = intpoly.root_power_polynomial(list(record.coeffs), n)
    hn = intpoly.real_weil_part(Pn, record.q**n)
    return Pn, hn


def _disc_or_one(f):
    return 1 if intpoly.degree(f) < 2 else intpoly.discriminant(f)


def polar_discriminants(profile: WeilRootProfile, n: int):
    """Both discriminants from the polar product formulas, plus the unit-circle term."""
    g = len(profile.angles)
    q = profile.q
    with mpmath.workdps(profile.precision + 10):
        th = [mpmath.mpf(t) for t in profile.angles]
        full = th + [-t for t in th]
        unit = mpmath.mpf(1)
        Dp = mpmath.mpc(1)
        for j, k in itertools.combinations(range(2 * g), 2):
            d = mpmath.expj(n * full[j]) - mpmath.expj(n * full[k])
            unit *= abs(d)
            Dp *= mpmath.power(q, n) * d * d
        Dplus = mpmath.mpf(1)
        for j, k in itertools.combinations(range(g), 2):
            Dplus *= 4 * mpmath.power(q, n) * (mpmath.cos(n * th[j]) - mpmath.cos(n * th[k])) ** 2
        return float(mpmath.re(Dp)), float(Dplus), float(unit)


def discriminant_report(record: WeilPolynomialRecord, n: int, profile: WeilRootProfile | None = None):
    if not record.ordinary:
        raise ValueError("discriminant report needs an ordinary record")
    Pn, hn = frobenius_power_polynomials(record, n)
    dR = intpoly.discriminant(Pn)
    dplus = _disc_or_one(hn)
    if dR == 0 or dplus == 0:
        raise DegenerateError(f"alpha^{n} has repeated conjugates")
    g = record.g
    Q = record.q**n
    ratio = (log(abs(dR)) - log(abs(dplus))) / log(Q)
    if profile is None:
        profile = weil_root_profile(record, 40)
    polar_p, polar_plus, unit = polar_discriminants(profile, n)
    return DiscriminantReport(
        n=n, disc_Rprime=dR, disc_Rplus=dplus, ratio_exponent=ratio,
        order_exponent=ratio - g * (g - 1), target_exponent=g * (g + 1) / 2,
        unit_circle_factor=unit, unit_circle_bound=2 ** (g * (2 * g - 1)),
        polar_Rprime=polar_p, polar_Rplus=polar_plus)
