"""Archimedean side: lattice periods, torsion log-sums, invariant integrals.

For y^2 = P(x) over the reals, the holomorphic differential dx/(2y) has a
period lattice L with a real generator omega1.  Writing x(z) = wp(z; L) - a/3
identifies the complex points with C/L, carrying Haar measure.  This module
computes:

  * the lattice (AGM for the period magnitudes, verified by evaluating wp at
    the half-periods, which must reproduce the roots of P);
  * torsion log-sums S_n = (1/n^2) * sum log|P(beta)| over the roots of the
    n-torsion x-polynomial, by two independent routes (high-precision
    simultaneous root iteration, and the exact resultant identity);
  * the invariant-measure integral of log|P| (probability Haar average over a
    fundamental parallelogram), on a seeded uniform grid;
  * the global assembly report comparing S_n against (1/2) log|disc P| with
    the exact integer factorization of each resultant.

Numerical design notes.  The wp evaluation uses the cosecant-squared series
in an SL(2,Z)-reduced basis, where |q| <= exp(-pi*sqrt(3)) makes a handful
of terms give full double accuracy.  Root finding is a two-phase Aberth
iteration: a float64 sweep (convex-hull initial radii, overflow-free
reversed-polynomial evaluation) followed by sweeps at adaptive mpmath
precision at least the coefficient bit-span, because torsion polynomials
have coefficient spans of hundreds of bits and clustered roots whose
positions are not determined by 53-bit roundings of the coefficients.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Sequence

import mpmath as mp
import numpy as np
from scipy.integrate import quad

from .curves import ADDITIVE, Curve, reduction_type
from .exact import log_abs, small_primes
from .torsion import (
    DEFAULT_FULL_LIMIT,
    psi_content,
    psi_mod_cubic,
    torsion_x_polynomial,
)

# Degree cap for the root-finding path of torsion sums; (51^2 - 1)/2.
ROOT_PATH_MAX_DEGREE = 1300
# Residual acceptance for root finding: |h(beta)| / sum_j |c_j| |beta|^j.
ROOT_RESIDUAL_TOL = 1e-12
# Agreement required between the root path and the exact resultant path.
PATH_AGREEMENT_TOL = 1e-6
# Relative tolerance for wp(half-period) == root verification.
VERIFICATION_TOL = 1e-9
# Relative radius of the exclusion disks around the integrand singularities.
EXCLUSION_RADIUS = 1e-3

TRIAL_FACTOR_BOUND = 10**5


class NumericError(RuntimeError):
    """A floating-point stage failed its acceptance check (with diagnostics)."""


# ---------------------------------------------------------------------------
# complex AGM (optimal branch)


def agm(a: complex, b: complex, tol: float = 1e-15, max_iter: int = 200) -> complex:
    """Arithmetic-geometric mean, choosing the square-root branch with
    |a1 - b1| <= |a1 + b1| (ties toward Im(b1/a1) >= 0) at every step."""
    a = complex(a)
    b = complex(b)
    if a == 0 or b == 0:
        return 0.0
    for _ in range(max_iter):
        if abs(a - b) <= tol * max(abs(a), 1e-300):
            return (a + b) / 2
        a1 = (a + b) / 2
        b1 = cmath.sqrt(a * b)
        if abs(a1 - b1) > abs(a1 + b1) or (
            abs(abs(a1 - b1) - abs(a1 + b1)) < 1e-14 * abs(a1)
            and (b1 / a1).imag < 0
        ):
            b1 = -b1
        a, b = a1, b1
    raise NumericError(f"AGM did not converge for ({a!r}, {b!r})")


def cubic_roots(curve: Curve) -> np.ndarray:
    """The three complex roots of P, eigenvalue-based then Newton-polished."""
    a, b, c = curve.a, curve.b, curve.c
    rts = np.roots([1.0, a, b, c]).astype(np.complex128)
    for _ in range(4):
        fp = 3 * rts**2 + 2 * a * rts + b
        fp = np.where(fp == 0, 1.0, fp)
        rts = rts - (rts**3 + a * rts**2 + b * rts + c) / fp
    # enforce exact conjugate symmetry / realness within float tolerance
    scale = max(1.0, float(np.abs(rts).max()))
    rts = np.where(np.abs(rts.imag) <= 1e-9 * scale, rts.real + 0j, rts)
    return rts


# ---------------------------------------------------------------------------
# lattice reduction and Weierstrass-P evaluation


def _reduce_basis(w1: complex, w2: complex) -> tuple[complex, complex]:
    """Generators of the same lattice with w2/w1 in the fundamental domain."""
    if (w2 / w1).imag < 0:
        w2 = -w2
    for _ in range(200):
        tau = w2 / w1
        shift = math.floor(tau.real + 0.5)
        if shift != 0:
            w2 = w2 - shift * w1
            tau = w2 / w1
        if abs(tau) < 1.0 - 1e-15:
            w1, w2 = w2, -w1
        else:
            break
    else:
        raise NumericError(f"basis reduction stalled for ({w1!r}, {w2!r})")
    return w1, w2


def _eisenstein_e2(tau: complex, terms: int = 60) -> complex:
    """E2(tau) = 1 - 24 sum sigma_1(m) q^m, q = exp(2 pi i tau)."""
    q = cmath.exp(2j * math.pi * tau)
    total = 0j
    qm = 1 + 0j
    for m in range(1, terms + 1):
        qm *= q
        sigma = 0
        for d in range(1, int(math.isqrt(m)) + 1):
            if m % d == 0:
                sigma += d
                if d * d != m:
                    sigma += m // d
        total += sigma * qm
    return 1.0 - 24.0 * total


class Lattice:
    """A period lattice with a reduced basis and vectorized wp evaluation."""

    __slots__ = ("w1", "w2", "r1", "r2", "tau", "e2", "_minv")

    def __init__(self, w1: complex, w2: complex):
        if (w2 / w1).imag == 0:
            raise ValueError("degenerate basis: generators are R-collinear")
        self.w1 = complex(w1)
        self.w2 = complex(w2)
        self.r1, self.r2 = _reduce_basis(self.w1, self.w2)
        self.tau = self.r2 / self.r1
        self.e2 = _eisenstein_e2(self.tau)
        a11, a21 = self.r1.real, self.r1.imag
        a12, a22 = self.r2.real, self.r2.imag
        det = a11 * a22 - a12 * a21
        self._minv = (a22 / det, -a12 / det, -a21 / det, a11 / det)

    def coordinates(self, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Real coordinates of z in the reduced basis, folded into [0, 1)."""
        m11, m12, m21, m22 = self._minv
        x = m11 * np.real(z) + m12 * np.imag(z)
        y = m21 * np.real(z) + m22 * np.imag(z)
        return x - np.floor(x), y - np.floor(y)

    def wp(self, z, nmax: int = 10) -> np.ndarray:
        """Weierstrass wp via the cosecant-squared series in the reduced basis.

        wp(z) = (pi/r1)^2 * [ sum_n csc^2(pi (u + n tau)) - E2(tau)/3 ],
        with z = r1 * u; the reduced tau keeps |q| small enough that
        nmax = 10 delivers full double precision.
        """
        zz = np.asarray(z, dtype=np.complex128)
        x, y = self.coordinates(zz)
        u = x + y * self.tau
        out = np.full(u.shape, -self.e2 / 3.0, dtype=np.complex128)
        for n in range(-nmax, nmax + 1):
            out = out + 1.0 / np.sin(np.pi * (u + n * self.tau)) ** 2
        return (np.pi / self.r1) ** 2 * out

    def half_points(self) -> np.ndarray:
        """One representative of each nonzero 2-torsion class of C/L."""
        return np.array(
            [self.r1 / 2, self.r2 / 2, (self.r1 + self.r2) / 2],
            dtype=np.complex128,
        )


@dataclass(frozen=True)
class PeriodData:
    """Period lattice of dx/(2y) with its reduced shape invariant tau."""

    omega1: float
    omega2: complex
    tau: complex
    im_tau: float
    verification_error: float
    lattice: Lattice = field(repr=False, compare=False)

    def __post_init__(self):
        if self.im_tau <= 0:
            raise ValueError("Im(tau) must be positive")
        if abs(self.tau.real) > 0.5 + 1e-12 or abs(self.tau) < 1.0 - 1e-12:
            raise ValueError("tau must lie in the fundamental domain")


def _match_error(values: Sequence[complex], targets: Sequence[complex]) -> float:
    """Worst relative error of the best bijective matching (greedy on 3)."""
    scale = max(1.0, max(abs(t) for t in targets))
    remaining = list(targets)
    worst = 0.0
    for v in values:
        dists = [abs(v - t) for t in remaining]
        i = dists.index(min(dists))
        worst = max(worst, dists[i] / scale)
        remaining.pop(i)
    return worst


def periods(curve: Curve) -> PeriodData:
    """Period lattice of dx/(2y), self-verified through wp at half-periods.

    Three real roots e1 > e2 > e3 give the rectangular lattice
        omega1 = pi / AGM(sqrt(e1-e3), sqrt(e1-e2)),
        omega2 = i pi / AGM(sqrt(e1-e3), sqrt(e2-e3)).
    One real root e1 (complex pair m +- i mu) gives the rhombic lattice
        omega1 = pi / AGM(sqrt(e1 - (m + i mu)), sqrt(e1 - (m - i mu))),
        omega2 = omega1/2 + (i/2) * integral_{-inf}^{e1} dx / sqrt(|P|).
    The constructed lattice is accepted only if wp at the three half-period
    classes reproduces the roots of P to VERIFICATION_TOL (relative).
    """
    a = curve.a
    rts = cubic_roots(curve)
    n_real = int(np.sum(rts.imag == 0))
    if n_real == 3:
        e1, e2, e3 = sorted(rts.real.tolist(), reverse=True)
        w1 = math.pi / agm(math.sqrt(e1 - e3), math.sqrt(e1 - e2)).real
        w2 = 1j * math.pi / agm(math.sqrt(e1 - e3), math.sqrt(e2 - e3)).real
    else:
        e1 = float(rts[rts.imag == 0].real[0])
        ec = complex(rts[rts.imag > 0][0])
        m0, mu = ec.real, ec.imag
        w1 = (math.pi / agm(cmath.sqrt(e1 - ec), cmath.sqrt(e1 - ec.conjugate()))).real

        def integrand(t: float) -> float:
            return 2.0 / math.sqrt((e1 - m0 - t * t) ** 2 + mu * mu)

        peak = math.sqrt(e1 - m0) if e1 > m0 else 0.0
        if peak > 0:
            v1, _ = quad(integrand, 0.0, peak, epsabs=1e-12, epsrel=1e-12, limit=400)
            v2, _ = quad(integrand, peak, math.inf, epsabs=1e-12, epsrel=1e-12, limit=400)
            omega = v1 + v2
        else:
            omega, _ = quad(integrand, 0.0, math.inf, epsabs=1e-12, epsrel=1e-12, limit=400)
        w2 = w1 / 2 + 0.5j * omega
    lattice = Lattice(w1, w2)
    values = lattice.wp(lattice.half_points()) - a / 3.0
    worst = _match_error(values.tolist(), [complex(r) for r in rts])
    if worst > VERIFICATION_TOL:
        raise NumericError(
            "period verification failed: wp(half-periods) vs roots, worst "
            f"relative error {worst:.3e} for {curve} with basis "
            f"({w1!r}, {w2!r})"
        )
    tau = lattice.r2 / lattice.r1
    return PeriodData(
        omega1=float(w1),
        omega2=complex(w2),
        tau=tau,
        im_tau=tau.imag,
        verification_error=worst,
        lattice=lattice,
    )


# ---------------------------------------------------------------------------
# root finding: float64 Aberth sweep, then adaptive-precision sweeps


def _log2_abs(c: int) -> float:
    if c == 0:
        return -1e9
    c = abs(c)
    bits = c.bit_length()
    if bits > 64:
        return math.log2(c >> (bits - 64)) + (bits - 64)
    return math.log2(c)


def _float_scaled(c: int, shift: int) -> float:
    """float(c * 2^shift) without overflow, keeping the top 64 bits of c."""
    if c == 0:
        return 0.0
    neg = c < 0
    if neg:
        c = -c
    bits = c.bit_length()
    if bits > 64:
        m, e = c >> (bits - 64), bits - 64
    else:
        m, e = c, 0
    f = math.ldexp(float(m), e + shift)
    return -f if neg else f


def _hull_radii(coeffs: Sequence[int]) -> np.ndarray:
    """Per-root starting radii from the upper convex hull of (j, log2|c_j|)."""
    pts = [(j, _log2_abs(c)) for j, c in enumerate(coeffs) if c != 0]
    hull: list[tuple[int, float]] = []
    for p in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (p[0] - x2) <= (p[1] - y2) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(p)
    radii: list[float] = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        r = 2.0 ** ((y1 - y2) / (x2 - x1))
        radii += [r] * (x2 - x1)
    return np.array(radii)


def _eval_ratio(cr: np.ndarray, gr: np.ndarray, z: np.ndarray):
    """(w = f/f', relative residual) for all z, overflow-free.

    cr holds descending coefficients, gr the same ascending (the reversed
    polynomial).  |z| <= 1 uses direct Horner; |z| > 1 evaluates the
    reversed polynomial at u = 1/z, where f/f' = z g / (d g - u g')."""
    d = len(cr) - 1
    small = np.abs(z) <= 1.0
    w = np.empty_like(z)
    rr = np.empty(len(z), dtype=np.float64)
    if small.any():
        zs = z[small]
        f = np.zeros_like(zs)
        fp = np.zeros_like(zs)
        for cc in cr:
            fp = fp * zs + f
            f = f * zs + cc
        big = np.zeros(len(zs), dtype=np.float64)
        azs = np.abs(zs)
        for cc in np.abs(cr):
            big = big * azs + cc.real
        w[small] = f / np.where(fp == 0, 1, fp)
        rr[small] = np.abs(f) / np.maximum(big, 1e-300)
    if (~small).any():
        zb = z[~small]
        u = 1.0 / zb
        g = np.zeros_like(zb)
        gp = np.zeros_like(zb)
        for cc in gr:
            gp = gp * u + g
            g = g * u + cc
        big = np.zeros(len(zb), dtype=np.float64)
        au = np.abs(u)
        for cc in np.abs(gr):
            big = big * au + cc.real
        denom = d * g - u * gp
        w[~small] = zb * g / np.where(denom == 0, 1, denom)
        rr[~small] = np.abs(g) / np.maximum(big, 1e-300)
    return w, rr


def _float_aberth(coeffs: Sequence[int], max_iter: int = 300) -> np.ndarray:
    """Phase 1: simultaneous iteration entirely in float64."""
    top = max(c.bit_length() for c in coeffs if c)
    fs = [_float_scaled(c, -top) for c in coeffs]
    cr = np.array(fs[::-1], dtype=np.complex128)
    gr = np.array(fs, dtype=np.complex128)
    radii = _hull_radii(coeffs)
    ks = np.arange(len(radii))
    z = radii * np.exp(1j * (2 * np.pi * 0.6180339887498949 * ks + 0.4))
    for _ in range(max_iter):
        w, rr = _eval_ratio(cr, gr, z)
        done = rr <= 1e-13
        if done.all():
            break
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, np.inf)
        repulse = (1.0 / diff).sum(axis=1)
        corr = w / (1 - w * repulse)
        bad = ~np.isfinite(corr)
        corr = np.where(bad, 0.1 * (1 + np.abs(z)), corr)
        mag = np.abs(corr)
        lim = 0.5 * (1 + np.abs(z))
        corr = np.where(mag > lim, corr * (lim / np.maximum(mag, 1e-300)), corr)
        z = np.where(done, z, z - corr)
    return z


@dataclass(frozen=True)
class RootSet:
    """Certified roots: residual is |h(beta)| / sum_j |c_j||beta|^j, and
    min_separation the smallest pairwise distance relative to local scale."""

    roots: tuple[complex, ...]
    residual: float
    sweeps: int
    min_separation: float
    precision_bits: int


def polynomial_roots(
    coeffs: Sequence[int],
    residual_tol: float = ROOT_RESIDUAL_TOL,
    max_sweeps: int = 80,
) -> RootSet:
    """All complex roots of an integral polynomial (ascending coefficients).

    Two-phase Aberth iteration; the second phase runs at precision at least
    the coefficient bit-span plus guard bits, so the integers are exact and
    clustered roots converge beyond what any fixed-width float allows.
    Raises NumericError if the residual acceptance fails.
    """
    coeffs = [int(c) for c in coeffs]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    origin_roots = 0
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
        origin_roots += 1
    d = len(coeffs) - 1
    if d + origin_roots < 1:
        raise ValueError("polynomial must have positive degree")
    if d == 0:
        roots = (0j,) * origin_roots
        return RootSet(
            roots=roots,
            residual=0.0,
            sweeps=0,
            min_separation=math.inf if origin_roots < 2 else 0.0,
            precision_bits=53,
        )
    span = max(c.bit_length() for c in coeffs if c)
    prec = span + 96 + d.bit_length()
    z0 = _float_aberth(coeffs)
    cr = coeffs[::-1]
    with mp.workprec(prec):
        zs = [mp.mpc(complex(v)) for v in z0]
        conv = [False] * len(zs)
        tol = mp.mpf(2) ** (-max(90, prec // 2))
        sweeps = 0
        for _ in range(max_sweeps):
            sweeps += 1
            active = False
            for i, z in enumerate(zs):
                if conv[i]:
                    continue
                f = mp.mpc(0)
                fp = mp.mpc(0)
                for cc in cr:
                    fp = fp * z + f
                    f = f * z + cc
                if f == 0:
                    conv[i] = True
                    continue
                if fp == 0:
                    # exact critical point: nudge off it and retry next sweep
                    zs[i] = z + mp.mpf(2) ** (-prec // 3) * (1 + abs(z))
                    active = True
                    continue
                w = f / fp
                repulse = mp.mpc(0)
                for j, zj in enumerate(zs):
                    if j != i:
                        dz = z - zj
                        if dz != 0:
                            repulse += 1 / dz
                denom = 1 - w * repulse
                corr = w if denom == 0 else w / denom
                zs[i] = z - corr
                if abs(corr) / (1 + abs(z)) < tol:
                    conv[i] = True
                else:
                    active = True
            if not active:
                break
        worst = mp.mpf(0)
        for z in zs:
            f = mp.mpc(0)
            big = mp.mpf(0)
            az = abs(z)
            for cc in cr:
                f = f * z + cc
                big = big * az + abs(cc)
            worst = max(worst, abs(f) / big)
        roots = tuple(complex(z) for z in zs)
    if float(worst) > residual_tol:
        raise NumericError(
            f"root residual {float(worst):.3e} exceeds {residual_tol:.1e} "
            f"(degree {d}, span {span} bits, {sweeps} sweeps)"
        )
    roots = roots + (0j,) * origin_roots
    arr = np.array(roots)
    dist = np.abs(arr[:, None] - arr[None, :]) / (1 + np.abs(arr)[None, :])
    np.fill_diagonal(dist, np.inf)
    minsep = float(dist.min()) if len(roots) > 1 else math.inf
    if minsep == 0.0:
        raise NumericError("root iteration collapsed two roots onto one point")
    return RootSet(
        roots=roots,
        residual=float(worst),
        sweeps=sweeps,
        min_separation=minsep,
        precision_bits=prec,
    )


# ---------------------------------------------------------------------------
# torsion log-sums


@dataclass(frozen=True)
class ArchRecord:
    """Torsion log-sum at level n with its exact-path cross-check.

    sn is the root-finding value when the degree cap admits it, otherwise
    the exact value; res_log_check always holds the exact-path value
    (1/n^2)(log|Res(P, h_n)| - 3 log n)."""

    n: int
    sn: float
    res_log_check: float
    root_residual: float | None
    min_separation: float | None
    path_agreement: bool | None
    content_correction: float
    lead_correction: float
    integral_value: float | None = None

    def as_row(self) -> dict:
        return {
            "n": self.n,
            "Sn": self.sn,
            "resLogCheck": self.res_log_check,
            "rootResidual": self.root_residual,
            "pathAgreement": self.path_agreement,
        }


def _exact_torsion_logsum(curve: Curve, n: int) -> float:
    """(1/n^2)(log|Res(P, psi_n)| - 3 log n) via the cubic-quotient norm."""
    nrm = psi_mod_cubic(curve, n).norm()
    nrm_int = int(nrm)
    if nrm_int == 0:
        raise ArithmeticError("torsion divisor shares a root with P")
    return (log_abs(nrm_int) - 3.0 * math.log(n)) / (n * n)


def torsion_sum(
    curve: Curve,
    n: int,
    max_degree: int = ROOT_PATH_MAX_DEGREE,
) -> ArchRecord:
    """S_n by root finding and by the exact resultant identity.

    The root path sums log|P(beta)| over the (n^2-1)/2 roots of the
    n-torsion x-polynomial at working precision; the exact path uses
    sum log|P(beta)| = log|Res(P, h_n)| - 3 log lc(h_n) with lc = n.
    Both are stored and must agree to PATH_AGREEMENT_TOL; degrees above
    max_degree skip the root path and report the exact value alone.
    """
    if n < 3 or n % 2 == 0:
        raise ValueError("torsion sums are defined for odd n >= 3")
    exact_value = _exact_torsion_logsum(curve, n)
    content = psi_content(curve, n)
    lead_corr = 3.0 * math.log(n) / (n * n)
    content_corr = 3.0 * math.log(content) / (n * n) if content > 1 else 0.0
    degree = (n * n - 1) // 2
    if degree > max_degree:
        return ArchRecord(
            n=n,
            sn=exact_value,
            res_log_check=exact_value,
            root_residual=None,
            min_separation=None,
            path_agreement=None,
            content_correction=content_corr,
            lead_correction=lead_corr,
        )
    h = torsion_x_polynomial(curve, n, full_limit=max(n, DEFAULT_FULL_LIMIT)).h
    rootset = polynomial_roots(list(h.c))
    a, b, c = curve.a, curve.b, curve.c
    with mp.workprec(rootset.precision_bits):
        total = mp.mpf(0)
        for z in rootset.roots:
            zz = mp.mpc(z)
            total += mp.log(abs(((zz + a) * zz + b) * zz + c))
        sn = float(total) / (n * n)
    agree = abs(sn - exact_value) <= PATH_AGREEMENT_TOL * max(1.0, abs(sn))
    if not agree:
        raise NumericError(
            f"torsion-sum paths disagree at n={n}: roots {sn!r} vs exact "
            f"{exact_value!r} (residual {rootset.residual:.1e})"
        )
    return ArchRecord(
        n=n,
        sn=sn,
        res_log_check=exact_value,
        root_residual=rootset.residual,
        min_separation=rootset.min_separation,
        path_agreement=agree,
        content_correction=content_corr,
        lead_correction=lead_corr,
    )


# ---------------------------------------------------------------------------
# invariant-measure integral


@dataclass(frozen=True)
class MahlerResult:
    """Grid estimate of the Haar average of log|P(x(z))| over C/L."""

    value: float
    refine_delta: float
    grid: int
    samples_used: int
    excluded: int
    seed: int


def _grid_average(
    curve: Curve,
    lattice: Lattice,
    n_grid: int,
    seed: int,
) -> tuple[float, int, int]:
    rng = np.random.default_rng(seed)
    sx, sy = rng.random(2)
    r1, r2 = lattice.r1, lattice.r2
    scale = max(abs(r1), abs(r2))
    centers = [
        h + m * r1 + k * r2
        for h in (0.0, r1 / 2, r2 / 2, (r1 + r2) / 2)
        for m in (-1, 0, 1)
        for k in (-1, 0, 1)
    ]
    a, b, c = curve.a, curve.b, curve.c
    s_coords = ((np.arange(n_grid) + 0.5) / n_grid + sx) % 1.0
    t_coords = ((np.arange(n_grid) + 0.5) / n_grid + sy) % 1.0
    row_sums: list[float] = []
    used = 0
    for i in range(n_grid):
        z = s_coords[i] * r1 + t_coords * r2
        mask = np.zeros(n_grid, dtype=bool)
        for ctr in centers:
            mask |= np.abs(z - ctr) < EXCLUSION_RADIUS * scale
        x = lattice.wp(z) - a / 3.0
        vals = np.abs(((x + a) * x + b) * x + c)
        logs = np.log(np.where(mask, 1.0, vals))
        used += int((~mask).sum())
        row_sums.append(math.fsum(logs.tolist()))
    return math.fsum(row_sums) / used, used, n_grid * n_grid - used


def mahler_integral(
    curve: Curve,
    samples: int,
    seed: int = 0,
    basis: tuple[complex, complex] | None = None,
) -> MahlerResult:
    """Probability-Haar average of log|P(x(z))| over a period parallelogram.

    Deterministic for a fixed seed: a midpoint grid of ~samples points with
    a seeded uniform shift, skipping EXCLUSION_RADIUS-disks around the
    lattice point and the three half-period classes where the integrand has
    (integrable) logarithmic singularities.  Rows are accumulated with
    exact summation in a fixed order, so any partitioning reduces
    deterministically.  refine_delta reports the change against the
    half-resolution grid.
    """
    if samples < 10**4:
        raise ValueError("samples must be at least 10^4")
    lattice = periods(curve).lattice if basis is None else Lattice(*basis)
    n_grid = math.ceil(math.sqrt(samples))
    value, used, excluded = _grid_average(curve, lattice, n_grid, seed)
    coarse, _, _ = _grid_average(curve, lattice, max(2, n_grid // 2), seed)
    return MahlerResult(
        value=value,
        refine_delta=abs(value - coarse),
        grid=n_grid,
        samples_used=used,
        excluded=excluded,
        seed=seed,
    )


# ---------------------------------------------------------------------------
# global assembly


@dataclass(frozen=True)
class GlobalRow:
    """One level n of the global table, with the exact integer resultant
    factored over the bad primes and small primes (cofactor reported)."""

    n: int
    sn: float
    target: float
    abs_error: float
    res_decimal_digits: int
    factorization: tuple[tuple[int, int], ...]
    cofactor: int
    lead_correction: float
    content_correction: float

    def as_row(self) -> dict:
        return {
            "n": self.n,
            "Sn": self.sn,
            "target": self.target,
            "absError": self.abs_error,
            "resDecimalDigits": self.res_decimal_digits,
            "factorization": [[p, e] for p, e in self.factorization],
            "cofactor": self.cofactor,
        }


@dataclass(frozen=True)
class GlobalReport:
    curve: Curve
    target: float
    rows: tuple[GlobalRow, ...]
    warnings: tuple[str, ...]


def _trial_factor(value: int, primes: Sequence[int]) -> tuple[dict, int]:
    facs: dict[int, int] = {}
    rest = value
    for p in primes:
        if rest == 1:
            break
        e = 0
        while rest % p == 0:
            rest //= p
            e += 1
        if e:
            facs[p] = e
    return facs, rest


def global_check(
    curve: Curve, n_list: Sequence[int], verify_degree: int = 100
) -> GlobalReport:
    """Assemble the global identity table for odd levels n.

    Preconditions: every odd bad prime must be non-additive (the odd-
    valuation boundary case is admitted with its classification warning
    carried through); a cubic discriminant with positive 2-valuation is
    reported in the warnings, as dyadic contributions are outside the model.

    S_n itself is always the exact-arithmetic value; the independent
    root-finding cross-check inside torsion_sum runs only while the
    division-polynomial degree stays at most `verify_degree` (default: the
    cheap range n <= 13), so large levels do not pay for a verification
    that the small levels already pin down.

    Each row factors the exact integer |Res(P, psi_n)| by trial division
    over the bad primes, the prime divisors of n, and all primes up to
    TRIAL_FACTOR_BOUND; whatever remains is the cofactor, and the row is
    accepted only if the factored product times the cofactor reproduces the
    integer exactly, so correctness never depends on the factorization
    being complete.
    """
    if not n_list:
        raise ValueError("n_list must be nonempty")
    levels = [int(n) for n in n_list]
    if any(n < 3 or n % 2 == 0 for n in levels):
        raise ValueError("levels must be odd integers >= 3")
    if len(set(levels)) != len(levels):
        raise ValueError("levels must be distinct")
    warnings: list[str] = []
    for p in curve.bad_primes():
        red = reduction_type(curve, p)
        if red.kind == ADDITIVE and red.warning is None:
            raise ValueError(
                f"curve has additive reduction at {p}; the global identity "
                "requires semistable bad fibers"
            )
        if red.warning is not None:
            warnings.append(red.warning)
    disc = curve.disc_p
    two_val = (disc & -disc).bit_length() - 1
    if two_val > 0:
        warnings.append(
            f"v_2(disc P) = {two_val} > 0: dyadic contributions are outside "
            "the model and excluded from the factor table's prime set"
        )
    target = 0.5 * log_abs(disc)
    base_primes = sorted(
        set(small_primes(TRIAL_FACTOR_BOUND)) | set(curve.bad_primes())
    )
    rows = []
    for n in sorted(levels):
        nrm = abs(int(psi_mod_cubic(curve, n).norm()))
        if nrm == 0:
            raise ArithmeticError("torsion divisor shares a root with P")
        record = torsion_sum(curve, n, max_degree=verify_degree)
        n_primes = set()
        m = n
        for p in base_primes:
            while m % p == 0:
                n_primes.add(p)
                m //= p
            if m == 1:
                break
        if m > 1:
            n_primes.add(m)
        primes = sorted(set(base_primes) | n_primes)
        facs, cofactor = _trial_factor(nrm, primes)
        check = cofactor
        for p, e in facs.items():
            check *= p**e
        if check != nrm:
            raise ArithmeticError("factorization bookkeeping failed")
        rows.append(
            GlobalRow(
                n=n,
                sn=record.sn,
                target=target,
                abs_error=abs(record.sn - target),
                res_decimal_digits=len(str(nrm)),
                factorization=tuple(sorted(facs.items())),
                cofactor=cofactor,
                lead_correction=record.lead_correction,
                content_correction=record.content_correction,
            )
        )
    return GlobalReport(
        curve=curve,
        target=target,
        rows=tuple(rows),
        warnings=tuple(warnings),
    )
