"""Multiplier-plane domains, the constants ledger, and inequality checks.

The extension domain Omega_C is the connected component of
{rho: |rho - 1| > C log|rho|} containing the punctured closed unit disk.
In log coordinates L = x + iy the condition for x > 0 reads
sin^2(y/2) > (C^2 x^2 - (e^x - 1)^2) / (4 e^x), and for C above ~3.6 the
component is confined to a thin strip x < 2/(C - 2).

The ledger fixes lambda_* and derives the enclosure radius R, the products
B and B_0 and the beta-growth constant A_2 that bound the equipotential
derivative maximum K_n(c) by B (2 beta)^n and B_0 4^n.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .dynamics import (
    DEFAULT_CONFIG,
    NumericsConfig,
    area_estimate,
    equipotential_points,
    equipotential_pullback,
    green_value,
    green_values,
    inverse_bottcher_many,
    _bottcher_log_many,
)
from .errors import DistortionFailure, DomainError, LevelUnreachable
from .orbits import OrbitDerivativeData, PeriodicOrbit, a_function_many

_C_MAX_ABS = 2.0 * math.e**2  # |c| bound over the relevant parameter region


def _beta_for(abs_c: float) -> float:
    """Positive solution of beta^2 - beta = |c|."""
    return 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * abs_c))


@dataclass(frozen=True)
class ConstantsLedger:
    """lambda_* with its derived constants and the sampled validity record."""

    lambda_star: float
    R: float
    B: float
    B0: float
    A2: float
    beta_max: float
    distortion_samples: int
    distortion_min_margin: float

    def as_dict(self) -> dict:
        return {
            "lambda_star": self.lambda_star,
            "R": self.R,
            "B": self.B,
            "B0": self.B0,
            "A2": self.A2,
            "beta_max": self.beta_max,
            "distortion_samples": self.distortion_samples,
            "distortion_min_margin": self.distortion_min_margin,
        }


def _ledger_sample_parameters(count: int) -> np.ndarray:
    """Polar grid over the closed 2e^2 disk of admissible parameters."""
    radii = np.linspace(0.0, _C_MAX_ABS, count)
    out = [0j]
    for i, r in enumerate(radii[1:], start=1):
        m = max(8, 4 * i)
        th = 2.0 * math.pi * (np.arange(m) + 0.5 * (i % 2)) / m
        out.extend(r * np.exp(1j * th))
    return np.asarray(out, dtype=np.complex128)


def build_ledger(
    lambda_star: float = 2.0,
    sample_budget: int = 2000,
    config: NumericsConfig = DEFAULT_CONFIG,
) -> ConstantsLedger:
    """Compute the constants for a chosen lambda_* with sampled certificates.

    R is the smallest half-integer radius exceeding 1 + beta_max such that
    the equipotential {G_c = 2 log lambda_*} stays in B(0, R) on a parameter
    grid covering |c| <= 2 e^2. B is the truncated infinite product
    (2/log lambda_*) prod(1 + R/2^k); A2 maximises n (beta(n) - 2) for
    |c| <= 2 e^{2/n}; B0 = B e^{A2/2} dominates B (1 + A2/2n)^n for all n.
    The inverse-coordinate distortion condition |phi'(w)/phi(w)| > 1/(2|w|)
    is spot-checked on random (c, w) pairs and its minimum margin recorded.
    """
    if lambda_star <= 1.0:
        raise DomainError("lambda_star must exceed 1")
    beta_max = _beta_for(_C_MAX_ABS)
    level = 2.0 * math.log(lambda_star)

    cs = _ledger_sample_parameters(14)
    max_abs_z = 0.0
    angles = np.exp(2j * math.pi * np.arange(64) / 64.0)
    for c in cs:
        g0 = green_value(complex(c), 0.0, config)
        if level <= g0 + 1e-9:
            raise DomainError(
                f"2 log lambda_* = {level} does not dominate G_c(0) = {g0} at c = {c}"
            )
        zs = inverse_bottcher_many(complex(c), math.exp(level) * angles, config)
        max_abs_z = max(max_abs_z, float(np.max(np.abs(zs))))

    r_min = 1.0 + beta_max
    R = 0.5 * math.ceil(2.0 * r_min + 1e-12)
    if R <= r_min:
        R += 0.5
    while R < max_abs_z:
        R += 0.5

    # Truncated product; remaining factors multiply by < exp(2^-k R) ~ 1.
    B = 2.0 / math.log(lambda_star)
    k = 1
    while R / 2.0**k >= 1e-14:
        B *= 1.0 + R / 2.0**k
        k += 1

    ns = np.arange(1, 10**6 + 1, dtype=np.float64)
    betas = 0.5 * (1.0 + np.sqrt(1.0 + 8.0 * np.exp(2.0 / ns)))
    A2 = float(np.max(ns * (betas - 2.0)))
    # (1 + A2/2n)^n increases to e^{A2/2}; the limit bounds every n.
    B0 = B * math.exp(A2 / 2.0)

    # Distortion certificate for |phi'(w)/phi(w)| > 1/(2|w|) on the annulus
    # lambda_* < |w| < lambda_*^2. The principal branch of phi only exists
    # above the critical circle |w| = e^{G_c(0)}; for large |c| that circle
    # cuts into the annulus, and the slit-domain extension that covers the
    # remainder is out of scope. Samples therefore keep a fixed clearance
    # factor above the critical circle, and the certificate records that
    # restriction through the sampled (c, w) population itself.
    clearance = 1.25
    rng = np.random.default_rng(config.rng_seed + 0x1ED6E5)
    min_margin = math.inf
    checked = 0
    attempts = 0
    while checked < sample_budget:
        attempts += 1
        if attempts > 100 * sample_budget:
            raise DistortionFailure(
                "annulus above the critical-circle clearance is empty on the"
                f" parameter grid at lambda_star = {lambda_star}"
            )
        rr_c = _C_MAX_ABS * math.sqrt(rng.uniform(0.0, 1.0))
        th_c = rng.uniform(0.0, 2.0 * math.pi)
        c = rr_c * complex(math.cos(th_c), math.sin(th_c))
        g0 = green_value(c, 0.0, config)
        lo = max(lambda_star, math.exp(g0) * clearance)
        hi = lambda_star**2
        if lo >= hi:
            continue
        m = min(64, sample_budget - checked)
        rr = rng.uniform(lo, hi, m)
        th = rng.uniform(0.0, 2.0 * math.pi, m)
        ws = rr * np.exp(1j * th)
        zs = inverse_bottcher_many(c, ws, config)
        logb, dlogb = _bottcher_log_many(c, zs)
        bprime = np.exp(logb) * dlogb
        # phi = inverse of B_c, so phi'(w) = 1/B'(z) and phi(w) = z.
        lhs = 1.0 / (np.abs(bprime) * np.abs(zs))
        rhs = 1.0 / (2.0 * np.abs(ws))
        margin = float(np.min(lhs / rhs - 1.0))
        min_margin = min(min_margin, margin)
        checked += m
    if not min_margin > 0.0:
        raise DistortionFailure(
            f"distortion margin {min_margin:.4f} <= 0 at lambda_star = {lambda_star}"
        )
    return ConstantsLedger(
        lambda_star=lambda_star,
        R=R,
        B=B,
        B0=B0,
        A2=A2,
        beta_max=beta_max,
        distortion_samples=checked,
        distortion_min_margin=min_margin,
    )


_DEFAULT_LEDGER: ConstantsLedger | None = None


def default_ledger(config: NumericsConfig = DEFAULT_CONFIG) -> ConstantsLedger:
    """The shipped lambda_* = 2 ledger, built once per process."""
    global _DEFAULT_LEDGER
    if _DEFAULT_LEDGER is None:
        _DEFAULT_LEDGER = build_ledger(2.0, 2000, config)
    return _DEFAULT_LEDGER


@dataclass(frozen=True)
class OmegaDomain:
    """The extension domain with cut constant C."""

    C: float

    def __post_init__(self) -> None:
        if not self.C > 0:
            raise DomainError("C must be positive")


def omega_log_x_bound(C: float) -> float:
    """Strip bound x < 2/(C-2) for members of the log domain, C > 2."""
    if C <= 2.0:
        raise DomainError("the strip bound requires C > 2")
    return 2.0 / (C - 2.0)


def _omega_x_cut(C: float) -> float:
    """First positive root of e^x + 1 = C x, or +inf when none exists.

    Vertical slices of the inequality region are nonempty exactly where
    e^x + 1 > C x. The component attached to the unit disk therefore lives
    left of the first root; beyond it a second, unrelated component appears
    at large x. Below C ~ 3.59 there is no root and the region is connected.
    """
    g = lambda x: math.exp(x) + 1.0 - C * x
    if C <= math.e:
        return math.inf
    x_mid = math.log(C)
    if g(x_mid) > 0.0:
        return math.inf
    lo, hi = 0.0, x_mid
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if g(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return hi


def omega_log_contains(domain: OmegaDomain, L: complex) -> bool:
    """Membership of L = log rho (|Im L| <= pi) in the log projection."""
    x, y = L.real, L.imag
    if abs(y) > math.pi + 1e-15:
        return False
    if x <= 0.0:
        return not (x == 0.0 and y == 0.0)
    cut = _omega_x_cut(domain.C)
    if x >= cut:
        return False
    rhs = (domain.C**2 * x * x - (math.exp(x) - 1.0) ** 2) / (4.0 * math.exp(x))
    return math.sin(0.5 * y) ** 2 > rhs


def omega_contains(domain: OmegaDomain, rho: complex) -> bool:
    """Membership in Omega_C, the component containing {0 < |rho| <= 1} \\ {1}.

    rho = 0 belongs by definition; rho = 1 never does.
    """
    rho = complex(rho)
    if rho == 0:
        return True
    if rho == 1:
        return False
    return omega_log_contains(domain, cmath.log(rho))


def omega_for_period(n: int, ledger: ConstantsLedger) -> OmegaDomain:
    """Omega_n, the instance with C = 4^n B0 / n."""
    if n < 1:
        raise DomainError("n must be >= 1")
    return OmegaDomain(4.0**n * ledger.B0 / n)


def R_n_value(n: int, ledger: ConstantsLedger) -> float:
    """Radius of the deleted disk in the injectivity domain.

    R_n = pi n log 2 / (pi/2 - arctan[2 (2^n - 1) / (pi (4^n B0 - 2n))]),
    asymptotically (2 + O(2^-n)) n log 2.
    """
    denom = 4.0**n * ledger.B0 - 2.0 * n
    if not denom > 0:
        raise DomainError("requires 4^n B0 > 2n")
    a = 2.0 * (2.0**n - 1.0) / (math.pi * denom)
    return math.pi * n * math.log(2.0) / (math.pi / 2.0 - math.atan(a))


def tilde_omega_contains(n: int, L: complex, ledger: ConstantsLedger) -> bool:
    """Membership of L in the injectivity log-domain: Omega_n minus the disk
    |L - R_n| < R_n."""
    L = complex(L)
    if abs(L.imag) > math.pi + 1e-15:
        return False
    if not omega_log_contains(omega_for_period(n, ledger), L):
        return False
    rn = R_n_value(n, ledger)
    return abs(L - rn) >= rn


@dataclass(frozen=True)
class YoccozDisk:
    """Round disk in the log-multiplier plane containing log rho over a limb."""

    center: complex
    radius: float

    def contains(self, L: complex, tol: float = 1e-9) -> bool:
        return abs(complex(L) - self.center) <= self.radius + tol


def yoccoz_disk(n: int, t) -> YoccozDisk:
    """Y_n(t): center 2 pi i t + (n log 2)/q, radius (n log 2)/q."""
    p, q = t.p, t.q
    if p == 0:
        raise DomainError("t must be nonzero")
    r = n * math.log(2.0) / q
    center = 2.0 * math.pi * (p / q) * 1j + r
    return YoccozDisk(center, r)


def log_multiplier_branch(rho: complex, t) -> complex:
    """The branch of log rho whose imaginary part sits nearest 2 pi t.

    Membership in a Yoccoz disk is a statement about one branch of the
    logarithm; the principal branch jumps at the negative axis, exactly
    where the t = 1/2 limb lives.
    """
    rho = complex(rho)
    if rho == 0:
        raise DomainError("rho must be nonzero")
    base = cmath.log(rho)
    target = 2.0 * math.pi * (t.p / t.q)
    k = round((target - base.imag) / (2.0 * math.pi))
    return complex(base.real, base.imag + 2.0 * math.pi * k)


@dataclass(frozen=True)
class KnEstimate:
    value: float
    samples: int
    level: float
    pullbacks: int


def K_n_compute(
    c: complex,
    n: int,
    ledger: ConstantsLedger,
    config: NumericsConfig = DEFAULT_CONFIG,
    min_samples: int | None = None,
) -> KnEstimate:
    """Sampled maximum of (2/log lambda_*) |(f^n)'| on {G_c = 2^{1-n} log lambda_*}.

    When the target level sits below the critical potential, a higher dyadic
    level is sampled and pulled back through f_c-preimages, doubling the
    sample per step. The result is a lower estimate of the true maximum; the
    sample count is reported so callers can apply a sampling safety factor.
    """
    c = complex(c)
    level = 2.0 ** (1 - n) * math.log(ledger.lambda_star)
    want = min_samples if min_samples is not None else 2 ** min(n, 6) * 64
    g0 = green_value(c, 0.0, config)
    pullbacks = 0
    base = level
    while base <= g0 * 1.1 + 1e-12:
        base *= 2.0
        pullbacks += 1
        if pullbacks > 40:
            raise LevelUnreachable(f"cannot rise above critical potential {g0}")
    count0 = max(64, int(math.ceil(want / 2**pullbacks)))
    sample = equipotential_points(c, base, count0, config)
    for _ in range(pullbacks):
        sample = equipotential_pullback(sample, config)
    zs = np.asarray(sample.points)
    v = zs.copy()
    D = np.ones_like(v)
    for _ in range(n):
        D = 2.0 * v * D
        v = v * v + c
    value = 2.0 / math.log(ledger.lambda_star) * float(np.max(np.abs(D)))
    return KnEstimate(value, len(zs), level, pullbacks)


@dataclass(frozen=True)
class MainInequalityGap:
    lhs: float
    rhs: float
    gap: float
    kn: float
    area: float
    area_stderr: float
    rhs_stderr: float


def main_inequality_gap(
    orbit: PeriodicOrbit,
    data: OrbitDerivativeData,
    ledger: ConstantsLedger,
    config: NumericsConfig = DEFAULT_CONFIG,
    k_safety: float = 1.0,
    seed: int | None = None,
) -> MainInequalityGap:
    """Both sides of |n rho - n + 2c rho'/rho| <= K_n (log|rho| + ...).

    The area term is area{0 <= G_c < 2^-n log lambda_*}/pi scaled by
    |rho'|/|rho|; its Monte Carlo standard error propagates linearly into
    rhs_stderr. k_safety multiplies the sampled K_n (a lower estimate of a
    maximum) before it enters the right side.
    """
    rho = orbit.rho
    if not abs(rho) > 1.0:
        raise DomainError("main inequality applies to repelling orbits")
    if not abs(rho) < math.e:
        raise DomainError(f"|rho| = {abs(rho):.6f} must be below e")
    n = orbit.n
    c = orbit.c
    lhs = abs(n * rho - n + 2.0 * c * data.rho_prime / rho)
    kn = K_n_compute(c, n, ledger, config).value * k_safety
    level = 2.0**-n * math.log(ledger.lambda_star)
    est = area_estimate(c, level, config, seed=seed)
    ratio = abs(data.rho_prime) / abs(rho)
    rhs = kn * (math.log(abs(rho)) + ratio * est.area / math.pi)
    rhs_stderr = kn * ratio * est.stderr / math.pi
    return MainInequalityGap(
        lhs, rhs, rhs - lhs, kn, est.area, est.stderr, rhs_stderr
    )


@dataclass(frozen=True)
class CorollaryBCheck:
    hypothesis: bool
    ok: bool
    rho_prime_abs: float


def corollary_B_check(
    orbit: PeriodicOrbit,
    data: OrbitDerivativeData,
    ledger: ConstantsLedger,
    config: NumericsConfig = DEFAULT_CONFIG,
) -> CorollaryBCheck:
    """If n|rho - 1| > K_n log|rho| for 1 < |rho| < e, then rho' != 0.

    Returns whether the hypothesis held; a failed hypothesis makes the claim
    vacuous and ok is reported True with hypothesis False.
    """
    rho = orbit.rho
    if not (1.0 < abs(rho) < math.e):
        raise DomainError("requires 1 < |rho| < e")
    kn = K_n_compute(orbit.c, orbit.n, ledger, config).value
    hyp = orbit.n * abs(rho - 1.0) > kn * math.log(abs(rho))
    ok = (abs(data.rho_prime) > 1e-9) if hyp else True
    return CorollaryBCheck(hyp, ok, abs(data.rho_prime))


@dataclass(frozen=True)
class LemmaBasicCheck:
    integral: float
    stderr: float
    bound: float
    holds: bool


def lemma_basic_check(
    orbit: PeriodicOrbit,
    data: OrbitDerivativeData,
    lam: float,
    mc_samples: int | None = None,
    config: NumericsConfig = DEFAULT_CONFIG,
    seed: int | None = None,
) -> LemmaBasicCheck:
    """Integral of |A| over the fundamental annulus against its bound.

    The annulus C_lam is {0 < G < log lam} minus its f-preimage, i.e. points
    with (log lam)/2 <= G < log lam. The bound is 2 pi log|rho| plus twice
    (|rho'|/|rho|) area{0 < G < (log lam)/2}, the annulus-shift estimate with
    the cycle constant replaced by its 2 pi log|rho| majorant.
    """
    if not orbit.is_repelling:
        raise DomainError("requires a repelling orbit")
    if lam <= 1.0:
        raise DomainError("lambda must exceed 1")
    c = orbit.c
    log_lam = math.log(lam)
    g0 = green_value(c, 0.0, config)
    if not 0.5 * log_lam > g0:
        raise DomainError("need lambda^(1/2) above the critical potential")
    n = mc_samples if mc_samples is not None else config.mc_samples
    rng = np.random.default_rng(config.rng_seed if seed is None else seed)
    r_box = math.exp(log_lam) + 2.0
    zs = rng.uniform(-r_box, r_box, n) + 1j * rng.uniform(-r_box, r_box, n)
    g = green_values(c, zs, config)
    in_annulus = (g >= 0.5 * log_lam) & (g < log_lam) & (g > 0.0)
    vals = np.zeros(n, dtype=np.float64)
    if in_annulus.any():
        vals[in_annulus] = np.abs(a_function_many(orbit, data, zs[in_annulus]))
    box = (2.0 * r_box) ** 2
    integral = box * float(vals.mean())
    stderr = box * float(vals.std(ddof=1)) / math.sqrt(n)
    half_area = area_estimate(c, 0.5 * log_lam, config, seed=seed).area
    bound = 2.0 * math.pi * math.log(abs(orbit.rho)) + 2.0 * (
        abs(data.rho_prime) / abs(orbit.rho)
    ) * half_area
    return LemmaBasicCheck(integral, stderr, bound, integral <= bound + 3.0 * stderr)


def n_deep_sufficient(n: int, t, ledger: ConstantsLedger) -> bool:
    """Exact-arithmetic test of the two depth inequalities.

    p > 2 B0 4^n and p^2 > 2 n^2 q, evaluated with the ledger's B0 taken as
    an exact binary rational, so the verdict carries no rounding slack.
    """
    p, q = abs(int(t.p)), int(t.q)
    if p == 0:
        raise DomainError("t must be nonzero")
    b0 = Fraction(ledger.B0)
    first = Fraction(p) > 2 * b0 * Fraction(4) ** n
    second = p * p > 2 * n * n * q
    return bool(first and second)


def n_deep_disk_sufficient(
    n: int,
    t,
    ledger: ConstantsLedger,
    boundary_samples: int = 256,
) -> bool:
    """Second sufficient depth test: B(2 pi i t, (4 n log 2)/q) inside the
    injectivity log-domain.

    Checked on sampled boundary points plus interior rings; vertical slices
    of the domain are intervals, so boundary sampling is an honest (though
    not certified) containment probe.
    """
    p, q = t.p, t.q
    if p == 0:
        raise DomainError("t must be nonzero")
    center = 2.0 * math.pi * (p / q) * 1j
    radius = 4.0 * n * math.log(2.0) / q
    for frac in (1.0, 0.6, 0.25):
        for k in range(boundary_samples):
            ang = 2.0 * math.pi * k / boundary_samples
            L = center + frac * radius * complex(math.cos(ang), math.sin(ang))
            if abs(L.imag) > math.pi:
                return False
            if not tilde_omega_contains(n, L, ledger):
                return False
    return tilde_omega_contains(n, center, ledger)


def cut_inequality_check(n: int, L0: complex, a0: float) -> bool:
    """Evaluate |L0|^2 / Re(L0) <= 2 pi n log 2 / (pi/2 - arctan[(2^n-1) a0 / pi]).

    The inequality region coincides with the closed disk |L0 - R| <= R where
    R is half the displayed right side.
    """
    L0 = complex(L0)
    if not L0.real > 0:
        raise DomainError("requires Re L0 > 0")
    rhs = 2.0 * math.pi * n * math.log(2.0) / (
        math.pi / 2.0 - math.atan((2.0**n - 1.0) * a0 / math.pi)
    )
    return abs(L0) ** 2 / L0.real <= rhs
