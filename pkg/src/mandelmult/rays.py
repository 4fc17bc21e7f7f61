"""External rays in the dynamical and parameter planes.

Dynamical rays follow the gradient curves of the potential at a fixed
angle: the ray point at level L and angle theta is the f_c-preimage of the
point at level 2L and angle 2 theta, with the square-root branch chosen by
continuity. Parameter rays solve log B_c(c) = level + 2 pi i angle by a
guarded secant iteration along a halving level schedule. Landing points
are extrapolated from the octave tail (Aitken for geometric approach,
wide-stencil harmonic fits at parabolic roots, pair midpoints for wake
root pairs) and never claimed rigorous.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .atlas import HyperbolicComponent, InternalArgument
from .dynamics import (
    DEFAULT_CONFIG,
    NumericsConfig,
    green_value,
    inverse_bottcher,
)
from .errors import (
    ConvergenceError,
    DomainError,
    PullbackAmbiguity,
    UnknownRayPair,
)


@dataclass(frozen=True)
class ExternalAngle:
    """Angle as a reduced fraction of a full turn in [0, 1)."""

    numerator: int
    denominator: int

    def __post_init__(self) -> None:
        n, d = int(self.numerator), int(self.denominator)
        if d < 1:
            raise DomainError("denominator must be positive")
        n %= d
        g = math.gcd(n, d)
        if g > 1:
            n //= g
            d //= g
        object.__setattr__(self, "numerator", n)
        object.__setattr__(self, "denominator", d)

    @classmethod
    def parse(cls, text: str) -> "ExternalAngle":
        if "/" in text:
            a, b = text.split("/", 1)
            return cls(int(a), int(b))
        return cls(int(text), 1)

    @property
    def value(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def doubled(self) -> "ExternalAngle":
        return ExternalAngle(2 * self.numerator, self.denominator)

    def __float__(self) -> float:
        return self.numerator / self.denominator

    def __str__(self) -> str:
        return f"{self.numerator}/{self.denominator}"


@dataclass(frozen=True)
class RayPolyline:
    angle: ExternalAngle
    levels: tuple[float, ...]
    points: tuple[complex, ...]
    landing_estimate: complex
    landing_gap: float


def _aitken(zs: list[complex]) -> complex:
    """Aitken delta-squared acceleration on the last three entries."""
    if len(zs) < 3:
        return zs[-1]
    z0, z1, z2 = zs[-3], zs[-2], zs[-1]
    denom = z2 - 2.0 * z1 + z0
    if abs(denom) < 1e-300:
        return z2
    return z2 - (z2 - z1) ** 2 / denom


def _extrapolate_ray_tail(zs: list[complex]) -> complex:
    """Wide-stencil extrapolation of a ray tail to its landing point.

    Parameter rays approach parabolic roots like a/k + b/k^2 + ... in the
    octave index k, with b comparable to |a|^2; a three-node fit over a
    wide stencil (spacing ~k/4) eliminates both leading terms without the
    noise blow-up of adjacent-node elimination. Geometric tails are flat by
    the deep end, where the fit degrades gracefully to the last point.
    """
    K = len(zs)
    if K < 3:
        return zs[-1]
    d1 = abs(zs[-2] - zs[-3])
    d2 = abs(zs[-1] - zs[-2])
    if d1 > 0 and d2 / d1 < 0.6:
        # Geometric tail (hyperbolic landing): Aitken is exact in the limit.
        return _aitken(list(zs))
    sp = max(1, K // 4)
    idx = [K - 1 - 2 * sp, K - 1 - sp, K - 1]
    if idx[0] < 0:
        sp = (K - 1) // 2
        idx = [K - 1 - 2 * sp, K - 1 - sp, K - 1]
    ks = np.array([i + 1.0 for i in idx])
    y = np.array([zs[i] for i in idx])
    A = np.stack([np.ones(3), 1.0 / ks, 1.0 / ks**2], axis=1)
    try:
        coef = np.linalg.solve(A, y)
    except np.linalg.LinAlgError:
        return zs[-1]
    return complex(coef[0])


def trace_dynamic_ray(
    c: complex,
    angle: ExternalAngle,
    min_level: float = 1e-6,
    config: NumericsConfig = DEFAULT_CONFIG,
    start_level: float = 2.0,
    per_octave: int = 4,
) -> RayPolyline:
    """Trace the external ray of f_c at a rational angle down to min_level.

    Depth j computes the point at level L0/2^j as a j-fold pullback of a
    directly inverted point at level L0, angle 2^j theta. Each pullback
    picks the square root closer to the previous depth's chain, which is
    the continuity choice along the ray.
    """
    c = complex(c)
    if abs(c.real) > 4.0 or abs(c.imag) > 4.0:
        raise DomainError("parameter outside the supported 4-radius box")
    if min_level <= 0:
        raise DomainError("min_level must be positive")
    g0 = green_value(c, 0.0, config)
    L0 = max(start_level, 2.0 * g0 + 1.0)
    depth = max(1, int(math.ceil(math.log2(L0 / min_level))))
    theta = angle.value

    levels: list[float] = []
    points: list[complex] = []
    octave_points: list[complex] = []
    prev_chain: list[complex] | None = None
    for j in range(depth + 1):
        for s in range(per_octave if j < depth else 1):
            frac = 2.0 ** (-s / per_octave)
            top_level = L0 * frac
            top_angle = float(Fraction(2**j) * theta % 1)
            w = cmath.exp(complex(top_level, 2.0 * math.pi * top_angle))
            z = inverse_bottcher(c, w, config)
            chain = [z]
            for i in range(j):
                # Preimage at angle 2^{j-i-1} theta, level top/2^{i+1}.
                u = z - c
                if abs(u) < 1e-18:
                    raise PullbackAmbiguity(
                        f"pullback through the critical point at depth {j}"
                    )
                r = cmath.sqrt(u)
                # The continuity reference is the entry of matching angle:
                # index i on the previous depth's chain (one level up), or
                # index i+1 on the current octave chain for sub-levels.
                ref = None
                if s > 0 and prev_chain is not None and i + 1 < len(prev_chain):
                    ref = prev_chain[i + 1]
                elif s == 0 and prev_chain is not None and i < len(prev_chain):
                    ref = prev_chain[i]
                if ref is not None:
                    z = r if abs(r - ref) <= abs(-r - ref) else -r
                else:
                    half = float(Fraction(2 ** (j - i - 1)) * theta % 1)
                    want = cmath.exp(2j * math.pi * half)
                    z = r if abs(r / abs(r) - want) <= abs(-r / abs(r) - want) else -r
                chain.append(z)
            if s == 0:
                prev_chain = chain
                octave_points.append(chain[-1])
            levels.append(top_level / 2.0**j)
            points.append(chain[-1])
    landing = _aitken(octave_points)
    gap = (
        abs(octave_points[-1] - octave_points[-2])
        if len(octave_points) >= 2
        else math.inf
    )
    order = np.argsort([-x for x in levels])
    levels_sorted = tuple(levels[i] for i in order)
    points_sorted = tuple(points[i] for i in order)
    return RayPolyline(angle, levels_sorted, points_sorted, landing, gap)


def _phi_param_log(c: complex) -> complex | None:
    """log B_c at the critical value c, or None if c looks inside M.

    Working on the logarithm keeps the radial component (the potential)
    resolvable at absolute accuracy ~1e-14 however small the level gets;
    the exponentiated value would saturate double precision near |B| = 1.
    A bounded critical orbit (c in M, where the map is undefined) reports
    None so the Newton driver can backtrack.
    """
    z = c
    logb = cmath.log(c)
    escaped = False
    for k in range(512):
        az = abs(z)
        if az > 1e10:
            escaped = True
            break
        w = 1.0 + c / (z * z)
        if w == 0:
            return None
        logb += 2.0 ** (-k - 1) * cmath.log(w)
        z = z * z + c
    if not escaped:
        return None
    return logb


def _wrap_residual(log_val: complex, level: float, angle_turns: float) -> complex:
    """log B_c(c) minus the target, with the angle folded to (-pi, pi]."""
    d_re = log_val.real - level
    d_im = log_val.imag - 2.0 * math.pi * angle_turns
    d_im = (d_im + math.pi) % (2.0 * math.pi) - math.pi
    return complex(d_re, d_im)


def _parameter_point(
    level: float, angle_turns: float, seed: complex, config: NumericsConfig
) -> complex:
    """Solve G_c(c) = level at the given external angle, by guarded secant.

    The iteration runs on log B_c(c), whose accuracy is absolute, so levels
    down to ~1e-13 position the point radially to a fraction of the level.
    Rays can also pass within a hair of branch points (the tip at c = -2 is
    reached like level^2), where any fixed finite-difference step dwarfs
    the feature scale; the secant derivative adapts to the scale the
    iterates actually move on.
    """
    cc = complex(seed)
    val = _phi_param_log(cc)
    if val is None:
        raise ConvergenceError("parameter ray seed has a bounded critical orbit")
    h = 1e-7 * (1.0 + abs(cc))
    tol = max(3e-14, 1e-6 * level)
    prev_cc: complex | None = None
    prev_val: complex | None = None
    for _ in range(config.max_newton_steps):
        resid = _wrap_residual(val, level, angle_turns)
        if abs(resid) <= tol:
            return cc
        if prev_cc is not None and abs(cc - prev_cc) > 1e-300:
            deriv = (val - prev_val) / (cc - prev_cc)
        else:
            val2 = _phi_param_log(cc + h)
            if val2 is None:
                val2 = _phi_param_log(cc - h)
                if val2 is None:
                    raise ConvergenceError("degenerate derivative on parameter ray")
                deriv = (val - val2) / h
            else:
                deriv = (val2 - val) / h
        if not (abs(deriv) > 1e-300 and math.isfinite(deriv.real)):
            raise ConvergenceError("degenerate derivative on parameter ray")
        step = resid / deriv
        if abs(step) > 0.25:
            step *= 0.25 / abs(step)
        # Backtrack while the trial point falls into the connectedness locus.
        ok = False
        for _ in range(30):
            trial = cc - step
            val_new = _phi_param_log(trial)
            if val_new is not None and math.isfinite(val_new.real):
                prev_cc, prev_val = cc, val
                cc, val = trial, val_new
                ok = True
                break
            step /= 2.0
        if not ok:
            raise ConvergenceError(f"parameter ray blocked at level {level}")
    resid = _wrap_residual(val, level, angle_turns)
    if abs(resid) <= 100.0 * tol:
        # Radially positioned to a few hundred times machine noise, which
        # still beats the level spacing by orders of magnitude.
        return cc
    raise ConvergenceError(f"parameter ray Newton stalled at level {level}")


def trace_parameter_ray(
    angle: ExternalAngle,
    min_level: float = 1e-6,
    config: NumericsConfig = DEFAULT_CONFIG,
    start_level: float = 2.0,
) -> RayPolyline:
    """Trace the parameter-plane ray of M at a rational angle.

    Follows the solution of G_c(c) = level at fixed external angle through
    a halving level schedule, seeding each Newton solve from the previous
    point. The landing estimate is the Aitken limit of the level sequence.
    """
    if min_level <= 0:
        raise DomainError("min_level must be positive")
    theta = float(angle)
    seed = 2.0 * cmath.exp(complex(start_level, 2.0 * math.pi * theta))
    levels = []
    points = []
    level = start_level
    seedpt = seed
    while level >= min_level:
        try:
            pt = _parameter_point(level, theta, seedpt, config)
        except ConvergenceError:
            # Levels near 1e-13 sit at the radial noise floor of the log
            # coordinate; keep what converged if the tail is deep enough.
            if len(points) >= 12:
                break
            raise
        levels.append(level)
        points.append(pt)
        seedpt = pt
        level /= 2.0
    landing = _extrapolate_ray_tail(points)
    gap = abs(points[-1] - points[-2]) if len(points) >= 2 else math.inf
    return RayPolyline(angle, tuple(levels), tuple(points), landing, gap)


def ray_pair_landing(
    angle1: ExternalAngle,
    angle2: ExternalAngle,
    min_level: float = 2.0**-40,
    config: NumericsConfig = DEFAULT_CONFIG,
) -> tuple[complex, float]:
    """Joint landing estimate for two rays landing at one root.

    The two rays bounding a wake approach the root along opposite tangent
    directions, so their level-wise midpoints cancel the slow 1/k term and
    converge like 1/k^2; one wide Richardson step in 1/k^2 then removes
    most of the remainder. Returns the estimate and the distance between
    the refined and unrefined midpoints as an accuracy indicator.
    """
    r1 = trace_parameter_ray(angle1, min_level, config)
    r2 = trace_parameter_ray(angle2, min_level, config)
    K = min(len(r1.points), len(r2.points))
    if K < 3:
        raise ConvergenceError("ray pair too shallow for a landing estimate")
    mids = [0.5 * (r1.points[k] + r2.points[k]) for k in range(K)]
    sp = max(1, K // 4)
    k2, k1 = float(K), float(K - sp)
    m2, m1 = mids[K - 1], mids[K - 1 - sp]
    est = m2 + (m2 - m1) * (1.0 / k2**2) / (1.0 / k1**2 - 1.0 / k2**2)
    return est, abs(est - m2)


def digit_formula_check(
    n: int, q: int, beta_minus_alpha: int, measured: float
) -> tuple[Fraction, bool]:
    """Exact angle gap (beta-alpha)(2^n - 1)/(2^{nq} - 1) versus a measurement."""
    if not 1 <= beta_minus_alpha <= 2**n - 1:
        raise DomainError("digit difference must lie in [1, 2^n - 1]")
    formula = Fraction(beta_minus_alpha * (2**n - 1), 2 ** (n * q) - 1)
    return formula, abs(measured - float(formula)) <= 1e-6


# External angle pairs landing at the root of W(t0), for the small cases the
# suite exercises. Keyed by (period of W, t0). The cardioid entries are the
# classical q-cycle pairs; the period-2 entry is the 2/5, 3/5 pair at -5/4.
_ROOT_RAYS: dict[tuple[int, Fraction], tuple[Fraction, Fraction]] = {
    (1, Fraction(1, 2)): (Fraction(1, 3), Fraction(2, 3)),
    (1, Fraction(1, 3)): (Fraction(1, 7), Fraction(2, 7)),
    (1, Fraction(-1, 3)): (Fraction(5, 7), Fraction(6, 7)),
    (1, Fraction(1, 4)): (Fraction(1, 15), Fraction(2, 15)),
    (1, Fraction(-1, 4)): (Fraction(13, 15), Fraction(14, 15)),
    (1, Fraction(1, 5)): (Fraction(1, 31), Fraction(2, 31)),
    (1, Fraction(2, 5)): (Fraction(11, 31), Fraction(12, 31)),
    (1, Fraction(-2, 5)): (Fraction(19, 31), Fraction(20, 31)),
    (1, Fraction(-1, 5)): (Fraction(29, 31), Fraction(30, 31)),
    (2, Fraction(1, 2)): (Fraction(2, 5), Fraction(3, 5)),
}


def root_ray_angles(
    component: HyperbolicComponent, t0: InternalArgument
) -> tuple[ExternalAngle, ExternalAngle]:
    key = (component.n, t0.value)
    if key not in _ROOT_RAYS:
        raise UnknownRayPair(
            f"no shipped external-angle pair for period {component.n}, t0 = {t0}"
        )
    a, b = _ROOT_RAYS[key]
    return (
        ExternalAngle(a.numerator, a.denominator),
        ExternalAngle(b.numerator, b.denominator),
    )


def _winding_number(poly: list[complex], z: complex) -> int:
    total = 0.0
    for a, b in zip(poly, poly[1:]):
        total += cmath.phase((b - z) / (a - z))
    return round(total / (2.0 * math.pi))


def wake_side_check(
    component: HyperbolicComponent,
    t0: InternalArgument,
    c: complex,
    config: NumericsConfig = DEFAULT_CONFIG,
    min_level: float = 1e-4,
) -> bool:
    """Whether c sits on the non-origin side of the two root rays.

    The two parameter rays landing at the root of W(t0) are joined at their
    common landing estimate and closed by a far arc; c is in the wake iff
    its winding number differs from the origin's.
    """
    a1, a2 = root_ray_angles(component, t0)
    r1 = trace_parameter_ray(a1, min_level, config)
    r2 = trace_parameter_ray(a2, min_level, config)
    joint, _ = ray_pair_landing(a1, a2, min(min_level, 2.0**-30), config)
    path = list(r1.points)[::-1] + [joint] + list(r2.points)
    # Close with an arc at a radius beyond both ray tops, through the
    # angular gap between the outer endpoints that avoids the wake sector.
    far = max(abs(path[0]), abs(path[-1])) * 1.5
    ang1 = cmath.phase(path[0])
    ang2 = cmath.phase(path[-1])
    sweep = (ang1 - ang2) % (2.0 * math.pi)
    arc = [
        far * cmath.exp(1j * (ang2 + sweep * k / 32.0)) for k in range(33)
    ]
    closed = path + arc + [path[0]]
    if abs(c) > far:
        raise DomainError("test point beyond the closing arc")
    w_c = _winding_number(closed, complex(c))
    w_origin = _winding_number(closed, 0j)
    return w_c != w_origin
