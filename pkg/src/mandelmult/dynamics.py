"""Complex iteration primitives for f_c(z) = z^2 + c.

Orbits, derivative recursions, the escape-rate potential (Green's function),
the Bottcher coordinate and its inverse, equipotential sampling, and Monte
Carlo area estimates. Everything here is a pure function of its arguments;
array variants are provided where batch evaluation matters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ConvergenceError,
    DerivativeOverflow,
    DomainError,
)

# Iteration cap for potential evaluation; escaping points with G down to
# ~1e-15 leave the escape radius well within this budget.
_MAX_GREEN_ITER = 2048

# Product truncation cap for the Bottcher coordinate.
_MAX_BOTTCHER_TERMS = 512


def _require_finite(z: complex, name: str = "value") -> complex:
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError(f"{name} must have finite components, got {z!r}")
    return z


@dataclass(frozen=True)
class NumericsConfig:
    """Shared numeric tuning knobs.

    newton_tolerance is a relative residual target, escape_radius the modulus
    past which an orbit counts as escaped, mc_samples the Monte Carlo budget.
    """

    newton_tolerance: float = 1e-12
    max_newton_steps: int = 200
    escape_radius: float = 1e8
    green_refine_depth: int = 3
    mc_samples: int = 20000
    rng_seed: int = 0

    def __post_init__(self) -> None:
        if not self.newton_tolerance > 0:
            raise ValueError("newton_tolerance must be > 0")
        if not self.escape_radius > 4:
            raise ValueError("escape_radius must be > 4")
        if self.mc_samples < 10**4:
            raise ValueError("mc_samples must be at least 10^4")
        if self.max_newton_steps < 1:
            raise ValueError("max_newton_steps must be positive")


DEFAULT_CONFIG = NumericsConfig()


@dataclass(frozen=True)
class OrbitTrace:
    """Forward orbit z_0..z_k, truncated early when the orbit escapes."""

    points: tuple[complex, ...]
    escaped: bool
    escape_index: int | None = None


def iterate_orbit(
    c: complex, z0: complex, k: int, config: NumericsConfig = DEFAULT_CONFIG
) -> OrbitTrace:
    """Iterate z -> z^2 + c for k steps from z0."""
    c = _require_finite(c, "c")
    z = _require_finite(z0, "z0")
    if k < 0:
        raise DomainError("k must be >= 0")
    pts = [z]
    for i in range(k):
        if abs(z) > config.escape_radius:
            return OrbitTrace(tuple(pts), True, i)
        z = z * z + c
        pts.append(z)
    escaped = abs(z) > config.escape_radius
    return OrbitTrace(tuple(pts), escaped, k if escaped else None)


def orbit_derivatives(
    c: complex, b: complex, n: int, config: NumericsConfig = DEFAULT_CONFIG
) -> tuple[complex, complex, complex]:
    """Value and first two z-derivatives of the n-th iterate at b.

    Per step, with v the current iterate value, D its derivative and S the
    second derivative: S <- 2(D^2 + v S), D <- 2 v D, v <- v^2 + c. The
    updates read the previous step's quantities, hence the temporaries.
    """
    c = _require_finite(c, "c")
    v = _require_finite(b, "b")
    if n < 1:
        raise DomainError("n must be >= 1")
    guard = config.escape_radius**4
    D: complex = 1.0 + 0.0j
    S: complex = 0.0 + 0.0j
    for _ in range(n):
        S_new = 2.0 * (D * D + v * S)
        D_new = 2.0 * v * D
        v_new = v * v + c
        v, D, S = v_new, D_new, S_new
        if max(abs(v), abs(D), abs(S)) > guard:
            raise DerivativeOverflow(
                f"orbit derivative recursion exceeded {guard:.3e} at period {n}"
            )
    return v, D, S


def _green_scalar(c: complex, z: complex, config: NumericsConfig) -> float:
    r_esc = config.escape_radius
    cc = complex(c)
    zz = complex(z)
    for k in range(_MAX_GREEN_ITER):
        az = abs(zz)
        if az > r_esc:
            g = math.log(az) * 2.0**-k
            # Tail refinement: log|z_{j+1}| = 2 log|z_j| + log|1 + c/z_j^2|.
            w = zz
            for j in range(k, k + config.green_refine_depth):
                if abs(w) > 1e120:
                    break
                g += 2.0 ** (-j - 1) * math.log(abs(1.0 + cc / (w * w)))
                w = w * w + cc
            return g
        zz = zz * zz + cc
    return 0.0


def green_value(
    c: complex, z: complex, config: NumericsConfig = DEFAULT_CONFIG
) -> float:
    """Escape-rate potential G_c(z); exactly 0 for non-escaping points."""
    c = _require_finite(c, "c")
    z = _require_finite(z, "z")
    return _green_scalar(c, z, config)


def green_values(
    c: complex,
    zs: np.ndarray,
    config: NumericsConfig = DEFAULT_CONFIG,
    max_iter: int = _MAX_GREEN_ITER,
) -> np.ndarray:
    """Vectorised potential over an array of starting points.

    Points that have not escaped after max_iter steps report 0. With the
    default cap this matches the scalar routine to well below 1e-10 for any
    point whose potential exceeds ~1e-300.
    """
    c = complex(c)
    z = np.asarray(zs, dtype=np.complex128).copy()
    n = z.shape[0]
    g = np.zeros(n, dtype=np.float64)
    idx = np.arange(n)
    r_esc = config.escape_radius
    k = 0
    while idx.size and k < max_iter:
        az = np.abs(z)
        esc = az > r_esc
        if esc.any():
            ze = z[esc]
            ge = np.log(az[esc]) * 2.0**-k
            w = ze
            for j in range(k, k + config.green_refine_depth):
                ok = np.abs(w) < 1e120
                corr = np.zeros_like(ge)
                wok = w[ok]
                corr[ok] = 2.0 ** (-j - 1) * np.log(np.abs(1.0 + c / (wok * wok)))
                ge += corr
                w = np.where(ok, w * w + c, w)
            g[idx[esc]] = ge
            keep = ~esc
            z = z[keep]
            idx = idx[keep]
        z = z * z + c
        k += 1
    return g


def sublevel_mask(
    c: complex,
    zs: np.ndarray,
    level: float,
    config: NumericsConfig = DEFAULT_CONFIG,
) -> np.ndarray:
    """Membership in the closed sublevel set {G_c <= level'< level}.

    Decision shortcut: once 2^-k log(escape_radius * 1.01) < level, any point
    still inside the escape radius has potential below level, so iteration can
    stop early. Escaped points compare their refined potential to level.
    """
    if level <= 0:
        raise DomainError("level must be positive")
    k_needed = max(4, int(math.ceil(math.log2(math.log(config.escape_radius * 1.01) / level))) + 2)
    g = green_values(c, zs, config, max_iter=k_needed)
    return g < level


@dataclass(frozen=True)
class AreaEstimate:
    area: float
    stderr: float


def area_estimate(
    c: complex,
    level: float,
    config: NumericsConfig = DEFAULT_CONFIG,
    seed: int | None = None,
) -> AreaEstimate:
    """Monte Carlo area of {z: 0 <= G_c(z) < level}.

    Samples the box [-R, R]^2 with R = e^level + 2, which contains the
    sublevel set (its transfinite diameter is e^level). The closed set,
    including the non-escaping locus G = 0, is used throughout; this
    dominates the open set and keeps downstream inequalities conservative.
    """
    c = _require_finite(c, "c")
    if level <= 0:
        raise DomainError("level must be positive")
    rng = np.random.default_rng(config.rng_seed if seed is None else seed)
    n = config.mc_samples
    r_box = math.exp(level) + 2.0
    xs = rng.uniform(-r_box, r_box, size=n)
    ys = rng.uniform(-r_box, r_box, size=n)
    inside = sublevel_mask(c, xs + 1j * ys, level, config)
    box = (2.0 * r_box) ** 2
    p = inside.mean()
    area = box * p
    stderr = box * math.sqrt(max(p * (1.0 - p), 0.0) / n)
    return AreaEstimate(float(area), float(stderr))


def _bottcher_log_many(c: complex, zs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """log B_c and B_c'/B_c on an array of points, by the convergent product.

    log B = Log z + sum_k 2^-(k+1) Log(1 + c / z_k^2) with z_k the forward
    orbit; each factor takes the principal branch, which realises the branch
    continuous from infinity along the orbit. The logarithmic derivative
    accumulates the matching terms. Entries whose orbit has grown past 1e10
    contribute only negligible further terms and are frozen; entries that hit
    a critical preimage (a vanishing factor, excluded by the domain guards)
    turn NaN and stay NaN.
    """
    z = np.asarray(zs, dtype=np.complex128)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        logb = np.log(z)
        dlogb = 1.0 / z
        v = z.copy()
        D = np.ones_like(z)
        active = np.isfinite(v) & (v != 0)
        for k in range(_MAX_BOTTCHER_TERMS):
            active = active & (np.abs(v) <= 1e10) & np.isfinite(v)
            if not active.any():
                break
            va, Da = v[active], D[active]
            w = 1.0 + c / (va * va)
            logb[active] += 2.0 ** (-k - 1) * np.log(w)
            dlogb[active] += 2.0 ** (-k - 1) * (-2.0 * c * Da / (va**3)) / w
            D[active] = 2.0 * va * Da
            v[active] = va * va + c
    return logb, dlogb


def bottcher_value(
    c: complex, z: complex, config: NumericsConfig = DEFAULT_CONFIG
) -> complex:
    """Bottcher coordinate B_c(z) on the principal domain G_c(z) > G_c(0)."""
    c = _require_finite(c, "c")
    z = _require_finite(z, "z")
    g0 = green_value(c, 0.0, config)
    gz = green_value(c, z, config)
    if gz <= g0 + config.newton_tolerance:
        raise DomainError(
            f"Bottcher coordinate only defined for G_c(z) > G_c(0): {gz} <= {g0}"
        )
    logb, _ = _bottcher_log_many(c, np.array([z]))
    return complex(np.exp(logb[0]))


def bottcher_prime(
    c: complex, z: complex, config: NumericsConfig = DEFAULT_CONFIG
) -> complex:
    """Derivative B_c'(z) on the principal domain."""
    logb, dlogb = _bottcher_log_many(c, np.array([z]))
    return complex(np.exp(logb[0]) * dlogb[0])


def inverse_bottcher_many(
    c: complex,
    ws: np.ndarray,
    config: NumericsConfig = DEFAULT_CONFIG,
    _pullback_depth: int = 0,
) -> np.ndarray:
    """Vectorised Newton solve of B_c(z) = w seeded from z = w.

    Failed entries retry from an angular neighbour that did converge, then
    from a dynamical pullback of the solution at the doubled level, which
    rescues targets close to the Julia set.
    """
    c = complex(c)
    w = np.asarray(ws, dtype=np.complex128)
    z = w.copy()
    tol = config.newton_tolerance

    def _solve(zcur: np.ndarray, active: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        zloc = zcur.copy()
        act = active.copy()
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            for _ in range(config.max_newton_steps):
                if not act.any():
                    break
                logb, dlogb = _bottcher_log_many(c, zloc[act])
                resid = np.exp(logb) - w[act]
                scale = np.maximum(1.0, np.abs(w[act]))
                done = np.abs(resid) <= tol * scale
                bprime = np.exp(logb) * dlogb
                step = np.where(bprime != 0, resid / np.where(bprime == 0, 1, bprime), 0)
                step = np.where(np.isfinite(step), step, 0)
                # Damp wild steps; the seed can start far from the basin.
                mag = np.abs(step)
                cap = 0.5 * np.maximum(1.0, np.abs(zloc[act]))
                step = np.where(mag > cap, step * (cap / np.where(mag == 0, 1, mag)), step)
                znew = zloc[act] - np.where(done, 0, step)
                # NaN entries restart from a perturbed seed instead of sticking.
                bad = ~np.isfinite(znew)
                if bad.any():
                    znew = np.where(bad, w[act] * (1.0 + 0.05j), znew)
                zloc[act] = znew
                sub = act.copy()
                sub[act] = ~done
                act = sub
        return zloc, act

    active = np.ones(w.shape, dtype=bool)
    z, active = _solve(z, active)
    if active.any() and w.size > 1:
        # Reseed failures from the nearest converged neighbour in array order.
        good = ~active
        if good.any():
            idx_good = np.flatnonzero(good)
            for i in np.flatnonzero(active):
                j = idx_good[np.argmin(np.abs(idx_good - i))]
                z[i] = z[j]
            z, active = _solve(z, active)
    if active.any() and _pullback_depth < 24:
        # Targets hugging the Julia set have intricate Newton basins; solve
        # the squared targets one level up and pull back through f_c,
        # choosing the square root whose coordinate matches.
        fails = np.flatnonzero(active)
        try:
            z_up = inverse_bottcher_many(
                c, w[fails] * w[fails], config, _pullback_depth + 1
            )
        except ConvergenceError:
            z_up = None
        if z_up is not None:
            with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
                roots = np.sqrt(z_up - c)
                for cand in (roots, -roots):
                    logb, _ = _bottcher_log_many(c, cand)
                    ok = np.abs(np.exp(logb) - w[fails]) <= 1e-6 * np.maximum(
                        1.0, np.abs(w[fails])
                    )
                    z[fails[ok]] = cand[ok]
                    active[fails[ok]] = False
            # Polish the pulled-back assignments down to full tolerance.
            polish = np.zeros(w.shape, dtype=bool)
            polish[fails] = True
            polish &= ~active
            z, bad = _solve(z, polish)
            active |= bad
    if active.any():
        raise ConvergenceError(
            f"inverse Bottcher failed for {int(active.sum())} of {w.size} targets"
        )
    return z


def inverse_bottcher(
    c: complex, w: complex, config: NumericsConfig = DEFAULT_CONFIG
) -> complex:
    """Solve B_c(z) = w by Newton iteration seeded at z = w."""
    c = _require_finite(c, "c")
    w = _require_finite(w, "w")
    g0 = green_value(c, 0.0, config)
    if abs(w) <= math.exp(g0):
        raise DomainError(f"|w| = {abs(w)} must exceed exp(G_c(0)) = {math.exp(g0)}")
    return complex(inverse_bottcher_many(c, np.array([w]), config)[0])


@dataclass(frozen=True)
class EquipotentialSample:
    """Points sampled on a level set of the potential."""

    c: complex
    level: float
    points: tuple[complex, ...] = field(repr=False)

    def __len__(self) -> int:
        return len(self.points)


def equipotential_points(
    c: complex,
    level: float,
    count: int,
    config: NumericsConfig = DEFAULT_CONFIG,
) -> EquipotentialSample:
    """Sample count points z_j with G_c(z_j) = level at uniform angles.

    Requires level > G_c(0). Level sets below the critical potential are
    reached by repeated equipotential_pullback steps on a higher sample.
    """
    c = _require_finite(c, "c")
    if level <= 0:
        raise DomainError("level must be positive")
    if count < 8:
        raise DomainError("count must be at least 8")
    r = math.exp(level)
    angles = 2.0 * math.pi * np.arange(count) / count
    ws = r * np.exp(1j * angles)
    g0 = green_value(c, 0.0, config)
    if level <= g0:
        raise DomainError(f"level {level} not above critical potential {g0}")
    zs = inverse_bottcher_many(c, ws, config)
    return EquipotentialSample(c, level, tuple(map(complex, zs)))


def equipotential_pullback(
    sample: EquipotentialSample,
    config: NumericsConfig = DEFAULT_CONFIG,
) -> EquipotentialSample:
    """One f_c-preimage step: halves the level, doubles the sample.

    Both square roots of z - c are taken for every point; the functional
    equation G(f(z)) = 2 G(z) makes the new level exact.
    """
    c = sample.c
    zs = np.asarray(sample.points, dtype=np.complex128)
    roots = np.sqrt(zs - c)
    pts = np.concatenate([roots, -roots])
    return EquipotentialSample(c, sample.level / 2.0, tuple(map(complex, pts)))
