"""Periodic orbits, multipliers, and the exact derivative identities.

The orbit function A(z) = sum_k [(z-b_k)^-2 + gamma_k (z-b_k)^-1] with
gamma_k = (f^n)''(b_k) / (rho (1 - rho)) satisfies the transfer-operator
identity A = T A + 2 (rho'/rho) T 1, where T g(z) = sum_{f(w)=z} g(w)/f'(w)^2.
Its expansion at infinity encodes rho'/rho and -n + 2c rho'/rho, and the
contour integral of A f^n / (2 pi i) over an equipotential equals
n rho - n + 2 c rho'/rho. These identities power every consistency check
in this module.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .dynamics import (
    DEFAULT_CONFIG,
    NumericsConfig,
    _bottcher_log_many,
    green_value,
    inverse_bottcher_many,
    orbit_derivatives,
)
from .errors import (
    BranchPointProximity,
    ContourTooClose,
    ConvergenceError,
    DegenerateMultiplier,
    DerivativeOverflow,
    DomainError,
    IncompleteEnumeration,
    PoleProximity,
    StepTooLarge,
)

_CLUSTER_TOL = 1e-7
_EXACT_PERIOD_TOL = 1e-8
_PARABOLIC_PAIR_TOL = 1e-6


@dataclass(frozen=True)
class PeriodicOrbit:
    """A periodic orbit of f_c in dynamical order: f(b_k) = b_{k+1 mod n}.

    points[0] is the canonical representative, the lexicographically smallest
    (re, im) point of the cycle. rho is the multiplier 2^n b_1 ... b_n.
    """

    c: complex
    n: int
    points: tuple[complex, ...]
    rho: complex

    @property
    def is_repelling(self) -> bool:
        return abs(self.rho) > 1.0

    @property
    def is_attracting(self) -> bool:
        return abs(self.rho) < 1.0


@dataclass(frozen=True)
class OrbitDerivativeData:
    """Per-point gamma coefficients and the multiplier derivative d rho/dc."""

    gammas: tuple[complex, ...]
    rho_prime: complex


@dataclass(frozen=True)
class OrbitEnumeration:
    """All cycles of f_c whose period divides n, with the count certificate."""

    c: complex
    n: int
    orbits_by_period: dict[int, tuple[PeriodicOrbit, ...]]
    parabolic_flagged: bool
    total_points: int

    def exact(self, d: int) -> tuple[PeriodicOrbit, ...]:
        return self.orbits_by_period.get(d, ())


def _product_multiplier(points: np.ndarray | tuple[complex, ...]) -> complex:
    rho = complex(1.0)
    for b in points:
        rho *= 2.0 * complex(b)
    return rho


def _newton_fixed_points(
    c: complex, n: int, starts: np.ndarray, config: NumericsConfig
) -> np.ndarray:
    """Vectorised Newton for fixed points of f^n; returns converged points."""
    z = np.asarray(starts, dtype=np.complex128).copy()
    r_max = 3.0 * (2.0 + abs(c)) + 4.0
    alive = np.ones(z.shape, dtype=bool)
    converged = np.zeros(z.shape, dtype=bool)
    for _ in range(80):
        if not alive.any():
            break
        v = z[alive].copy()
        D = np.ones_like(v)
        blown = np.zeros(v.shape, dtype=bool)
        for _ in range(n):
            D = 2.0 * v * D
            v = v * v + c
            big = np.abs(v) > 1e30
            if big.any():
                blown |= big
                v = np.where(big, 1e30, v)
                D = np.where(big, 1e30, D)
        F = v - z[alive]
        Fp = D - 1.0
        bad = (np.abs(Fp) < 1e-14) | blown
        step = np.where(bad, 0.0, F / np.where(bad, 1.0, Fp))
        done = (np.abs(step) <= 1e-13 * (1.0 + np.abs(z[alive]))) & ~bad
        znew = z[alive] - step
        idx = np.flatnonzero(alive)
        z[idx] = znew
        converged[idx[done]] = True
        dead = bad | done | (np.abs(znew) > r_max) | ~np.isfinite(znew)
        alive[idx[dead]] = False
    return z[converged]


def _backward_cloud(
    c: complex, count: int, rng: np.random.Generator
) -> np.ndarray:
    """Points near the Julia set via random inverse branches of f_c.

    Inverse iteration z -> +/- sqrt(z - c) contracts toward the Julia set,
    where every periodic point lives; seeding Newton there is far more
    effective than area-filling grids once the period is large.
    """
    z = rng.uniform(-1.0, 1.0, count) + 1j * rng.uniform(-1.0, 1.0, count)
    z = z + 0.1
    for _ in range(24):
        signs = np.where(rng.uniform(size=count) < 0.5, 1.0, -1.0)
        z = signs * np.sqrt(z - c)
    return z


def _cluster(points: np.ndarray, tol: float) -> list[complex]:
    """Grid-hash clustering; O(N) for well separated roots.

    Cell size equals the merge tolerance, so any pair within tol lands in
    the same or an adjacent cell and is always detected.
    """
    cells: dict[tuple[int, int], list[complex]] = {}
    out: list[complex] = []
    inv = 1.0 / tol
    for p in points:
        p = complex(p)
        ci = int(math.floor(p.real * inv))
        cj = int(math.floor(p.imag * inv))
        hit = False
        for di in (-1, 0, 1):
            for dj in (-1, 0, 1):
                for q in cells.get((ci + di, cj + dj), ()):
                    if abs(p - q) < tol:
                        hit = True
                        break
                if hit:
                    break
            if hit:
                break
        if not hit:
            cells.setdefault((ci, cj), []).append(p)
            out.append(p)
    return out


def _polish_root(c: complex, n: int, b: complex, config: NumericsConfig) -> complex:
    z = complex(b)
    for _ in range(60):
        try:
            v, D, _ = orbit_derivatives(c, z, n, config)
        except DerivativeOverflow:
            # Wandered into the escaping region; the caller's residual
            # check rejects the returned point.
            return z
        denom = D - 1.0
        if abs(denom) < 1e-14:
            break
        step = (v - z) / denom
        z = z - step
        if abs(step) <= 1e-15 * (1.0 + abs(z)):
            break
    return z


def _start_points(c: complex, n: int, attempt: int, config: NumericsConfig) -> np.ndarray:
    rng = np.random.default_rng((config.rng_seed, n, attempt, 0xB0B))
    radius = 2.0 + abs(c)
    n_grid = max(96, 4 * 2**n)
    rr = radius * np.sqrt(rng.uniform(0.02, 1.0, n_grid))
    th = rng.uniform(0.0, 2.0 * math.pi, n_grid)
    disk = rr * np.exp(1j * th)
    n_circ = max(32, 2**n)
    circ_th = 2.0 * math.pi * (np.arange(n_circ) + 0.31 * (attempt + 1)) / n_circ
    circle = (0.75 * radius) * np.exp(1j * circ_th)
    cloud = _backward_cloud(c, max(128, 6 * 2**n), rng)
    return np.concatenate([disk, circle, cloud])


def _close_under_dynamics(
    c: complex, n: int, roots: list[complex], config: NumericsConfig
) -> list[complex]:
    """Add the forward orbit of every root, polished at period n.

    Any fixed point of f^n carries its whole cycle; one converged Newton hit
    per cycle therefore yields all its points.
    """
    tol = _CLUSTER_TOL
    cells: dict[tuple[int, int], list[complex]] = {}
    inv = 1.0 / tol

    def _seen(p: complex) -> bool:
        ci, cj = int(math.floor(p.real * inv)), int(math.floor(p.imag * inv))
        for di in (-1, 0, 1):
            for dj in (-1, 0, 1):
                for q in cells.get((ci + di, cj + dj), ()):
                    if abs(p - q) < tol:
                        return True
        return False

    def _add(p: complex) -> None:
        ci, cj = int(math.floor(p.real * inv)), int(math.floor(p.imag * inv))
        cells.setdefault((ci, cj), []).append(p)

    out: list[complex] = []
    queue = list(roots)
    while queue:
        p = queue.pop()
        if _seen(p):
            continue
        _add(p)
        out.append(p)
        q = _polish_root(c, n, p * p + c, config)
        v, _, _ = orbit_derivatives(c, q, n, config)
        if abs(v - q) <= 1e-9 * (1.0 + abs(q)) and not _seen(q):
            queue.append(q)
    return out


def enumerate_orbits(
    c: complex, n: int, config: NumericsConfig = DEFAULT_CONFIG
) -> OrbitEnumeration:
    """Find every cycle whose period divides n, with a counting certificate.

    Newton from quasi-random starts, grid clustering at 1e-7, dynamical
    grouping into cycles, and the certificate sum_{d|n} d * (#exact-d cycles)
    = 2^n counting multiplicity. A deficit explained by a near-parabolic
    multiplier (|rho - 1| small, merged roots) is flagged rather than fatal.
    """
    c = complex(c)
    if not 1 <= n <= 12:
        raise DomainError("period must be between 1 and 12")
    expected = 2**n
    roots: list[complex] = []
    max_restarts = 8
    for attempt in range(max_restarts):
        starts = _start_points(c, n, attempt, config)
        found = _newton_fixed_points(c, n, starts, config)
        if roots:
            found = np.concatenate([np.asarray(roots), found])
        merged = _cluster(np.asarray(found), _CLUSTER_TOL)
        polished = []
        for b in merged:
            z = _polish_root(c, n, b, config)
            v, _, _ = orbit_derivatives(c, z, n, config)
            if abs(v - z) <= 1e-9 * (1.0 + abs(z)):
                polished.append(z)
        roots = _close_under_dynamics(c, n, polished, config)
        if len(roots) > expected:
            # Parabolic multiple roots converge slowly and shed clouds of
            # pseudo-roots within their |residual|^(1/multiplicity) basin;
            # a coarse merge collapses each cloud to one representative.
            roots = _cluster(np.asarray(roots), 1e-4)
        if len(roots) >= expected:
            break

    # Group into cycles by following the dynamics.
    root_arr = np.asarray(roots)
    assigned = [False] * len(roots)
    cycles: list[list[complex]] = []
    for i, b in enumerate(roots):
        if assigned[i]:
            continue
        cyc = [b]
        assigned[i] = True
        z = b * b + c
        while True:
            d = np.abs(root_arr - z)
            j = int(np.argmin(d))
            if d[j] > 1e-5 * (1.0 + abs(z)):
                # Forward image missing from the root set; polish it in.
                z = _polish_root(c, n, z, config)
                d = np.abs(root_arr - z)
                j = int(np.argmin(d))
            if abs(root_arr[j] - b) < _CLUSTER_TOL * (1.0 + abs(b)):
                break
            if assigned[j]:
                break
            cyc.append(complex(root_arr[j]))
            assigned[j] = True
            z = root_arr[j] * root_arr[j] + c
            if len(cyc) > n:
                break
        cycles.append(cyc)

    by_period: dict[int, list[PeriodicOrbit]] = {}
    for cyc in cycles:
        d = len(cyc)
        if n % d != 0:
            continue
        # Exact period check on the representative against proper divisors.
        b0 = cyc[0]
        exact = True
        for dd in range(1, d):
            if d % dd == 0:
                v, _, _ = orbit_derivatives(c, b0, dd, config)
                if abs(v - b0) <= _EXACT_PERIOD_TOL:
                    exact = False
                    break
        if not exact:
            continue
        k0 = min(range(d), key=lambda k: (cyc[k].real, cyc[k].imag))
        ordered = tuple(cyc[(k0 + k) % d] for k in range(d))
        rho = _product_multiplier(ordered)
        by_period.setdefault(d, []).append(PeriodicOrbit(c, d, ordered, rho))

    total = sum(d * len(v) for d, v in by_period.items())
    parabolic = False
    if total != expected:
        near_parab = any(
            abs(o.rho - 1.0) < 1e-3 or abs(o.rho**(n // o.n) - 1.0) < 1e-3
            for v in by_period.values()
            for o in v
        )
        close_pair = False
        for v in by_period.values():
            pts = [o.points[0] for o in v]
            for a in range(len(pts)):
                for bI in range(a + 1, len(pts)):
                    if abs(pts[a] - pts[bI]) < _PARABOLIC_PAIR_TOL:
                        close_pair = True
        if near_parab or close_pair:
            parabolic = True
        else:
            raise IncompleteEnumeration(
                f"found {total} of {expected} fixed points of f^{n} at c={c}"
            )
    return OrbitEnumeration(
        c, n, {d: tuple(v) for d, v in by_period.items()}, parabolic, total
    )


def find_periodic_orbits(
    c: complex, n: int, config: NumericsConfig = DEFAULT_CONFIG
) -> list[PeriodicOrbit]:
    """All exact-period-n orbits of f_c, one canonical representative each."""
    return list(enumerate_orbits(c, n, config).exact(n))


def gamma_coeffs(
    orbit: PeriodicOrbit, config: NumericsConfig = DEFAULT_CONFIG
) -> OrbitDerivativeData:
    """gamma_k = (f^n)''(b_k) / (rho(1-rho)) and rho' = rho * sum gamma_k."""
    rho = orbit.rho
    if abs(rho) < 1e-8 or abs(rho - 1.0) < 1e-8:
        raise DegenerateMultiplier(f"multiplier {rho} within 1e-8 of 0 or 1")
    gammas = []
    for b in orbit.points:
        _, _, second = orbit_derivatives(orbit.c, b, orbit.n, config)
        gammas.append(second / (rho * (1.0 - rho)))
    rho_prime = rho * sum(gammas)
    return OrbitDerivativeData(tuple(gammas), rho_prime)


def continue_orbit(
    orbit: PeriodicOrbit,
    c_new: complex,
    config: NumericsConfig = DEFAULT_CONFIG,
    step_cap: float = 0.05,
    jump_cap: float = 0.1,
) -> PeriodicOrbit:
    """Continue the orbit to a nearby parameter by pointwise Newton.

    Walks the straight segment in steps of at most step_cap, correcting each
    orbit point as a fixed point of f^n. Raises StepTooLarge when a corrected
    point moves more than jump_cap in one step, ConvergenceError when Newton
    stalls even after step halving.
    """
    c0 = orbit.c
    c1 = complex(c_new)
    pts = list(orbit.points)
    n = orbit.n
    t = 0.0
    dt = min(1.0, step_cap / max(abs(c1 - c0), 1e-300))
    while t < 1.0:
        t_next = min(1.0, t + dt)
        c_mid = c0 + (c1 - c0) * t_next
        new_pts = []
        failure: Exception | None = None
        for b in pts:
            z = _polish_root(c_mid, n, b, config)
            try:
                v, _, _ = orbit_derivatives(c_mid, z, n, config)
            except DerivativeOverflow:
                failure = ConvergenceError(f"orbit escaped during step near c={c_mid}")
                break
            if abs(v - z) > 1e-9 * (1.0 + abs(z)):
                failure = ConvergenceError(f"orbit correction stalled near c={c_mid}")
                break
            if abs(z - b) > jump_cap:
                failure = StepTooLarge(
                    f"orbit point jumped {abs(z - b):.3g} > {jump_cap} near c={c_mid}"
                )
                break
            new_pts.append(z)
        if failure is not None:
            dt /= 2.0
            if dt < 1e-6:
                raise failure
            continue
        pts = new_pts
        t = t_next
    k0 = min(range(n), key=lambda k: (pts[k].real, pts[k].imag))
    ordered = tuple(pts[(k0 + k) % n] for k in range(n))
    return PeriodicOrbit(c1, n, ordered, _product_multiplier(ordered))


def rho_prime_fd(
    orbit: PeriodicOrbit,
    h: float = 1e-5,
    config: NumericsConfig = DEFAULT_CONFIG,
) -> complex:
    """Finite-difference oracle for d rho / dc.

    Continues the orbit to c +/- h and c +/- ih and applies the 4-point
    stencil [rho(c+h) - rho(c-h) - i rho(c+ih) + i rho(c-ih)] / (4h), which
    is exact through fourth order for holomorphic rho(c). Used only as an
    independent cross-check of gamma_coeffs.
    """
    if abs(orbit.rho - 1.0) < 1e-6:
        raise DegenerateMultiplier("orbit does not continue holomorphically at rho = 1")
    c = orbit.c
    vals = {}
    for dc in (h, -h, 1j * h, -1j * h):
        cont = continue_orbit(orbit, c + dc, config, step_cap=max(h, 1e-4))
        vals[dc] = cont.rho
    return (vals[h] - vals[-h] - 1j * vals[1j * h] + 1j * vals[-1j * h]) / (4.0 * h)


def identity_residual(orbit: PeriodicOrbit, data: OrbitDerivativeData) -> float:
    """Normalised residual of sum b_k gamma_k = -n + 2c rho'/rho."""
    lhs = sum(b * g for b, g in zip(orbit.points, data.gammas))
    rhs = -orbit.n + 2.0 * orbit.c * data.rho_prime / orbit.rho
    return abs(lhs - rhs) / (1.0 + abs(orbit.n))


def a_function(
    orbit: PeriodicOrbit, data: OrbitDerivativeData, z: complex
) -> complex:
    """The orbit pole function A(z) = sum (z-b_k)^-2 + gamma_k (z-b_k)^-1."""
    z = complex(z)
    total = 0.0 + 0.0j
    for b, g in zip(orbit.points, data.gammas):
        d = z - b
        if abs(d) < 1e-9:
            raise PoleProximity(f"z = {z} within 1e-9 of orbit point {b}")
        total += 1.0 / (d * d) + g / d
    return total


def a_function_many(
    orbit: PeriodicOrbit, data: OrbitDerivativeData, zs: np.ndarray
) -> np.ndarray:
    z = np.asarray(zs, dtype=np.complex128)
    total = np.zeros_like(z)
    for b, g in zip(orbit.points, data.gammas):
        d = z - b
        total += 1.0 / (d * d) + g / d
    return total


def ruelle_residual(
    orbit: PeriodicOrbit,
    data: OrbitDerivativeData,
    z: complex,
    config: NumericsConfig = DEFAULT_CONFIG,
) -> float:
    """Pointwise residual |A(z) - TA(z) - 2 (rho'/rho) T1(z)|.

    The preimages of z are w = +/- sqrt(z - c) and f'(w)^2 = 4 w^2 = 4(z-c).
    The identity is exact; the residual measures floating error only.
    """
    c = orbit.c
    z = complex(z)
    if abs(z - c) < 1e-8:
        raise BranchPointProximity(f"z = {z} within 1e-8 of the critical value {c}")
    w = cmath.sqrt(z - c)
    for p in (z, w, -w):
        for b in orbit.points:
            if abs(p - b) < 1e-6:
                raise PoleProximity(
                    f"evaluation point {p} within 1e-6 of orbit point {b}"
                )
    ta = (a_function(orbit, data, w) + a_function(orbit, data, -w)) / (4.0 * (z - c))
    t1 = 2.0 / (4.0 * (z - c))
    lhs = a_function(orbit, data, z)
    return abs(lhs - ta - 2.0 * (data.rho_prime / orbit.rho) * t1)


def contour_residue(
    orbit: PeriodicOrbit,
    data: OrbitDerivativeData,
    level: float,
    count: int = 512,
    config: NumericsConfig = DEFAULT_CONFIG,
) -> complex:
    """(1/2 pi i) times the integral of A(z) f^n(z) dz over {G_c = level}.

    The contour is parametrised through the inverse Bottcher coordinate at
    uniform angles; dz = i w dz/dw = i w / B'(z). The uniform trapezoid rule
    in the angle is spectrally accurate for this analytic integrand, and the
    value must equal n rho - n + 2c rho'/rho.

    |f^n| grows like e^{2^n level} on the contour while the residue itself
    is orbit-sized, so double precision limits useful levels to roughly
    2^n * level < 25; pick levels just above the critical potential for
    higher periods. In the other direction the trapezoid error decays like
    e^{-count (level - G_c(0))}, so levels hugging the critical potential
    need proportionally more points.
    """
    c = orbit.c
    if count < 256:
        raise DomainError("count must be at least 256")
    g0 = green_value(c, 0.0, config)
    if level <= g0:
        raise DomainError(f"level {level} must exceed the critical potential {g0}")
    r = math.exp(level)
    angles = 2.0 * math.pi * np.arange(count) / count
    ws = r * np.exp(1j * angles)
    zs = inverse_bottcher_many(c, ws, config)
    pts = np.asarray(orbit.points)
    min_dist = np.min(np.abs(zs[:, None] - pts[None, :]))
    if min_dist < 1e-3:
        raise ContourTooClose(f"contour approaches the orbit to {min_dist:.3e}")
    logb, dlogb = _bottcher_log_many(c, zs)
    bprime = np.exp(logb) * dlogb
    fa = a_function_many(orbit, data, zs)
    fn = zs.copy()
    for _ in range(orbit.n):
        fn = fn * fn + c
    integrand = fa * fn * (1j * ws / bprime)
    integral = integrand.mean() * 2.0 * math.pi
    return complex(integral / (2.0j * math.pi))


def sample_repelling_orbits(
    count: int,
    n_max: int,
    seed: int = 0,
    config: NumericsConfig = DEFAULT_CONFIG,
    rho_max: float | None = None,
    min_rho_dist_1: float = 0.0,
    min_rho_abs: float = 0.0,
    per_parameter: int = 2,
    c_box: tuple[float, float, float, float] = (-2.0, 0.6, -1.3, 1.3),
) -> list[PeriodicOrbit]:
    """Reproducible batch of repelling orbits over random (c, n <= n_max).

    Orbits are filtered by |rho| > 1, an optional upper band |rho| < rho_max,
    and clearance of rho from 1 and 0; at most per_parameter orbits are kept
    per drawn parameter so the batch spreads over the plane. Enumerations
    that fail their counting certificate are simply skipped.
    """
    rng = np.random.default_rng(seed)
    out: list[PeriodicOrbit] = []
    attempts = 0
    while len(out) < count and attempts < 80 * count:
        attempts += 1
        c = complex(
            rng.uniform(c_box[0], c_box[1]), rng.uniform(c_box[2], c_box[3])
        )
        n = int(rng.integers(1, n_max + 1))
        try:
            orbits = find_periodic_orbits(c, n, config)
        except IncompleteEnumeration:
            continue
        kept = 0
        for o in orbits:
            if not o.is_repelling:
                continue
            if rho_max is not None and not abs(o.rho) < rho_max:
                continue
            if abs(o.rho - 1.0) <= min_rho_dist_1:
                continue
            if abs(o.rho) <= min_rho_abs:
                continue
            out.append(o)
            kept += 1
            if kept >= per_parameter or len(out) >= count:
                break
    return out[:count]


@dataclass(frozen=True)
class ElBoundCheck:
    lhs: float
    rhs: float
    holds: bool


def el_bound_check(
    orbit: PeriodicOrbit, config: NumericsConfig = DEFAULT_CONFIG
) -> ElBoundCheck:
    """Check G_c(0) <= (1/n) log|rho| for a repelling orbit."""
    if not orbit.is_repelling:
        raise DomainError("bound applies to repelling orbits only")
    lhs = green_value(orbit.c, 0.0, config)
    rhs = math.log(abs(orbit.rho)) / orbit.n
    return ElBoundCheck(lhs, rhs, lhs <= rhs + 1e-9)
