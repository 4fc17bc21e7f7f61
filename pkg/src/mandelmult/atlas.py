"""Hyperbolic components: centers, multiplier charts, and bifurcations.

A component of period n is charted by the multiplier rho_W of its attracting
cycle; the inverse chart psi_W is realised by predictor-corrector
continuation of the augmented system

    f_c^n(b) - b = 0,      (f_c^n)'(b) - rho = 0

in the unknowns (b, c), which stays regular through rho = 1 at primitive
roots and lets satellite roots be reached by Richardson extrapolation in
1 - rho. Bifurcated orbits of period nq are seeded from the q-fold point
structure near a tangency and continued in the parameter.
"""

from __future__ import annotations

import cmath
import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .dynamics import DEFAULT_CONFIG, NumericsConfig
from .errors import (
    ContinuationError,
    ConvergenceError,
    DerivativeOverflow,
    DomainError,
    DomainViolation,
    IncompleteEnumeration,
    SeedFailure,
    StepTooLarge,
)
from .orbits import (
    PeriodicOrbit,
    _cluster,
    _polish_root,
    _product_multiplier,
    continue_orbit,
    orbit_derivatives,
)

_ROOT_EXTRAP_DELTA = 1e-3


@dataclass(frozen=True)
class InternalArgument:
    """Reduced rational angle p/q in (-1/2, 1/2], with big-integer fields."""

    p: int
    q: int

    def __post_init__(self) -> None:
        p, q = int(self.p), int(self.q)
        if q < 1:
            raise DomainError("q must be >= 1")
        p %= q
        if 2 * p > q:
            p -= q
        g = math.gcd(abs(p), q)
        if g > 1:
            p //= g
            q //= g
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @classmethod
    def parse(cls, text: str) -> "InternalArgument":
        if "/" in text:
            a, b = text.split("/", 1)
            return cls(int(a), int(b))
        return cls(int(text), 1)

    @property
    def value(self) -> Fraction:
        return Fraction(self.p, self.q)

    def __float__(self) -> float:
        return self.p / self.q if abs(self.p) < 2**52 else float(self.value)

    def __str__(self) -> str:
        return f"{self.p}/{self.q}"


@dataclass(frozen=True)
class ContinuationPath:
    """Waypoints in the multiplier plane (or its log), with a step cap."""

    waypoints: tuple[complex, ...]
    log_plane: bool = False
    step_cap: float = 0.2

    def __post_init__(self) -> None:
        pts = tuple(complex(w) for w in self.waypoints)
        object.__setattr__(self, "waypoints", pts)
        for a, b in zip(pts, pts[1:]):
            if abs(b - a) > self.step_cap + 1e-12:
                raise DomainError("consecutive waypoints exceed step_cap")
        for w in pts[1:-1]:
            rho = cmath.exp(w) if self.log_plane else w
            if abs(rho - 1.0) < 1e-4:
                raise DomainError("interior waypoint within 1e-4 of rho = 1")

    def rho_points(self) -> tuple[complex, ...]:
        if self.log_plane:
            return tuple(cmath.exp(w) for w in self.waypoints)
        return self.waypoints


@dataclass
class HyperbolicComponent:
    """Period, center (rho = 0) and root (rho = 1) of one component.

    chart_cache memoises continuation endpoints keyed by the quantised
    target multiplier; writes go through a lock so concurrent lookups on
    distinct paths stay safe.
    """

    n: int
    center: complex
    root: complex
    chart_cache: dict = field(default_factory=dict, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def cache_get(self, key):
        return self.chart_cache.get(key)

    def cache_put(self, key, value) -> None:
        with self._lock:
            self.chart_cache[key] = value


def _critical_value_and_dc(c, n):
    """f_c^n(0) and its c-derivative (vector friendly)."""
    v = np.zeros_like(c)
    e = np.zeros_like(c)
    for _ in range(n):
        e = 2.0 * v * e + 1.0
        v = v * v + c
    return v, e


def _critical_poly_roots(n: int) -> np.ndarray:
    """Companion-matrix roots of f_c^n(0) as a polynomial in c.

    Coefficients are built exactly over the integers by convolution squaring
    of P_{k+1} = P_k^2 + c; the eigenvalue roots are only Newton seeds, so
    the conditioning loss at larger n is harmless.
    """
    poly = [0, 1]  # ascending coefficients of P_1(c) = c
    for _ in range(n - 1):
        d = len(poly)
        sq = [0] * (2 * d - 1)
        for i, a in enumerate(poly):
            if a == 0:
                continue
            for j, b in enumerate(poly):
                if b:
                    sq[i + j] += a * b
        sq[1] += 1
        poly = sq
    coeffs = np.array([float(x) for x in reversed(poly)])
    return np.roots(coeffs)


def _maehly_fill(
    n: int,
    known: list[complex],
    expected: int,
    config: NumericsConfig,
    attempt: int,
) -> list[complex]:
    """Deflated Newton (Maehly) steps that repel from already-found roots.

    c' = c - P/(P' - P * sum 1/(c - r_i)) converges only to roots outside
    the known set, which recovers the handful of centers whose plain Newton
    basins are too thin to hit by sampling.
    """
    rng = np.random.default_rng((config.rng_seed, n, attempt, 0xF111))
    missing = expected - len(known)
    m = max(64, 40 * missing)
    z = rng.uniform(-2.0, 0.6, m) + 1j * rng.uniform(-1.4, 1.4, m)
    z = np.concatenate([z, _critical_poly_roots(n)]).astype(np.complex128)
    r = np.asarray(known)
    out: list[complex] = []
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        for _ in range(200):
            v, e = _critical_value_and_dc(z, n)
            defl = np.sum(1.0 / (z[:, None] - r[None, :]), axis=1)
            denom = e - v * defl
            step = np.where(np.abs(denom) > 1e-14, v / denom, 0.0)
            step = np.where(np.isfinite(step), step, 0.0)
            z = z - step
            z = np.where(np.abs(z) > 3.0, rng.uniform(-2, 0.6) + 0j, z)
    v, _ = _critical_value_and_dc(z, n)
    good = np.abs(v) <= 1e-9
    for c0 in z[good]:
        if min(abs(c0 - q) for q in known) > 1e-7:
            out.append(complex(c0))
    return _cluster(np.asarray(out), 1e-7) if out else []


def find_centers(n: int, config: NumericsConfig = DEFAULT_CONFIG) -> list[complex]:
    """All parameters with a superattracting cycle of exact period n.

    Newton on the critical-orbit polynomial f_c^n(0) from random starts in
    |c| <= 2, clustered and sieved by exact period, with the certificate
    sum over divisors d of n of the exact-d counts equal to 2^{n-1}.
    Remaining gaps are seeded from companion-matrix roots of the exact
    integer coefficients.
    """
    if not 1 <= n <= 10:
        raise DomainError("center enumeration supports periods 1..10")
    expected = 2 ** (n - 1)
    roots: list[complex] = []
    for attempt in range(10):
        rng = np.random.default_rng((config.rng_seed, n, attempt, 0xCE17E2))
        m = max(256, 24 * expected)
        starts = rng.uniform(-2.0, 0.6, m) + 1j * rng.uniform(-1.4, 1.4, m)
        if attempt >= 1:
            starts = np.concatenate([starts, _critical_poly_roots(n)])
        z = starts.astype(np.complex128)
        alive = np.ones(z.shape[0], dtype=bool)
        done = np.zeros(z.shape[0], dtype=bool)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            for _ in range(120):
                if not alive.any():
                    break
                v, e = _critical_value_and_dc(z[alive], n)
                bad = (np.abs(e) < 1e-14) | ~np.isfinite(v)
                step = np.where(bad, 0.0, v / np.where(bad, 1.0, e))
                conv = (np.abs(step) <= 1e-13 * (1.0 + np.abs(z[alive]))) & ~bad
                idx = np.flatnonzero(alive)
                z[idx] = z[idx] - step
                done[idx[conv]] = True
                dead = bad | conv | (np.abs(z[idx]) > 3.0)
                alive[idx[dead]] = False
        found = list(z[done])
        roots = _cluster(np.asarray(roots + found), 1e-7) if (roots or found) else []
        # Polish in the c-plane.
        polished = []
        for c0 in roots:
            cc = complex(c0)
            for _ in range(50):
                v, e = _critical_value_and_dc(np.array([cc]), n)
                if abs(e[0]) < 1e-14:
                    break
                step = complex(v[0] / e[0])
                cc -= step
                if abs(step) <= 1e-15 * (1.0 + abs(cc)):
                    break
            v, _ = _critical_value_and_dc(np.array([cc]), n)
            if abs(v[0]) <= 1e-9:
                polished.append(cc)
        roots = _cluster(np.asarray(polished), 1e-7) if polished else []
        if len(roots) >= expected:
            break
        if attempt >= 2 and roots:
            extra = _maehly_fill(n, roots, expected, config, attempt)
            roots = _cluster(np.asarray(roots + extra), 1e-7)
            if len(roots) >= expected:
                break
    if len(roots) != expected:
        raise IncompleteEnumeration(
            f"found {len(roots)} of {expected} critical-orbit roots at period {n}"
        )
    exact = []
    for c0 in roots:
        is_exact = True
        for d in range(1, n):
            if n % d == 0:
                v, _ = _critical_value_and_dc(np.array([c0]), d)
                if abs(v[0]) <= 1e-8:
                    is_exact = False
                    break
        if is_exact:
            exact.append(complex(c0))
    exact.sort(key=lambda c: (c.real, c.imag))
    return exact


def _chart_state(c: complex, b: complex, n: int):
    """Value, b- and c-derivatives of f^n and (f^n)' at (b, c).

    Returns (v, D, S, E, F): the iterate value, its b-derivative D with
    b-derivative S and c-derivative F, and the value's c-derivative E.
    """
    v, D, S, E, F = complex(b), 1.0 + 0j, 0j, 0j, 0j
    for _ in range(n):
        S_new = 2.0 * (D * D + v * S)
        F_new = 2.0 * (E * D + v * F)
        D_new = 2.0 * v * D
        E_new = 2.0 * v * E + 1.0
        v_new = v * v + c
        v, D, S, E, F = v_new, D_new, S_new, E_new, F_new
    return v, D, S, E, F


def _chart_newton(
    c: complex, b: complex, rho: complex, n: int, tol: float, max_iter: int = 30
):
    """Corrector for the augmented system at fixed rho; returns (b, c) or None.

    Residual scales include |c| and |rho|: the cancellation floor of
    f^n(b) - b grows with the iterate magnitudes, and a tolerance blind to
    that is unreachable in double precision for large multipliers.
    """
    for _ in range(max_iter):
        v, D, S, E, F = _chart_state(c, b, n)
        f1 = v - b
        f2 = D - rho
        scale1 = 1.0 + abs(b) + abs(c)
        scale2 = 1.0 + abs(rho) + abs(D)
        if abs(f1) <= tol * scale1 and abs(f2) <= tol * scale2:
            return b, c
        a11, a12 = D - 1.0, E
        a21, a22 = S, F
        det = a11 * a22 - a12 * a21
        if abs(det) < 1e-300:
            return None
        db = (f1 * a22 - f2 * a12) / det
        dc = (a11 * f2 - a21 * f1) / det
        b -= db
        c -= dc
        if not (math.isfinite(b.real) and math.isfinite(c.real)):
            return None
    return None


def _continue_chart(
    component: HyperbolicComponent,
    rho_targets: list[complex],
    config: NumericsConfig,
    state: tuple[complex, complex] | None = None,
) -> list[tuple[complex, complex]]:
    """Continue (b, c) through a list of multiplier waypoints in order.

    Starts from the component center (rho = 0) unless a state is supplied.
    Steps between consecutive targets subdivide adaptively, halving on
    corrector failure down to a 1e-6 floor.
    """
    n = component.n
    tol = config.newton_tolerance
    if state is None:
        b, c = 0.0 + 0j, component.center
        rho_cur = 0.0 + 0j
    else:
        b, c = state
        _, D, *_ = _chart_state(c, b, n)
        rho_cur = D
    out = []
    for target in rho_targets:
        seg_from, seg_to = rho_cur, complex(target)
        t = 0.0
        dt = 1.0
        span = abs(seg_to - seg_from)
        if span > 0:
            dt = min(1.0, 0.1 / span)
        while t < 1.0:
            t_next = min(1.0, t + dt)
            rho_mid = seg_from + (seg_to - seg_from) * t_next
            res = _chart_newton(c, b, rho_mid, n, tol)
            if res is None:
                dt /= 2.0
                if dt * span < 1e-6:
                    raise ContinuationError(
                        f"chart continuation stalled near rho = {rho_mid}"
                    )
                continue
            b, c = res
            t = t_next
            # Mild step growth after success keeps long radial paths cheap.
            dt = min(1.0 - t + 1e-16, dt * 1.6) if t < 1.0 else dt
        rho_cur = seg_to
        out.append((b, c))
    return out


def _psi_root(component: HyperbolicComponent, config: NumericsConfig) -> tuple[complex, complex]:
    """(b, c) limit at rho = 1 by Richardson extrapolation along the radius.

    c(rho) is analytic at the root even when the orbit points are not
    (satellite roots collide with the lower-period orbit like sqrt(1-rho)),
    so extrapolating c over delta = 1 - rho kills the polynomial error terms.
    """
    deltas = [_ROOT_EXTRAP_DELTA / 2**j for j in range(4)]
    states = _continue_chart(component, [1.0 - d for d in deltas], config)
    cs = [s[1] for s in states]
    # Neville elimination of delta, delta^2, delta^3 at delta = 0.
    xs = deltas
    table = list(cs)
    for level in range(1, len(xs)):
        new = []
        for i in range(len(table) - 1):
            x0, x1 = xs[i], xs[i + level]
            new.append((x0 * table[i + 1] - x1 * table[i]) / (x0 - x1))
        table = new
    b_near = states[-1][0]
    return b_near, table[0]


def build_component(
    center: complex, n: int, config: NumericsConfig = DEFAULT_CONFIG
) -> HyperbolicComponent:
    """Construct the component record for a given center, locating its root."""
    v, _ = _critical_value_and_dc(np.array([complex(center)]), n)
    if abs(v[0]) > 1e-10:
        raise DomainError(f"{center} is not a period-{n} center")
    comp = HyperbolicComponent(n=n, center=complex(center), root=0j)
    _, root = _psi_root(comp, config)
    comp.root = root
    return comp


def components_up_to(
    n_max: int, config: NumericsConfig = DEFAULT_CONFIG
) -> list[HyperbolicComponent]:
    out = []
    for n in range(1, n_max + 1):
        for c in find_centers(n, config):
            out.append(build_component(c, n, config))
    return out


def main_cardioid(config: NumericsConfig = DEFAULT_CONFIG) -> HyperbolicComponent:
    return build_component(0.0, 1, config)


def _orbit_at(
    component: HyperbolicComponent,
    b: complex,
    c: complex,
    config: NumericsConfig,
) -> PeriodicOrbit:
    """Assemble the full cycle from one chart point, polishing each image."""
    n = component.n
    pts = [b]
    z = b
    for _ in range(n - 1):
        z = _polish_root(c, n, z * z + c, config)
        pts.append(z)
    k0 = min(range(n), key=lambda k: (pts[k].real, pts[k].imag))
    ordered = tuple(pts[(k0 + k) % n] for k in range(n))
    return PeriodicOrbit(c, n, ordered, _product_multiplier(ordered))


def rho_W(
    component: HyperbolicComponent,
    c: complex,
    path: tuple[complex, ...] | None = None,
    config: NumericsConfig = DEFAULT_CONFIG,
) -> complex:
    """Multiplier of the continued orbit at parameter c.

    Continues the attracting cycle from the center along a c-plane path
    (straight by default); the value is (f^n)'(b), which stays accurate
    even when orbit points crowd a parabolic collision.
    """
    orbit = continued_orbit(component, c, path, config)
    _, D, _ = orbit_derivatives(orbit.c, orbit.points[0], component.n, config)
    return D


def continued_orbit(
    component: HyperbolicComponent,
    c: complex,
    path: tuple[complex, ...] | None = None,
    config: NumericsConfig = DEFAULT_CONFIG,
) -> PeriodicOrbit:
    """The period-n orbit continued from the center to c."""
    n = component.n
    pts = [0j]
    z = 0j
    for _ in range(n - 1):
        z = z * z + component.center
        pts.append(z)
    orbit = PeriodicOrbit(
        component.center, n, tuple(pts), _product_multiplier(pts)
    )
    waypoints = path if path is not None else (c,)
    for w in waypoints:
        orbit = continue_orbit(orbit, complex(w), config, step_cap=0.05)
    if orbit.c != complex(c):
        orbit = continue_orbit(orbit, complex(c), config, step_cap=0.05)
    return orbit


def psi_W(
    component: HyperbolicComponent,
    rho_target: complex,
    path: ContinuationPath | None = None,
    config: NumericsConfig = DEFAULT_CONFIG,
    check_domain=None,
) -> complex:
    """Parameter with rho_W(c) = rho_target, continued from rho = 0.

    check_domain, when given an Omega-style object with a contains(rho)
    method, validates every waypoint (the endpoint rho = 1 is exempt, being
    the extrapolated root limit). Targets within 1e-9 of 1 return the root.
    """
    rho_target = complex(rho_target)
    key = (round(rho_target.real, 12), round(rho_target.imag, 12), path is None)
    cached = component.cache_get(key)
    if cached is not None:
        return cached
    if path is None:
        waypoints: tuple[complex, ...] = (rho_target,)
    else:
        waypoints = path.rho_points()
    if check_domain is not None:
        for w in waypoints:
            if abs(w - 1.0) < 1e-9:
                continue
            if not check_domain.contains(w):
                raise DomainViolation(f"waypoint {w} outside the extension domain")
    if abs(rho_target - 1.0) < 1e-9:
        _, c = _psi_root(component, config)
    else:
        states = _continue_chart(component, list(waypoints), config)
        c = states[-1][1]
    component.cache_put(key, c)
    return c


def chart_point(
    component: HyperbolicComponent,
    rho_target: complex,
    config: NumericsConfig = DEFAULT_CONFIG,
) -> tuple[complex, complex]:
    """(b, c) on the chart at rho_target; root targets are extrapolated."""
    if abs(complex(rho_target) - 1.0) < 1e-9:
        return _psi_root(component, config)
    return _continue_chart(component, [complex(rho_target)], config)[-1]


def boundary_point(
    component: HyperbolicComponent,
    t: InternalArgument,
    config: NumericsConfig = DEFAULT_CONFIG,
) -> complex:
    """c(W, t), the boundary point with internal argument t, radial path."""
    theta = 2.0 * math.pi * float(t)
    return psi_W(component, cmath.exp(1j * theta), None, config)


def orbit_set_distance(A, B) -> float:
    """One-sided proximity: max over a in A of min over b in B of |a - b|."""
    A = list(A)
    B = list(B)
    if not A or not B:
        raise DomainError("both point sets must be nonempty")
    return max(min(abs(complex(a) - complex(b)) for b in B) for a in A)


def _seed_bifurcated(
    component: HyperbolicComponent,
    q: int,
    base_orbit: PeriodicOrbit,
    c1: complex,
    scale: float,
    config: NumericsConfig,
) -> PeriodicOrbit | None:
    """Try to locate the period-nq orbit near the base cycle at parameter c1."""
    n = component.n
    nq = n * q
    cloud = list(base_orbit.points)
    cloud_radius = min(0.75, 10.0 * scale + 0.05)
    for mult in (1.0, 0.5, 2.0, 4.0, 8.0):
        r = scale * mult
        if r <= 0 or r > 1.0:
            continue
        for b0 in cloud:
            for j in range(2 * q):
                seed = b0 + r * cmath.exp(1j * math.pi * (j + 0.37) / q)
                z = _polish_root(c1, nq, seed, config)
                try:
                    v, _, _ = orbit_derivatives(c1, z, nq, config)
                except DerivativeOverflow:
                    continue
                if abs(v - z) > 1e-9 * (1.0 + abs(z)):
                    continue
                # Must not be the continued n-orbit itself.
                vn, _, _ = orbit_derivatives(c1, z, n, config)
                if abs(vn - z) <= 1e-7 * (1.0 + abs(z)):
                    continue
                if min(abs(z - p) for p in cloud) > cloud_radius:
                    continue
                # Expand to the full cycle and validate it.
                pts = [z]
                w = z
                good = True
                for _ in range(nq - 1):
                    w = _polish_root(c1, nq, w * w + c1, config)
                    pts.append(w)
                    if min(abs(w - p) for p in cloud) > cloud_radius:
                        good = False
                        break
                if not good:
                    continue
                wn = _polish_root(c1, nq, pts[-1] * pts[-1] + c1, config)
                if abs(wn - z) > 1e-6:
                    continue
                if len(_cluster(np.asarray(pts), 1e-9)) != nq:
                    continue
                k0 = min(range(nq), key=lambda k: (pts[k].real, pts[k].imag))
                ordered = tuple(pts[(k0 + k) % nq] for k in range(nq))
                return PeriodicOrbit(c1, nq, ordered, _product_multiplier(ordered))
    return None


def _track_bifurcated(
    component: HyperbolicComponent,
    t0: InternalArgument,
    start: PeriodicOrbit,
    base_start: PeriodicOrbit,
    s_start: complex,
    s_target: complex,
    config: NumericsConfig,
    chart_state0: tuple[complex, complex] | None = None,
) -> PeriodicOrbit:
    """Continue the period-nq orbit along the radial s segment.

    s parametrises the bifurcation through rho = rho0 + s^q. Offsets of the
    nq points from their base-cycle anchors scale like s to first order, so
    each step predicts points by the complex ratio s_new/s_old and corrects
    with Newton at period nq; a corrected point straying from its prediction
    by a sizeable fraction of its offset signals a collapse onto the base
    cycle, and the step halves.
    """
    n, q = component.n, t0.q
    nq = n * q
    rho0 = cmath.exp(2j * math.pi * float(t0))
    pts = list(start.points)
    base = base_start
    s = s_start
    sigma = 0.0
    dsig = 0.1
    chart_state = chart_state0
    while sigma < 1.0:
        sig_next = min(1.0, sigma + dsig)
        s_new = s_start + (s_target - s_start) * sig_next
        rho_new = rho0 + s_new**q
        states = _continue_chart(
            component, [rho_new], config,
            state=chart_state if chart_state is not None else None,
        )
        b_chart, c_new = states[-1]
        base_new = continue_orbit(base, c_new, config, step_cap=0.05)
        anchors = base_new.points
        ratio = s_new / s
        ok = True
        new_pts = []
        for z in pts:
            a = min(anchors, key=lambda p: abs(z - p))
            offset = (z - a) * ratio
            pred = a + offset
            zc = _polish_root(c_new, nq, pred, config)
            try:
                v, _, _ = orbit_derivatives(c_new, zc, nq, config)
            except DerivativeOverflow:
                ok = False
                break
            if abs(v - zc) > 1e-9 * (1.0 + abs(zc)) or abs(zc - pred) > 0.6 * abs(offset):
                ok = False
                break
            new_pts.append(zc)
        if not ok:
            dsig /= 2.0
            if dsig < 1e-5:
                raise ContinuationError(
                    f"bifurcated-orbit tracking stalled near c = {c_new}"
                )
            continue
        pts = new_pts
        base = base_new
        s = s_new
        sigma = sig_next
        chart_state = (b_chart, c_new)
        dsig = min(1.0 - sigma + 1e-16, dsig * 1.5)
    if len(_cluster(np.asarray(pts), 1e-9)) != nq:
        raise ContinuationError("tracked orbit points merged")
    k0 = min(range(nq), key=lambda k: (pts[k].real, pts[k].imag))
    ordered = tuple(pts[(k0 + k) % nq] for k in range(nq))
    return PeriodicOrbit(base.c, nq, ordered, _product_multiplier(ordered))


def bifurcated_orbit(
    component: HyperbolicComponent,
    t0: InternalArgument,
    c: complex,
    config: NumericsConfig = DEFAULT_CONFIG,
) -> PeriodicOrbit:
    """The period-nq orbit born at the internal-argument-t0 tangency, at c.

    The base cycle is continued to c to read off the multiplier rho(c);
    writing rho - rho0 = s^q selects the radial entry point s1 on the same
    ray as s(c), where the q-fold structure identifies the orbit, and the
    orbit is then tracked along s to the target. The ray construction keeps
    the parameter path clear of the tangency.
    """
    if t0.p == 0:
        raise DomainError("t0 must be nonzero")
    q = t0.q
    nq = component.n * q
    c = complex(c)
    rho0 = cmath.exp(2j * math.pi * float(t0))
    c0 = boundary_point(component, t0, config)
    if abs(c - c0) < 1e-6:
        raise DomainError("target parameter within 1e-6 of the tangency")
    b0, _ = chart_point(component, rho0, config)
    base = _orbit_at(component, b0, c0, config)
    at_c = continue_orbit(base, c, config, step_cap=0.05)
    _, rho_c, _ = orbit_derivatives(c, at_c.points[0], component.n, config)
    if abs(rho_c - rho0) < 1e-14:
        raise DomainError("target parameter multiplier coincides with the tangency")
    s_target = (rho_c - rho0) ** (1.0 / q)
    last_err: Exception | None = None
    for s1_mag in (0.1, 0.05, 0.2, 0.35):
        s1 = s_target * min(1.0, s1_mag / abs(s_target))
        if abs(s1 - s_target) < 1e-12:
            s1 = s_target
        rho1 = rho0 + s1**q
        try:
            b1, c1 = chart_point(component, rho1, config)
            base1 = continue_orbit(base, c1, config, step_cap=0.02)
            found = _seed_bifurcated(component, q, base1, c1, abs(s1), config)
            if found is None:
                raise SeedFailure(f"no period-{nq} cycle found near {c1}")
            if s1 == s_target:
                return found
            return _track_bifurcated(
                component, t0, found, base1, s1, s_target, config,
                chart_state0=(b1, c1),
            )
        except (SeedFailure, ConvergenceError, StepTooLarge, ContinuationError) as exc:
            last_err = exc
            continue
    raise SeedFailure(
        f"could not realise the period-{nq} orbit at c = {c}"
    ) from last_err


def bifurcation_child(
    component: HyperbolicComponent,
    t0: InternalArgument,
    config: NumericsConfig = DEFAULT_CONFIG,
) -> HyperbolicComponent:
    """The period-nq component attached at internal argument t0.

    Its root is the tangency itself. The center is found by Newton on the
    critical-orbit equation seeded from the chart linearisation
    lambda(rho) ~ 1 - q^2 (rho - rho0)/rho0 = 0.
    """
    if t0.p == 0:
        raise DomainError("t0 must be nonzero")
    q = t0.q
    nq = component.n * q
    rho0 = cmath.exp(2j * math.pi * float(t0))
    root = boundary_point(component, t0, config)
    last: Exception | None = None
    for kappa in (1.0, 0.8, 1.25, 0.6):
        rho_seed = rho0 * (1.0 + kappa / q**2)
        try:
            c_seed = psi_W(component, rho_seed, None, config)
        except ContinuationError as exc:
            last = exc
            continue
        cc = complex(c_seed)
        ok = False
        for _ in range(80):
            v, e = _critical_value_and_dc(np.array([cc]), nq)
            if abs(e[0]) < 1e-300:
                break
            step = complex(v[0] / e[0])
            cc -= step
            if abs(step) <= 1e-15 * (1.0 + abs(cc)):
                ok = True
                break
        if not ok:
            continue
        v, _ = _critical_value_and_dc(np.array([cc]), nq)
        if abs(v[0]) > 1e-9:
            continue
        exact = True
        for d in range(1, nq):
            if nq % d == 0:
                vd, _ = _critical_value_and_dc(np.array([cc]), d)
                if abs(vd[0]) <= 1e-8:
                    exact = False
                    break
        if not exact:
            continue
        if abs(cc - root) > 4.0 * abs(c_seed - root) + 1e-6:
            continue
        child = HyperbolicComponent(n=nq, center=cc, root=root)
        return child
    raise SeedFailure(
        f"could not locate the period-{nq} child center at t0 = {t0}"
    ) from last


def lambda_map(
    component: HyperbolicComponent,
    t0: InternalArgument,
    rho: complex,
    config: NumericsConfig = DEFAULT_CONFIG,
) -> complex:
    """Multiplier of the bifurcated orbit at c = psi_W(rho).

    Defined on the disk of radius (9/10)^q around exp(2 pi i t0); at the
    tangency itself the bifurcated cycle degenerates onto the base orbit and
    the value is (f^{nq})'(b) = rho0^q = 1.
    """
    rho = complex(rho)
    rho0 = cmath.exp(2j * math.pi * float(t0))
    if abs(rho - rho0) > 0.9**t0.q + 1e-12:
        raise DomainError("rho outside the bifurcation disk")
    nq = component.n * t0.q
    if abs(rho - rho0) < 1e-12:
        b, c0 = chart_point(component, rho0, config)
        _, D, _ = orbit_derivatives(c0, b, nq, config)
        return D
    c = psi_W(component, rho, None, config)
    orbit = bifurcated_orbit(component, t0, c, config)
    _, D, _ = orbit_derivatives(orbit.c, orbit.points[0], nq, config)
    return D


@dataclass(frozen=True)
class DLambdaCheck:
    numeric: complex
    formula: complex
    rel_err: float


def dlambda_check(
    component: HyperbolicComponent,
    t0: InternalArgument,
    h: float = 1e-3,
    config: NumericsConfig = DEFAULT_CONFIG,
) -> DLambdaCheck:
    """Finite-difference d lambda / d rho at the tangency versus -q^2/rho0."""
    if t0.q > 8:
        raise DomainError("q must stay <= 8 for tractable bifurcated periods")
    if h > 1e-3:
        raise DomainError("h must be <= 1e-3")
    rho0 = cmath.exp(2j * math.pi * float(t0))
    vals = {}
    for d in (h, -h, 1j * h, -1j * h):
        vals[d] = lambda_map(component, t0, rho0 + d, config)
    numeric = (vals[h] - vals[-h] - 1j * vals[1j * h] + 1j * vals[-1j * h]) / (4.0 * h)
    formula = -(t0.q**2) / rho0
    rel = abs(numeric - formula) / abs(formula)
    return DLambdaCheck(numeric, formula, rel)


def covering_check(
    component: HyperbolicComponent,
    t0: InternalArgument,
    r: float,
    targets,
    config: NumericsConfig = DEFAULT_CONFIG,
    residual_tol: float = 1e-9,
) -> bool:
    """Solve lambda(rho) = target inside B(rho0, r) for each target value.

    Targets must lie in the covered disk B(1, q^2 r / 16). A secant update
    on the local slope, seeded from the linearisation
    rho = rho0 - (target - 1) rho0 / q^2, converges for every target that
    the covering property promises.
    """
    q = t0.q
    if r > 0.9**q + 1e-12:
        raise DomainError("r must be at most (9/10)^q")
    rho0 = cmath.exp(2j * math.pi * float(t0))
    for target in targets:
        target = complex(target)
        if abs(target - 1.0) > q * q * r / 16.0 + 1e-12:
            raise DomainError(f"target {target} outside the covered disk")
        slope = -(q * q) / rho0
        rho = rho0 - (target - 1.0) * rho0 / (q * q)
        val = lambda_map(component, t0, rho, config)
        ok = False
        for _ in range(40):
            resid = val - target
            if abs(resid) <= residual_tol:
                ok = True
                break
            step = resid / slope
            cap = 0.5 * r
            if abs(step) > cap:
                step *= cap / abs(step)
            rho_new = rho - step
            if abs(rho_new - rho0) > r * (1.0 + 1e-6):
                rho_new = rho0 + (rho_new - rho0) * (r / abs(rho_new - rho0))
            val_new = lambda_map(component, t0, rho_new, config)
            if abs(rho_new - rho) > 1e-300:
                slope = (val_new - val) / (rho_new - rho)
            rho, val = rho_new, val_new
        if not ok:
            return False
    return True
