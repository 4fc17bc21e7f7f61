"""Component centers, charts, boundary points, and bifurcation structure."""

from __future__ import annotations

import cmath
import math

import numpy as np
import pytest

from mandelmult import atlas as at
from mandelmult.dynamics import DEFAULT_CONFIG
from mandelmult.errors import DomainError, DomainViolation
from mandelmult.orbits import continue_orbit
from mandelmult.regions import omega_for_period

RABBIT_CENTER = -0.1225611668766536 + 0.7448617666197442j  # root of c^3+2c^2+c+1


def test_internal_argument_normalisation():
    t = at.InternalArgument(5, 10)
    assert (t.p, t.q) == (1, 2)
    t = at.InternalArgument(2, 3)
    assert (t.p, t.q) == (-1, 3)
    t = at.InternalArgument(7, 3)
    assert (t.p, t.q) == (1, 3)
    assert str(at.InternalArgument.parse("-2/5")) == "-2/5"
    with pytest.raises(DomainError):
        at.InternalArgument(1, 0)


def test_find_centers_small_periods():
    assert at.find_centers(1) == [0j]
    assert at.find_centers(2) == [-1 + 0j]
    got = at.find_centers(3)
    # Roots of c^3 + 2c^2 + c + 1.
    assert len(got) == 3
    assert min(abs(c - (-1.7548776662466927)) for c in got) < 1e-10
    assert min(abs(c - RABBIT_CENTER) for c in got) < 1e-10


@pytest.mark.parametrize(
    "n,count", [(4, 6), (5, 15), (6, 27), (7, 63), (8, 120)]
)
def test_find_centers_counts(n, count):
    centers = at.find_centers(n)
    assert len(centers) == count
    # spot check exactness of the period
    for c in centers[:5]:
        v, _ = at._critical_value_and_dc(np.array([c]), n)
        assert abs(v[0]) < 1e-9


def test_component_roots(cardioid, period2):
    assert abs(cardioid.root - 0.25) < 1e-9
    assert abs(period2.root - (-0.75)) < 1e-9


def test_rho_at_roots_is_one(cardioid, period2, rabbit):
    for comp in (cardioid, period2, rabbit):
        assert abs(at.rho_W(comp, comp.root) - 1) < 1e-7


def test_root_accuracy_scales_with_component_size():
    # At a primitive root the chart degenerates quadratically, so any
    # double-precision root gives |rho - 1| ~ sqrt(c_err / size). The
    # invariant quantity is the parameter error |rho - 1|^2 * size, which
    # must stay at machine level; the plain 1e-7 multiplier gap is only
    # attainable for components of macroscopic size.
    for comp in at.components_up_to(5):
        gap = abs(at.rho_W(comp, comp.root) - 1)
        size = abs(at.psi_W(comp, 0.6) - comp.center)
        assert gap * gap * size < 1e-13
        if size > 1e-2:
            assert gap < 1e-7


def test_cardioid_chart_closed_form(cardioid):
    # psi(rho) = rho/2 - rho^2/4 on the period-1 component.
    for rho in (0.5j, -0.3 + 0.2j, 0.9):
        c = at.psi_W(cardioid, rho)
        assert abs(c - (rho / 2 - rho * rho / 4)) < 1e-11
        assert abs(at.rho_W(cardioid, c) - rho) < 1e-10


def test_period2_chart_closed_form(period2):
    # psi(rho) = rho/4 - 1; rho_W(c) = 4(c+1).
    assert abs(at.psi_W(period2, 1.0) - (-0.75)) < 1e-9
    assert abs(at.rho_W(period2, -1.1) - (-0.4)) < 1e-10
    assert abs(at.rho_W(period2, period2.center)) < 1e-12


def test_boundary_landmarks(cardioid, period2):
    t12 = at.InternalArgument(1, 2)
    t13 = at.InternalArgument(1, 3)
    assert abs(at.boundary_point(cardioid, t12) - (-0.75)) < 1e-9
    assert abs(at.boundary_point(cardioid, at.InternalArgument(0, 1)) - 0.25) < 1e-9
    expect = complex(-0.125, 3 * math.sqrt(3) / 8)
    assert abs(at.boundary_point(cardioid, t13) - expect) < 1e-9
    assert abs(at.boundary_point(period2, t12) - (-1.25)) < 1e-9


def test_chart_round_trip_inside_disk(cardioid, period2, rabbit):
    rng = np.random.default_rng(13)
    for comp in (cardioid, period2, rabbit):
        for _ in range(6):
            rho = rng.uniform(0.1, 0.95) * cmath.exp(
                2j * math.pi * rng.uniform(0, 1)
            )
            c = at.psi_W(comp, rho)
            assert abs(at.rho_W(comp, c) - rho) < 1e-8


def test_chart_extension_beyond_disk_round_trip(cardioid, ledger):
    # Targets just outside the unit circle but inside the injectivity
    # domain: x small, y away from the deleted disk.
    for y in (1.4, 2.2, -1.9):
        L = complex(8e-4, y)
        from mandelmult.regions import tilde_omega_contains

        assert tilde_omega_contains(1, L, ledger)
        rho = cmath.exp(L)
        c = at.psi_W(cardioid, rho)
        assert abs(at.rho_W(cardioid, c) - rho) < 1e-8


def test_injectivity_probe_distinct_targets(cardioid, ledger):
    from mandelmult.regions import tilde_omega_contains

    targets = []
    for y in np.linspace(1.2, 2.8, 7):
        L = complex(6e-4, float(y))
        if tilde_omega_contains(1, L, ledger):
            targets.append(cmath.exp(L))
    images = [at.psi_W(cardioid, r) for r in targets]
    for i in range(len(images)):
        for j in range(i + 1, len(images)):
            assert abs(images[i] - images[j]) > 1e-6


def test_multiplier_modulus_classification(cardioid, period2):
    # |rho_W| < 1 strictly inside, = 1 on boundary samples, > 1 in the wake
    # beyond the closure.
    rng = np.random.default_rng(71)
    for comp in (cardioid, period2):
        for _ in range(5):
            rho = rng.uniform(0.05, 0.9) * cmath.exp(2j * math.pi * rng.uniform(0, 1))
            c_in = at.psi_W(comp, rho)
            assert abs(at.rho_W(comp, c_in)) < 1
        for ts in ("1/3", "2/5"):
            c_b = at.boundary_point(comp, at.InternalArgument.parse(ts))
            assert abs(abs(at.rho_W(comp, c_b)) - 1) < 1e-6


def test_wake_multiplier_exceeds_one(cardioid):
    # Outside the closure but inside the wake the continued multiplier has
    # modulus above 1 (checked just past the t = 1/2 boundary point).
    c = -0.77
    rho = at.rho_W(cardioid, c)
    assert abs(rho) > 1
    # and on the boundary the modulus is 1 to 1e-6
    t = at.InternalArgument(1, 2)
    c_b = at.boundary_point(cardioid, t)
    assert abs(abs(at.rho_W(cardioid, c_b)) - 1) < 1e-6


def test_domain_check_rejects_waypoint(cardioid, ledger):
    class _Dom:
        def contains(self, rho):
            return omega_contains_dom(rho)

    dom = omega_for_period(1, ledger)

    def omega_contains_dom(rho):
        from mandelmult.regions import omega_contains

        return omega_contains(dom, rho)

    path = at.ContinuationPath(waypoints=(0.6, 1.2), step_cap=0.8)
    with pytest.raises(DomainViolation):
        at.psi_W(cardioid, 1.2, path, check_domain=_Dom())


def test_continuation_path_validation():
    with pytest.raises(DomainError):
        at.ContinuationPath(waypoints=(0.0, 1.0), step_cap=0.5)
    with pytest.raises(DomainError):
        at.ContinuationPath(waypoints=(0.0, 1.0 + 1e-6j, 2.0), step_cap=3.0)


def test_bifurcated_orbit_basilica_center(cardioid):
    orb = at.bifurcated_orbit(cardioid, at.InternalArgument(1, 2), -1.0)
    assert orb.n == 2
    pts = sorted(orb.points, key=lambda z: z.real)
    assert abs(pts[0] - (-1)) < 1e-10 and abs(pts[1]) < 1e-10
    assert abs(orb.rho) < 1e-10


def test_bifurcated_orbit_rabbit_center(cardioid):
    orb = at.bifurcated_orbit(cardioid, at.InternalArgument(1, 3), RABBIT_CENTER)
    assert orb.n == 3
    assert abs(orb.rho) < 1e-9


def test_bifurcated_orbit_multiplier_closed_form(cardioid):
    # The period-2 orbit has multiplier 4(c + 1).
    orb = at.bifurcated_orbit(cardioid, at.InternalArgument(1, 2), -0.76)
    assert abs(orb.rho - 0.96) < 1e-10


def test_bifurcated_orbit_q_cluster_structure(cardioid):
    # Exactly q points of the bifurcated cycle cluster near each base point.
    t = at.InternalArgument(1, 3)
    rho0 = cmath.exp(2j * math.pi / 3)
    s = 0.2
    c = at.psi_W(cardioid, rho0 + s**3)
    orb = at.bifurcated_orbit(cardioid, t, c)
    b0, c0 = at.chart_point(cardioid, rho0)
    base = at._orbit_at(cardioid, b0, c0, DEFAULT_CONFIG)
    for b in base.points:
        near = [z for z in orb.points if abs(z - b) < 0.5]
        assert len(near) == t.q


def test_lambda_map_closed_form(cardioid):
    # lambda(rho) = 4 psi(rho) + 4 = 4 + 2 rho - rho^2 for the 1/2 tangency.
    t = at.InternalArgument(1, 2)
    for rho in (-1.05, -1 + 0.08j, -0.93):
        lam = at.lambda_map(cardioid, t, rho)
        assert abs(lam - (4 + 2 * rho - rho * rho)) < 1e-9


def test_lambda_at_tangency_is_one(cardioid, period2):
    for comp, q in ((cardioid, 2), (cardioid, 5), (period2, 2)):
        t = at.InternalArgument(1, q)
        rho0 = cmath.exp(2j * math.pi * float(t))
        assert abs(at.lambda_map(comp, t, rho0) - 1) < 1e-9


def test_dlambda_closed_form_cardioid_half(cardioid):
    # lambda = 4 + 2 rho - rho^2 gives lambda'(-1) = 4 = -q^2/rho0.
    res = at.dlambda_check(cardioid, at.InternalArgument(1, 2), 1e-3)
    assert abs(res.formula - 4) < 1e-12
    assert res.rel_err < 1e-5


@pytest.mark.parametrize("q", [3, 4, 5])
def test_dlambda_cardioid_fd(cardioid, q):
    t = at.InternalArgument(1, q)
    res = at.dlambda_check(cardioid, t, 1e-3)
    rho0 = cmath.exp(2j * math.pi / q)
    assert abs(res.formula - (-(q * q) / rho0)) < 1e-12
    assert res.rel_err < 1e-4


def test_dlambda_period2(period2):
    res = at.dlambda_check(period2, at.InternalArgument(1, 2), 1e-3)
    # rho0 = e^{pi i} = -1: formula -4/(-1) = 4.
    assert abs(res.formula - 4) < 1e-12
    assert res.rel_err < 1e-4


def test_covering_property(cardioid):
    t = at.InternalArgument(1, 2)
    q = 2
    r = 0.5
    targets = [1 + 0.1j, 1.0, 1 + 0.05 - 0.02j]
    assert at.covering_check(cardioid, t, r, targets)
    circle = [
        1 + (q * q * r / 32) * cmath.exp(2j * math.pi * k / 16) for k in range(16)
    ]
    assert at.covering_check(cardioid, t, r, circle)


def test_covering_target_guard(cardioid):
    with pytest.raises(DomainError):
        at.covering_check(cardioid, at.InternalArgument(1, 2), 0.5, [2.0])


def test_bifurcation_child_chain(cardioid):
    w2 = at.bifurcation_child(cardioid, at.InternalArgument(1, 2))
    assert w2.n == 2 and abs(w2.center - (-1)) < 1e-10
    assert abs(w2.root - (-0.75)) < 1e-9
    w4 = at.bifurcation_child(w2, at.InternalArgument(1, 2))
    assert w4.n == 4 and abs(w4.center - (-1.3107026413368328)) < 1e-8
    assert abs(w4.root - (-1.25)) < 1e-9


def test_lip_distance_bounds(cardioid, period2, rabbit):
    # d(O^q(c), O(c0)) < 7|s| and d(O(c), O(c0)) < 6 (10|s|/9)^q.
    rng = np.random.default_rng(6)
    cases = [(cardioid, 2), (cardioid, 3), (cardioid, 4), (period2, 2), (rabbit, 2)]
    for comp, q in cases:
        t = at.InternalArgument(1, q)
        rho0 = cmath.exp(2j * math.pi * float(t))
        c0 = at.boundary_point(comp, t)
        b0, _ = at.chart_point(comp, rho0)
        base = at._orbit_at(comp, b0, c0, DEFAULT_CONFIG)
        done = 0
        while done < 3:
            s = rng.uniform(0.03, 0.3) * cmath.exp(2j * math.pi * rng.uniform(0, 1))
            c = at.psi_W(comp, rho0 + s**q)
            if abs(c - c0) < 2e-6:
                continue
            done += 1
            oq = at.bifurcated_orbit(comp, t, c)
            on = continue_orbit(base, c, DEFAULT_CONFIG, step_cap=0.05)
            assert at.orbit_set_distance(oq.points, base.points) < 7 * abs(s)
            assert at.orbit_set_distance(on.points, base.points) < 6 * (
                10 * abs(s) / 9
            ) ** q


def test_psi_W_log_plane_path(cardioid, ledger):
    # A log-plane path into the extension region gives the same value as
    # the default radial continuation (path independence in a simply
    # connected domain).
    L_target = complex(8e-4, 1.9)
    rho_target = cmath.exp(L_target)
    direct = at.psi_W(cardioid, rho_target)
    waypoints = tuple(
        complex(-2.0 + (2.0 + 8e-4) * k / 10.0, 1.9 * k / 10.0) for k in range(11)
    )
    path = at.ContinuationPath(waypoints=waypoints, log_plane=True, step_cap=0.5)
    via_path = at.psi_W(cardioid, rho_target, path)
    assert abs(direct - via_path) < 1e-9


def test_rho_W_path_independence(cardioid):
    c_target = -0.2 + 0.55j
    direct = at.rho_W(cardioid, c_target)
    bent = at.rho_W(cardioid, c_target, path=(0.3j, -0.1 + 0.5j, c_target))
    assert abs(direct - bent) < 1e-10


def test_chart_cache_reuse(cardioid):
    rho = 0.37 + 0.11j
    c1 = at.psi_W(cardioid, rho)
    assert cardioid.cache_get(
        (round(rho.real, 12), round(rho.imag, 12), True)
    ) is not None
    c2 = at.psi_W(cardioid, rho)
    assert c1 == c2
