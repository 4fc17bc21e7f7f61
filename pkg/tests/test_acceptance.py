"""Acceptance gate: every shipped criterion at its stated tolerance.

Each test prints one PASS/FAIL line; run with `pytest -s` to watch them.
"""

from __future__ import annotations

import cmath
import math
import time
from fractions import Fraction

import numpy as np

from mandelmult import atlas as at
from mandelmult import dynamics as dy
from mandelmult import orbits as ob
from mandelmult import rays as ry
from mandelmult import regions as rg
from mandelmult import sequences as sq
from mandelmult.cli import main
from mandelmult.dynamics import DEFAULT_CONFIG
from mandelmult.sequences import Verdict

RABBIT_ROOT = complex(-0.125, 3 * math.sqrt(3) / 8)


def _report(num: int, ok: bool, detail: str) -> None:
    print(f"ACCEPTANCE {num:2d}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, detail


def test_criterion_01_derivative_identity_suite():
    t0 = time.monotonic()
    orbits = ob.sample_repelling_orbits(200, 6, seed=101, min_rho_dist_1=0.05)
    assert len(orbits) == 200
    worst_rel = 0.0
    worst_resid = 0.0
    for orb in orbits:
        data = ob.gamma_coeffs(orb)
        fd = ob.rho_prime_fd(orb, 1e-5)
        worst_rel = max(worst_rel, abs(data.rho_prime - fd) / abs(fd))
        worst_resid = max(worst_resid, ob.identity_residual(orb, data))
    elapsed = time.monotonic() - t0
    ok = worst_rel <= 1e-5 and worst_resid <= 1e-8 and elapsed < 60
    _report(
        1, ok,
        f"200 orbits: fd mismatch {worst_rel:.2e} <= 1e-5, "
        f"residual {worst_resid:.2e} <= 1e-8, {elapsed:.1f}s < 60s",
    )


def test_criterion_02_ruelle_identity():
    rng = np.random.default_rng(202)
    orbits = ob.sample_repelling_orbits(
        50, 6, seed=202, min_rho_dist_1=0.05, min_rho_abs=0.05
    )
    worst = 0.0
    count = 0
    for orb in orbits:
        data = ob.gamma_coeffs(orb)
        while True:
            z = complex(rng.uniform(2.5, 4.5), rng.uniform(-2.5, 2.5))
            try:
                worst = max(worst, ob.ruelle_residual(orb, data, z))
                count += 1
            except Exception:
                continue
            break
        while True:
            z = complex(rng.uniform(2.5, 4.5), rng.uniform(-2.5, 2.5))
            try:
                worst = max(worst, ob.ruelle_residual(orb, data, z))
                count += 1
            except Exception:
                continue
            break
    ok = count >= 100 and worst <= 1e-6
    _report(2, ok, f"{count} evaluations, max residual {worst:.2e} <= 1e-6")


def test_criterion_03_contour_residue():
    # Levels stay a little above the critical potential but keep
    # 2^n * level moderate: |f^n| ~ e^{2^n level} on the contour, and the
    # cancellation in the trapezoid sum must leave the 1e-5 target intact.
    orbits = ob.sample_repelling_orbits(
        50, 4, seed=303, min_rho_dist_1=0.05, min_rho_abs=0.05, rho_max=30.0
    )
    assert len(orbits) == 50
    worst_rel = 0.0
    worst_inv = 0.0
    for orb in orbits:
        data = ob.gamma_coeffs(orb)
        g0 = dy.green_value(orb.c, 0.0)
        lv = max(0.35, 1.3 * g0 + 0.05)
        r1 = ob.contour_residue(orb, data, lv, 512)
        r2 = ob.contour_residue(orb, data, lv + 0.4, 512)
        expect = orb.n * orb.rho - orb.n + 2 * orb.c * data.rho_prime / orb.rho
        worst_rel = max(worst_rel, abs(r1 - expect) / max(abs(expect), 1e-12))
        worst_inv = max(worst_inv, abs(r1 - r2))
    ok = worst_rel <= 1e-5 and worst_inv <= 1e-6
    _report(
        3, ok,
        f"50 contours: closed-form mismatch {worst_rel:.2e} <= 1e-5, "
        f"level drift {worst_inv:.2e} <= 1e-6",
    )


def test_criterion_04_main_inequality(ledger):
    orbits = ob.sample_repelling_orbits(
        200, 6, seed=404, rho_max=math.e, min_rho_dist_1=1e-3
    )
    assert len(orbits) == 200
    min_gap_units = math.inf
    ceilings_ok = True
    for j, orb in enumerate(orbits):
        data = ob.gamma_coeffs(orb)
        res = rg.main_inequality_gap(orb, data, ledger, seed=404000 + j)
        tol = 3.0 * res.rhs_stderr
        if res.gap < -tol:
            min_gap_units = -math.inf
        if res.rhs_stderr > 0:
            min_gap_units = min(min_gap_units, res.gap / res.rhs_stderr)
        beta = 0.5 * (1 + math.sqrt(1 + 4 * abs(orb.c)))
        if res.kn > ledger.B * (2 * beta) ** orb.n + 1e-9:
            ceilings_ok = False
        if abs(orb.c) <= 2 * math.exp(2 / orb.n) and res.kn > ledger.B0 * 4.0**orb.n + 1e-9:
            ceilings_ok = False
    ok = min_gap_units >= -3.0 and ceilings_ok
    _report(
        4, ok,
        f"200 repelling orbits with 1<|rho|<e: min gap {min_gap_units:.1f} "
        f"MC-sigma >= -3, K_n ceilings {'held' if ceilings_ok else 'VIOLATED'}",
    )


def test_criterion_05_bifurcation_derivative(cardioid, period2, rabbit):
    pairs = [
        (cardioid, 2), (cardioid, 3), (cardioid, 4), (cardioid, 5),
        (period2, 2), (period2, 3), (rabbit, 2),
    ]
    worst = 0.0
    for comp, q in pairs:
        res = at.dlambda_check(comp, at.InternalArgument(1, q), 1e-3)
        worst = max(worst, res.rel_err)
    exact = at.dlambda_check(cardioid, at.InternalArgument(1, 2), 1e-3)
    formula_exact = abs(exact.formula - 4) < 1e-12
    ok = worst <= 1e-4 and formula_exact
    _report(
        5, ok,
        f"7 (n,q) pairs: max rel err {worst:.2e} <= 1e-4; cardioid 1/2 "
        f"formula value 4 {'exact' if formula_exact else 'WRONG'}",
    )


def test_criterion_06_lip_bounds(cardioid, period2, rabbit):
    w4 = at.bifurcation_child(period2, at.InternalArgument(1, 2))
    pool = [
        (cardioid, 2), (cardioid, 3), (cardioid, 4), (cardioid, 5),
        (cardioid, 6), (period2, 2), (period2, 3), (period2, 4),
        (rabbit, 2), (rabbit, 3), (w4, 2), (w4, 3),
    ]
    rng = np.random.default_rng(606)
    bases = {}
    done = 0
    ok = True
    while done < 50:
        comp, q = pool[done % len(pool)]
        assert comp.n * q <= 12
        t = at.InternalArgument(1, q)
        key = (comp.n, q)
        if key not in bases:
            rho0 = cmath.exp(2j * math.pi * float(t))
            c0 = at.boundary_point(comp, t)
            b0, _ = at.chart_point(comp, rho0)
            bases[key] = (rho0, c0, at._orbit_at(comp, b0, c0, DEFAULT_CONFIG))
        rho0, c0, base = bases[key]
        s = rng.uniform(0.02, 0.3) * cmath.exp(2j * math.pi * rng.uniform(0, 1))
        c = at.psi_W(comp, rho0 + s**q)
        if abs(c - c0) < 2e-6:
            continue
        oq = at.bifurcated_orbit(comp, t, c)
        on = ob.continue_orbit(base, c, DEFAULT_CONFIG, step_cap=0.05)
        d1 = at.orbit_set_distance(oq.points, base.points)
        d2 = at.orbit_set_distance(on.points, base.points)
        ok &= d1 < 7 * abs(s)
        ok &= d2 < 6 * (10 * abs(s) / 9) ** q
        done += 1
    _report(6, ok, "50 sampled s with |s| <= 0.3, nq <= 12: both distance bounds hold")


def test_criterion_07_yoccoz_circles(cardioid, period2, rabbit, ledger):
    ok = True
    checked = 0
    for comp in (cardioid, period2, rabbit):
        for ts in ("1/2", "1/3", "2/5", "1/4"):
            t = at.InternalArgument.parse(ts)
            disk = rg.yoccoz_disk(comp.n, t)
            child = at.bifurcation_child(comp, t)
            grand = at.bifurcation_child(child, at.InternalArgument(1, 2))
            for cc in (child.center, grand.center):
                rho = at.rho_W(comp, cc)
                L = rg.log_multiplier_branch(rho, t)
                ok &= disk.contains(L, tol=1e-9)
                checked += 1
    _report(7, ok, f"{checked} log-multiplier memberships in Yoccoz disks (n <= 3)")


def test_criterion_08_landmarks(cardioid, period2):
    checks = []
    checks.append(abs(at.psi_W(cardioid, 1.0) - 0.25) < 1e-9)
    checks.append(
        abs(at.boundary_point(cardioid, at.InternalArgument(1, 2)) - (-0.75)) < 1e-9
    )
    checks.append(abs(period2.root - (-0.75)) < 1e-9)
    checks.append(
        abs(at.boundary_point(cardioid, at.InternalArgument(1, 3)) - RABBIT_ROOT)
        < 1e-9
    )
    est, _ = ry.ray_pair_landing(ry.ExternalAngle(1, 3), ry.ExternalAngle(2, 3))
    checks.append(abs(est - (-0.75)) < 1e-3)
    digit_cases = [
        (1, 2, ry.ExternalAngle(1, 3), ry.ExternalAngle(2, 3), -0.75),
        (1, 3, ry.ExternalAngle(1, 7), ry.ExternalAngle(2, 7), RABBIT_ROOT),
        (1, 4, ry.ExternalAngle(1, 15), ry.ExternalAngle(2, 15), 0.25 + 0.5j),
        (2, 2, ry.ExternalAngle(2, 5), ry.ExternalAngle(3, 5), -1.25),
    ]
    for n, q, a1, a2, root in digit_cases:
        land, _ = ry.ray_pair_landing(a1, a2)
        measured = abs(float(a2.value - a1.value))
        _, agrees = ry.digit_formula_check(n, q, 1, measured)
        checks.append(abs(land - root) < 1e-3 and agrees)
    ok = all(checks)
    _report(8, ok, f"{len(checks)} landmark identities (charts, rays, digit formula)")


def test_criterion_09_region_geometry(ledger):
    rng = np.random.default_rng(909)
    ok = True
    for C in (4.0, 10.0, 100.0):
        dom = rg.OmegaDomain(C)
        bound = rg.omega_log_x_bound(C)
        members = 0
        for _ in range(10**4):
            L = complex(
                rng.uniform(0, min(2.0, 3 * bound)),
                rng.uniform(-math.pi, math.pi),
            )
            if rg.omega_log_contains(dom, L):
                members += 1
                ok &= L.real < bound
        ok &= members > 50
    for _ in range(10**4):
        L0 = complex(rng.uniform(1e-3, 3.0), rng.uniform(-3.0, 3.0))
        a0 = rng.uniform(0.0, 1.0)
        n = int(rng.integers(1, 9))
        rhs = 2 * math.pi * n * math.log(2) / (
            math.pi / 2 - math.atan((2**n - 1) * a0 / math.pi)
        )
        ok &= rg.cut_inequality_check(n, L0, a0) == (abs(L0 - rhs / 2) <= rhs / 2)
    ratio = rg.R_n_value(20, ledger) / (20 * math.log(2))
    ok &= abs(ratio - 2.0) < 1e-4
    _report(
        9, ok,
        f"x-bound on 3x10^4 rejection samples, cut-disk equivalence on 10^4, "
        f"R_20/(20 log 2) = {ratio:.8f}",
    )


def test_criterion_10_polya_area(ledger):
    # Equality case at c = 0: area{G < 2^-n log l} = pi l^{2^{1-n}}.
    ok = True
    for n in (1, 2, 3):
        level = 2.0**-n * math.log(ledger.lambda_star)
        est = dy.area_estimate(0, level, seed=1010 + n)
        exact = math.pi * ledger.lambda_star ** (2.0 ** (1 - n))
        ok &= abs(est.area - exact) <= 3 * est.stderr
    rng = np.random.default_rng(1010)
    for _ in range(20):
        c = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
        level = rng.uniform(0.05, 0.9)
        est = dy.area_estimate(c, level, seed=int(rng.integers(2**31)))
        ok &= est.area <= math.pi * math.exp(2 * level) + 3 * est.stderr
    _report(10, ok, "equality case at c = 0 within 3 sigma; bound for 20 random c")


def test_criterion_11_sequence_certification(ledger):
    t0 = time.monotonic()
    seq = sq.generate_sequence(1, 2, Fraction(1, 10), ledger)
    modes = [t.mode for t in seq.terms]
    reports = sq.verify_assumptions(seq, ledger)
    certified = all(
        v is None or v is Verdict.PASS
        for r in reports
        for v in (r.first, r.second, r.side_nine_tenths, r.budget, r.partial_sum)
    )
    hi = sq.generate_sequence(1, 2, Fraction(1, 10), ledger, exact_bit_limit=10**5)
    reports_hi = sq.verify_assumptions(hi, ledger)
    cross = all(
        a.first == b.first and a.second == b.second
        and a.side_nine_tenths == b.side_nine_tenths
        and a.budget == b.budget and a.partial_sum == b.partial_sum
        for a, b in zip(reports, reports_hi)
    )
    elapsed = time.monotonic() - t0
    ok = modes == ["exact", "logspace"] and certified and cross and elapsed < 30
    _report(
        11, ok,
        f"depth-2 terms {modes}, all certificates pass, exact/logspace "
        f"verdicts agree, {elapsed:.1f}s < 30s",
    )


def test_criterion_12_toy_nesting(cardioid):
    report = sq.toy_nesting(cardioid, ["1/2", "1/2"], [0.3, 0.3])
    c1 = report.levels[0].tangency
    c2 = report.levels[1].tangency
    ok = abs(c1 - (-0.75)) < 1e-9 and abs(c2 - (-1.25)) < 1e-9
    radii = [lev.disk_B.radius for lev in report.levels if lev.disk_B]
    ok &= all(b < a for a, b in zip(radii, radii[1:]))
    for ts in ("1/3", "2/5", "1/7"):
        t = at.InternalArgument.parse(ts)
        c = at.boundary_point(cardioid, t)
        orb = at.continued_orbit(cardioid, c)
        mon = sq.orbit_distance_monitor(c, [orb], 1)
        ok &= abs(mon.min_dist - 0.5) < 1e-9
    _report(
        12, ok,
        f"chain (1/2,1/2): c1 = {c1.real:.9f}, c2 = {c2.real:.9f}, disks "
        "shrink; |alpha(c)| = 1/2 on boundary samples",
    )


def test_criterion_13_determinism(tmp_path):
    dirs = [tmp_path / "run1", tmp_path / "run2"]
    for d in dirs:
        code = main([
            "verify", "all", "--n-max", "4", "--samples", "12",
            "--seed", "7", "--out", str(d),
        ])
        assert code == 0
    files1 = sorted(p.name for p in dirs[0].iterdir())
    files2 = sorted(p.name for p in dirs[1].iterdir())
    ok = files1 == files2 and len(files1) >= 6
    for name in files1:
        ok &= (dirs[0] / name).read_bytes() == (dirs[1] / name).read_bytes()
    _report(13, ok, f"two seed-7 runs of the full suite: {len(files1)} byte-identical CSVs")
