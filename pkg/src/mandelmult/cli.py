"""Command-line front end: orbits | verify | atlas | plot | sequence | rays.

Exit codes: 0 success, 2 computation failure, 3 verification violation,
4 indeterminate verdict under --strict. All randomized procedures take the
global --seed (default 0); identical configuration and seed give
byte-identical CSV and JSON outputs.
"""

from __future__ import annotations

import argparse
import math
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import atlas as at
from . import orbits as ob
from . import plots
from . import rays as ry
from . import regions as rg
from . import reporting as rp
from . import sequences as sq
from .config import RunConfig, load_config
from .errors import ConfigError, MandelmultError
from .sequences import Verdict

EXIT_OK = 0
EXIT_COMPUTE = 2
EXIT_VIOLATION = 3
EXIT_INDETERMINATE = 4


def parse_complex(text: str) -> complex:
    """Accept '-0.75', '-0.1+0.65j', '-0.1,0.65'."""
    t = text.strip()
    if "," in t:
        re_s, im_s = t.split(",", 1)
        return complex(float(re_s), float(im_s))
    return complex(t.replace(" ", ""))


def _ledger_for(cfg: RunConfig) -> rg.ConstantsLedger:
    if abs(cfg.lambda_star - 2.0) < 1e-15:
        return rg.default_ledger(cfg.numerics)
    return rg.build_ledger(cfg.lambda_star, 2000, cfg.numerics)


def _out_path(args, name: str) -> Path | None:
    if args.out is None:
        return None
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out / name


# ----------------------------------------------------------------- orbits


def cmd_orbits(args, cfg: RunConfig) -> int:
    c = parse_complex(args.c)
    orbits = ob.find_periodic_orbits(c, args.n, cfg.numerics)
    rows = []
    worst_resid = 0.0
    print(f"# {len(orbits)} exact-period-{args.n} orbit(s) at c = {c}")
    for j, orb in enumerate(sorted(orbits, key=lambda o: (o.points[0].real, o.points[0].imag))):
        line = f"orbit {j}: rho = {orb.rho:.12g}"
        resid = None
        rho_prime = complex(float("nan"), 0.0)
        if abs(orb.rho) > 1e-8 and abs(orb.rho - 1.0) > 1e-8:
            data = ob.gamma_coeffs(orb, cfg.numerics)
            resid = ob.identity_residual(orb, data)
            rho_prime = data.rho_prime
            worst_resid = max(worst_resid, resid)
            line += f", rho' = {data.rho_prime:.12g}, identity residual {resid:.2e}"
            if args.check_ruelle:
                rng = np.random.default_rng(cfg.numerics.rng_seed + j)
                rmax = 0.0
                for _ in range(8):
                    z = complex(rng.uniform(2.5, 4.0), rng.uniform(-2.0, 2.0))
                    try:
                        rmax = max(rmax, ob.ruelle_residual(orb, data, z, cfg.numerics))
                    except MandelmultError:
                        continue
                line += f", ruelle residual <= {rmax:.2e}"
                worst_resid = max(worst_resid, rmax)
        print(line)
        rows.append(
            rp.VerificationRow(
                orbit_id=f"n{args.n}_{j}",
                c=c,
                n=args.n,
                rho=orb.rho,
                rho_prime=rho_prime,
                lhs=resid if resid is not None else float("nan"),
                rhs=1e-8,
                gap=float("nan"),
                k_n=float("nan"),
                area=float("nan"),
                stderr=float("nan"),
                verdict="ok" if (resid is None or resid <= 1e-8) else "violation",
            )
        )
    path = _out_path(args, "orbits.csv")
    if path is not None and cfg.emit_csv:
        rp.write_verification_csv(rows, path)
        print(f"# wrote {path}")
    if worst_resid > 1e-6:
        return EXIT_VIOLATION
    return EXIT_OK


# ----------------------------------------------------------------- verify


def _verify_inequality(args, cfg, ledger):
    samples = ob.sample_repelling_orbits(
        args.samples, args.n_max, seed=args.seed_value, config=cfg.numerics,
        rho_max=math.e, min_rho_dist_1=1e-3,
    )
    rows = []
    min_gap_sigma = math.inf
    ceiling_ok = True
    corollary_inf = math.inf
    for j, orb in enumerate(samples):
        data = ob.gamma_coeffs(orb, cfg.numerics)
        res = rg.main_inequality_gap(
            orb, data, ledger, cfg.numerics,
            k_safety=args.k_safety, seed=args.seed_value + 1000 + j,
        )
        beta = 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * abs(orb.c)))
        kn_raw = res.kn / args.k_safety
        if kn_raw > ledger.B * (2.0 * beta) ** orb.n + 1e-9:
            ceiling_ok = False
        if kn_raw > ledger.B0 * 4.0**orb.n + 1e-9:
            ceiling_ok = False
        tol = 3.0 * res.rhs_stderr
        verdict = "ok" if res.gap >= -tol else "violation"
        min_gap_sigma = min(
            min_gap_sigma,
            res.gap / res.rhs_stderr if res.rhs_stderr > 0 else math.inf,
        )
        if abs(orb.rho) < 1.05:
            ratio = abs(data.rho_prime) * kn_raw / (orb.n * abs(orb.rho - 1.0))
            corollary_inf = min(corollary_inf, ratio)
        rows.append(
            rp.VerificationRow(
                orbit_id=f"n{orb.n}re{orb.c.real:+.12e}im{orb.c.imag:+.12e}k{j}",
                c=orb.c, n=orb.n, rho=orb.rho, rho_prime=data.rho_prime,
                lhs=res.lhs, rhs=res.rhs, gap=res.gap, k_n=res.kn,
                area=res.area, stderr=res.area_stderr, verdict=verdict,
            )
        )
    bad = [r for r in rows if r.verdict != "ok"]
    print(f"inequality: {len(rows)} orbits, min gap {min_gap_sigma:.2f} sigma, "
          f"ceilings {'ok' if ceiling_ok else 'VIOLATED'}")
    if math.isfinite(corollary_inf):
        print(f"inequality: empirical boundary-ratio infimum {corollary_inf:.6g}"
              " (lower witness for the unspecified boundary constant)")
    return rows, (0 if not bad and ceiling_ok else EXIT_VIOLATION)


def _verify_identity(args, cfg, ledger):
    samples = ob.sample_repelling_orbits(
        args.samples, args.n_max, seed=args.seed_value, config=cfg.numerics,
        min_rho_dist_1=0.05, min_rho_abs=0.05,
    )
    rows = []
    worst_rel = 0.0
    worst_resid = 0.0
    for j, orb in enumerate(samples):
        data = ob.gamma_coeffs(orb, cfg.numerics)
        fd = ob.rho_prime_fd(orb, 1e-5, cfg.numerics)
        rel = abs(data.rho_prime - fd) / max(abs(fd), 1e-30)
        resid = ob.identity_residual(orb, data)
        worst_rel = max(worst_rel, rel)
        worst_resid = max(worst_resid, resid)
        verdict = "ok" if rel <= 1e-5 and resid <= 1e-8 else "violation"
        rows.append(
            rp.VerificationRow(
                orbit_id=f"n{orb.n}re{orb.c.real:+.12e}im{orb.c.imag:+.12e}k{j}",
                c=orb.c, n=orb.n, rho=orb.rho, rho_prime=data.rho_prime,
                lhs=rel, rhs=1e-5, gap=resid, k_n=float("nan"),
                area=float("nan"), stderr=float("nan"), verdict=verdict,
            )
        )
    print(f"identity: {len(rows)} orbits, max fd mismatch {worst_rel:.2e}, "
          f"max residual {worst_resid:.2e}")
    bad = [r for r in rows if r.verdict != "ok"]
    return rows, (0 if not bad else EXIT_VIOLATION)


def _verify_ruelle(args, cfg, ledger):
    samples = ob.sample_repelling_orbits(
        max(1, args.samples // 2), args.n_max, seed=args.seed_value,
        config=cfg.numerics, min_rho_dist_1=0.05, min_rho_abs=0.05,
    )
    rng = np.random.default_rng(args.seed_value + 77)
    worst = 0.0
    count = 0
    rows = []
    for j, orb in enumerate(samples):
        data = ob.gamma_coeffs(orb, cfg.numerics)
        for _ in range(2):
            z = complex(rng.uniform(2.5, 4.5), rng.uniform(-2.5, 2.5))
            try:
                r = ob.ruelle_residual(orb, data, z, cfg.numerics)
            except MandelmultError:
                continue
            worst = max(worst, r)
            count += 1
            rows.append(
                rp.VerificationRow(
                    orbit_id=f"n{orb.n}re{orb.c.real:+.12e}im{orb.c.imag:+.12e}k{j}",
                    c=orb.c, n=orb.n, rho=orb.rho, rho_prime=data.rho_prime,
                    lhs=r, rhs=1e-6, gap=1e-6 - r, k_n=float("nan"),
                    area=float("nan"), stderr=float("nan"),
                    verdict="ok" if r <= 1e-6 else "violation",
                )
            )
    print(f"ruelle: {count} evaluations, max residual {worst:.2e}")
    bad = [r for r in rows if r.verdict != "ok"]
    return rows, (0 if not bad else EXIT_VIOLATION)


def _verify_el_bound(args, cfg, ledger):
    samples = ob.sample_repelling_orbits(
        args.samples, args.n_max, seed=args.seed_value, config=cfg.numerics,
    )
    rows = []
    for j, orb in enumerate(samples):
        chk = ob.el_bound_check(orb, cfg.numerics)
        rows.append(
            rp.VerificationRow(
                orbit_id=f"n{orb.n}re{orb.c.real:+.12e}im{orb.c.imag:+.12e}k{j}",
                c=orb.c, n=orb.n, rho=orb.rho, rho_prime=0j,
                lhs=chk.lhs, rhs=chk.rhs, gap=chk.rhs - chk.lhs,
                k_n=float("nan"), area=float("nan"), stderr=float("nan"),
                verdict="ok" if chk.holds else "violation",
            )
        )
    bad = [r for r in rows if r.verdict != "ok"]
    print(f"el-bound: {len(rows)} orbits, all hold: {not bad}")
    return rows, (0 if not bad else EXIT_VIOLATION)


def _verify_yoccoz(args, cfg, ledger):
    card = at.main_cardioid(cfg.numerics)
    comps = [card]
    if args.n_max >= 2:
        comps.append(at.build_component(-1.0, 2, cfg.numerics))
    if args.n_max >= 3:
        rabbit_center = [c for c in at.find_centers(3, cfg.numerics) if c.imag > 0.5][0]
        comps.append(at.build_component(rabbit_center, 3, cfg.numerics))
    t_values = [at.InternalArgument.parse(s) for s in ("1/2", "1/3", "2/5", "1/4")]
    rows = []
    all_ok = True
    for comp in comps:
        for t in t_values:
            disk = rg.yoccoz_disk(comp.n, t)
            child = at.bifurcation_child(comp, t, cfg.numerics)
            grand = at.bifurcation_child(child, at.InternalArgument(1, 2), cfg.numerics)
            for label, cc in (("child", child.center), ("grand", grand.center)):
                rho = at.rho_W(comp, cc, None, cfg.numerics)
                L = rg.log_multiplier_branch(rho, t)
                ok = disk.contains(L)
                all_ok &= ok
                rows.append(
                    rp.VerificationRow(
                        orbit_id=f"n{comp.n}t{t}{label}",
                        c=cc, n=comp.n, rho=rho, rho_prime=0j,
                        lhs=abs(L - disk.center), rhs=disk.radius,
                        gap=disk.radius - abs(L - disk.center),
                        k_n=float("nan"), area=float("nan"),
                        stderr=float("nan"),
                        verdict="ok" if ok else "violation",
                    )
                )
    print(f"yoccoz: {len(rows)} memberships, all pass: {all_ok}")
    return rows, (0 if all_ok else EXIT_VIOLATION)


def _verify_region(args, cfg, ledger):
    rng = np.random.default_rng(args.seed_value)
    ok = True
    for C in (4.0, 10.0, 100.0):
        dom = rg.OmegaDomain(C)
        bound = rg.omega_log_x_bound(C)
        members = 0
        for _ in range(10**4):
            L = complex(
                rng.uniform(0.0, min(2.0, 3.0 * bound)),
                rng.uniform(-math.pi, math.pi),
            )
            if rg.omega_log_contains(dom, L):
                members += 1
                if not L.real < bound:
                    ok = False
        print(f"region: C={C:g}: {members} members inside the x-bound")
    eq_ok = True
    for _ in range(10**4):
        L0 = complex(rng.uniform(1e-3, 3.0), rng.uniform(-3.0, 3.0))
        a0 = rng.uniform(0.0, 1.0)
        n = int(rng.integers(1, 9))
        rhs = 2.0 * math.pi * n * math.log(2.0) / (
            math.pi / 2.0 - math.atan((2.0**n - 1.0) * a0 / math.pi)
        )
        disk = abs(L0 - rhs / 2.0) <= rhs / 2.0
        if rg.cut_inequality_check(n, L0, a0) != disk:
            eq_ok = False
    ratio = rg.R_n_value(20, ledger) / (20.0 * math.log(2.0))
    asym_ok = abs(ratio - 2.0) < 1e-4
    print(f"region: cut-disk equivalence {eq_ok}, R_20/(20 log 2) = {ratio:.8f}")
    ok = ok and eq_ok and asym_ok
    return [], (0 if ok else EXIT_VIOLATION)


def _verify_lemma(args, cfg, ledger):
    samples = ob.sample_repelling_orbits(
        max(4, args.samples // 10), args.n_max, seed=args.seed_value,
        config=cfg.numerics, min_rho_dist_1=0.05, min_rho_abs=0.05,
    )
    rows = []
    for j, orb in enumerate(samples):
        g0 = rg.green_value(orb.c, 0.0, cfg.numerics)
        lam = max(4.0, math.exp(2.5 * g0))
        data = ob.gamma_coeffs(orb, cfg.numerics)
        chk = rg.lemma_basic_check(
            orb, data, lam, None, cfg.numerics, seed=args.seed_value + j
        )
        rows.append(
            rp.VerificationRow(
                orbit_id=f"n{orb.n}re{orb.c.real:+.12e}im{orb.c.imag:+.12e}k{j}",
                c=orb.c, n=orb.n, rho=orb.rho, rho_prime=data.rho_prime,
                lhs=chk.integral, rhs=chk.bound, gap=chk.bound - chk.integral,
                k_n=float("nan"), area=float("nan"), stderr=chk.stderr,
                verdict="ok" if chk.holds else "violation",
            )
        )
    bad = [r for r in rows if r.verdict != "ok"]
    print(f"lemma: {len(rows)} annulus integrals, all hold: {not bad}")
    return rows, (0 if not bad else EXIT_VIOLATION)


_VERIFY_SUITES = {
    "inequality": _verify_inequality,
    "identity": _verify_identity,
    "ruelle": _verify_ruelle,
    "el-bound": _verify_el_bound,
    "yoccoz": _verify_yoccoz,
    "region": _verify_region,
    "lemma": _verify_lemma,
}


def cmd_verify(args, cfg: RunConfig) -> int:
    ledger = _ledger_for(cfg)
    suites = list(_VERIFY_SUITES) if args.suite == "all" else [args.suite]
    status = EXIT_OK
    for name in suites:
        rows, code = _VERIFY_SUITES[name](args, cfg, ledger)
        status = max(status, code)
        path = _out_path(args, f"verify_{name.replace('-', '_')}.csv")
        if path is not None and cfg.emit_csv:
            rp.write_verification_csv(rows, path)
            print(f"# wrote {path}")
    return status


# ------------------------------------------------------------------ atlas


def cmd_atlas(args, cfg: RunConfig) -> int:
    ledger = _ledger_for(cfg)
    if args.action == "build":
        comps = at.components_up_to(args.n_max, cfg.numerics)
        records = []
        boundary_ts = ["1/2", "1/3", "2/3", "1/4"]
        for comp in comps:
            boundary = []
            for ts in boundary_ts:
                t = at.InternalArgument.parse(ts)
                boundary.append((ts, at.boundary_point(comp, t, cfg.numerics)))
            records.append(rp.component_record(comp, boundary))
        payload = rp.atlas_payload(ledger, records)
        path = _out_path(args, "atlas.json") or Path("atlas.json")
        rp.dump_json(payload, path)
        print(f"# {len(comps)} components up to period {args.n_max} -> {path}")
        return EXIT_OK
    payload = rp.load_atlas(args.atlas)
    c = parse_complex(args.c)
    best = None
    for recd in payload["components"]:
        center = complex(recd["center"][0], recd["center"][1])
        d = abs(center - c)
        if best is None or d < best[0]:
            best = (d, recd)
    recd = best[1]
    print(
        f"nearest component: period {recd['period']}, "
        f"center {recd['center'][0]:+.6f}{recd['center'][1]:+.6f}j, "
        f"distance {best[0]:.6f}"
    )
    return EXIT_OK


# ------------------------------------------------------------------- plot


def cmd_plot(args, cfg: RunConfig) -> int:
    ledger = _ledger_for(cfg)
    if args.kind == "regions":
        disks = []
        if args.yoccoz:
            for ts in args.yoccoz.split(","):
                disks.append(rg.yoccoz_disk(args.n, at.InternalArgument.parse(ts)))
        svg = plots.plot_regions(args.n, ledger, disks)
        name = f"regions_n{args.n}.svg"
    elif args.kind == "rays":
        c = parse_complex(args.c)
        lines = []
        for ts in args.angles.split(","):
            angle = ry.ExternalAngle.parse(ts)
            lines.append(ry.trace_dynamic_ray(c, angle, args.min_level, cfg.numerics))
        svg = plots.plot_rays(lines, title=f"dynamic rays at c = {c}")
        name = "rays.svg"
    else:
        t_list = args.toy.split(",")
        d_list = [float(x) for x in (args.d.split(",") if args.d else ["0.3"] * len(t_list))]
        card = at.main_cardioid(cfg.numerics)
        report = sq.toy_nesting(card, t_list, d_list, cfg.numerics)
        svg = plots.plot_nesting(report)
        name = "nesting.svg"
    path = _out_path(args, name) or Path(name)
    plots.write_svg(svg, path)
    print(f"# wrote {path}")
    return EXIT_OK


# --------------------------------------------------------------- sequence


def cmd_sequence(args, cfg: RunConfig) -> int:
    ledger = _ledger_for(cfg)
    if args.action == "generate":
        seq = sq.generate_sequence(
            args.n, args.depth, Fraction(args.shrink), ledger
        )
        path = _out_path(args, "sequence.seq") or Path("sequence.seq")
        sq.write_sequence_file(seq, path)
        print(f"# wrote {path}")
        reports = sq.verify_assumptions(seq, ledger)
    else:
        seq = sq.read_sequence_file(args.file)
        reports = sq.verify_assumptions(seq, ledger)
    indeterminate = False
    failed = False
    for r in reports:
        parts = [f"m={r.m}", f"mode={r.mode}", f"first={r.first.value}",
                 f"second={r.second.value}"]
        for label, v in (
            ("side", r.side_nine_tenths), ("budget", r.budget),
            ("sum", r.partial_sum),
        ):
            if v is not None:
                parts.append(f"{label}={v.value}")
        print("  ".join(parts))
        verdicts = [r.first, r.second, r.side_nine_tenths, r.budget, r.partial_sum]
        indeterminate |= any(v is Verdict.INDETERMINATE for v in verdicts if v is not None)
        failed |= any(v is Verdict.FAIL for v in verdicts if v is not None)
    if failed:
        return EXIT_VIOLATION
    if indeterminate and args.strict:
        return EXIT_INDETERMINATE
    return EXIT_OK


# ------------------------------------------------------------------- rays


def cmd_rays(args, cfg: RunConfig) -> int:
    angle = ry.ExternalAngle.parse(args.angle)
    if args.plane == "dynamic":
        c = parse_complex(args.c)
        ray = ry.trace_dynamic_ray(c, angle, args.min_level, cfg.numerics)
    else:
        ray = ry.trace_parameter_ray(angle, args.min_level, cfg.numerics)
    print(f"# {args.plane} ray {angle}: {len(ray.points)} points, "
          f"landing {ray.landing_estimate:.9f}, gap {ray.landing_gap:.3e}")
    path = _out_path(args, f"ray_{args.plane}_{angle.numerator}_{angle.denominator}.csv")
    if path is not None:
        records = [
            [rp.fmt(lv), rp.fmt(p.real), rp.fmt(p.imag)]
            for lv, p in zip(ray.levels, ray.points)
        ]
        Path(path).write_text(
            rp.rows_to_csv(["level", "re", "im"], records), encoding="ascii"
        )
        print(f"# wrote {path}")
    return EXIT_OK


# ------------------------------------------------------------------- main


def build_parser() -> argparse.ArgumentParser:
    # Global flags are accepted both before and after the subcommand; the
    # SUPPRESS default keeps a pre-command value from being clobbered.
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=argparse.SUPPRESS,
                        help="flat key = value config file")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                        help="RNG seed (default 0)")
    common.add_argument("--out", default=argparse.SUPPRESS,
                        help="output directory for reports")
    common.add_argument("--strict", action="store_true",
                        default=argparse.SUPPRESS,
                        help="exit 4 on indeterminate verdicts")
    p = argparse.ArgumentParser(prog="mandelmult", description=__doc__,
                                parents=[common])
    sub = p.add_subparsers(dest="command", required=True)

    def add_parser(name, **kw):
        return sub.add_parser(name, parents=[common], **kw)

    po = add_parser("orbits", help="enumerate periodic orbits and check identities")
    po.add_argument("--c", required=True)
    po.add_argument("--n", type=int, required=True)
    po.add_argument("--check-ruelle", action="store_true")
    po.set_defaults(func=cmd_orbits)

    pv = add_parser("verify", help="batch verification suites")
    pv.add_argument("suite", choices=sorted(_VERIFY_SUITES) + ["all"])
    pv.add_argument("--n-max", type=int, default=6)
    pv.add_argument("--samples", type=int, default=100)
    pv.add_argument("--k-safety", type=float, default=2.0,
                    help="multiplier on the sampled K_n in the main inequality")
    pv.set_defaults(func=cmd_verify)

    pa = add_parser("atlas", help="build or query the component atlas")
    pa.add_argument("action", choices=["build", "query"])
    pa.add_argument("--n-max", type=int, default=4)
    pa.add_argument("--c", default="0")
    pa.add_argument("--atlas", default="atlas.json")
    pa.set_defaults(func=cmd_atlas)

    pp = add_parser("plot", help="emit SVG plots")
    pp.add_argument("kind", choices=["regions", "rays", "nesting"])
    pp.add_argument("--n", type=int, default=3)
    pp.add_argument("--yoccoz", default=None)
    pp.add_argument("--c", default="-1")
    pp.add_argument("--angles", default="1/3,2/3")
    pp.add_argument("--min-level", type=float, default=1e-6)
    pp.add_argument("--toy", default="1/2,1/2")
    pp.add_argument("--d", default=None)
    pp.set_defaults(func=cmd_plot)

    ps = add_parser("sequence", help="generate or check argument sequences")
    ps.add_argument("action", choices=["generate", "check"])
    ps.add_argument("--n", type=int, default=1)
    ps.add_argument("--depth", type=int, default=2)
    ps.add_argument("--shrink", default="1/10")
    ps.add_argument("file", nargs="?")
    ps.set_defaults(func=cmd_sequence)

    pr = add_parser("rays", help="trace external rays to CSV")
    pr.add_argument("plane", choices=["dynamic", "parameter"])
    pr.add_argument("--c", default="-1")
    pr.add_argument("--angle", required=True)
    pr.add_argument("--min-level", type=float, default=1e-6)
    pr.set_defaults(func=cmd_rays)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    args.config = getattr(args, "config", None)
    args.seed = getattr(args, "seed", None)
    args.out = getattr(args, "out", None)
    args.strict = getattr(args, "strict", False)
    try:
        cfg = load_config(args.config) if args.config else RunConfig()
        seed = args.seed if args.seed is not None else cfg.numerics.rng_seed
        cfg = cfg.with_seed(seed)
        args.seed_value = seed
        if args.command == "sequence" and args.action == "check" and not args.file:
            raise ConfigError("sequence check requires a file argument")
        return args.func(args, cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    except MandelmultError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
