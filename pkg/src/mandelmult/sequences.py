"""Internal-argument sequences and their depth certificates.

A sequence t_0, t_1, ... of reduced rationals t_m = p_m/q_m drives a chain
of bifurcations with periods n_m = n q_0 ... q_{m-1}. The certified
properties per term are

    (first)   p_m > 2 B0 4^{n_m}
    (second)  p_m^2 / q_m > 2 n_m^2
    (side)    |t_m|^{1/q_{m-1}} < 9/10          (m >= 1)
    (budget)  |t_m| <= shrink^{(m+1) q_{m-1}}   (generator terms)
    (sum)     sum_{k<=m} |t_k|^{1/q_{k-1}} < 4^{-n}/16

Terms too large to store exactly are carried as rigorous directed-rounded
log2 intervals with exact Fraction endpoints. The padding 2^-40 dominates
the sub-ulp error of math.log2 on 53-bit integers, which is the only
floating step in the pipeline; everything downstream is exact rational
arithmetic.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .atlas import (
    HyperbolicComponent,
    InternalArgument,
    bifurcation_child,
    boundary_point,
    orbit_set_distance,
    psi_W,
)
from .dynamics import DEFAULT_CONFIG, NumericsConfig
from .errors import (
    ContinuationError,
    DomainError,
    InfeasibleShrink,
    LogspaceOverflow,
)
from .regions import ConstantsLedger

_PAD = Fraction(1, 2**40)
_EXPONENT_BIT_LIMIT = 10**7


class Verdict(enum.Enum):
    PASS = "pass"
    FAIL = "fail"
    INDETERMINATE = "indeterminate"

    def __bool__(self) -> bool:
        return self is Verdict.PASS


def log2_bounds_int(x: int) -> tuple[Fraction, Fraction]:
    """Rigorous rational bounds on log2 of a positive integer."""
    if x <= 0:
        raise DomainError("log2 bounds need a positive integer")
    k = x.bit_length()
    if k <= 53:
        v = Fraction(math.log2(x))
        return v - _PAD, v + _PAD
    shift = k - 53
    m = x >> shift
    v = Fraction(math.log2(m)) + shift
    # Truncation drops < 1 ulp of m: log2(x) < log2(m+1) + shift.
    return v - _PAD, v + _PAD


def log2_bounds_fraction(fr: Fraction) -> tuple[Fraction, Fraction]:
    if fr <= 0:
        raise DomainError("log2 bounds need a positive rational")
    nlo, nhi = log2_bounds_int(fr.numerator)
    dlo, dhi = log2_bounds_int(fr.denominator)
    return nlo - dhi, nhi - dlo


def log2_add_upper(u: Fraction, v: Fraction) -> Fraction:
    """Upper bound for log2(a + b) given upper bounds u, v of log2 a, log2 b."""
    hi, lo = (u, v) if u >= v else (v, u)
    d = hi - lo
    if d >= 64:
        return hi + Fraction(1, 2**60)
    df = int(d)  # floor for nonnegative Fractions
    # log2(1 + 2^-df) <= (3/2) 2^-df
    return hi + Fraction(3, 2 ** (df + 1))


@dataclass(frozen=True)
class Log2Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise DomainError("inverted interval")

    @classmethod
    def exact(cls, value: Fraction) -> "Log2Interval":
        return cls(value, value)

    @classmethod
    def of_int(cls, x: int) -> "Log2Interval":
        lo, hi = log2_bounds_int(x)
        return cls(lo, hi)


@dataclass(frozen=True)
class SequenceTerm:
    """One internal argument, stored exactly or as log2 intervals.

    Exact terms carry p, q (and t = p/q reduced in (-1/2, 1/2]); logspace
    terms are the pairs p = 2^a, q = 2^b + 1 encoded by their log2 interval
    bounds, with a, b recoverable from the endpoints.
    """

    m: int
    mode: str  # "exact" | "logspace"
    p: int | None = None
    q: int | None = None
    log2p: Log2Interval | None = None
    log2q: Log2Interval | None = None

    def log2_p(self) -> Log2Interval:
        if self.mode == "exact":
            return Log2Interval.of_int(abs(self.p))
        return self.log2p

    def log2_q(self) -> Log2Interval:
        if self.mode == "exact":
            return Log2Interval.of_int(self.q)
        return self.log2q

    def log2_abs_t(self) -> Log2Interval:
        lp, lq = self.log2_p(), self.log2_q()
        return Log2Interval(lp.lo - lq.hi, lp.hi - lq.lo)


@dataclass(frozen=True)
class ArgumentSequence:
    n0: int
    shrink: Fraction
    terms: tuple[SequenceTerm, ...]


def _q_as_int(term: SequenceTerm) -> int:
    """Exact integer value of q, reconstructing 2^b + 1 for logspace terms."""
    if term.mode == "exact":
        return term.q
    b = int(term.log2q.lo)  # endpoints bracket b <= log2(2^b+1) <= b + pad
    if b > _EXPONENT_BIT_LIMIT:
        raise LogspaceOverflow(
            f"q exponent {b} exceeds the {_EXPONENT_BIT_LIMIT}-bit budget"
        )
    return (1 << b) + 1


def generate_sequence(
    n: int,
    depth: int,
    shrink,
    ledger: ConstantsLedger,
    exact_bit_limit: int = 8192,
) -> ArgumentSequence:
    """Construct depth terms satisfying every certificate by a wide margin.

    Term 0 is p_0 = floor(2 B0 4^n) + 1 with q_0 = 2 p_0 + 1. Later terms
    must clear both the growth condition (first) and the budget
    |t_m| <= shrink^{(m+1) q_{m-1}}, whose combination with (second) forces
    p_m past 2 n_m^2 shrink^{-(m+1) q_{m-1}}. Terms whose integers fit in
    exact_bit_limit bits are stored exactly; beyond that the term is chosen
    in the coprime family p = 2^a, q = 2^b + 1, whose log2 intervals are
    essentially exact. Exponents themselves overflowing the 10^7-bit budget
    raise LogspaceOverflow (for the default ledger this happens at m = 3).
    """
    if depth < 1:
        raise DomainError("depth must be >= 1")
    shrink = Fraction(shrink)
    if not 0 < shrink < 1:
        raise DomainError("shrink must lie in (0, 1)")
    delta = Fraction(1, 4**n * 16)
    if shrink * shrink / (1 - shrink) >= delta:
        raise InfeasibleShrink(
            f"sum of shrink^(m+1) is {float(shrink * shrink / (1 - shrink)):.3g}"
            f" >= 4^-{n}/16"
        )
    b0 = Fraction(ledger.B0)
    inv = 1 / shrink
    log2_inv_hi = log2_bounds_fraction(inv)[1]
    log2_b0_hi = log2_bounds_fraction(b0)[1]

    terms: list[SequenceTerm] = []
    n_m = n
    q_prev: int | None = None
    for m in range(depth):
        if n_m.bit_length() > _EXPONENT_BIT_LIMIT:
            raise LogspaceOverflow(
                f"period n_{m} needs {n_m.bit_length()} bits; deeper terms are"
                " not representable even in log space"
            )
        if m == 0:
            p = int(2 * b0 * 4**n_m) + 1
            q = 2 * p + 1
            terms.append(SequenceTerm(m=m, mode="exact", p=p, q=q))
            q_prev = q
            n_m = n_m * q
            continue
        budget_exp = (m + 1) * q_prev
        # Size estimate decides the representation before anything big is built.
        est_bits = max(
            2 * n_m + 2,
            int(budget_exp * log2_inv_hi) + 2 * n_m.bit_length() + 4,
        )
        if est_bits <= exact_bit_limit:
            lower = max(
                int(2 * b0 * 4**n_m),
                int(2 * n_m * n_m * inv**budget_exp),
            )
            p = 2 * lower + 1
            q = p * inv**budget_exp
            q_int = int(q) + 1
            while math.gcd(p, q_int) != 1:
                q_int += 1
            if not p * p > 2 * n_m * n_m * q_int:
                raise DomainError("internal: exact term failed (second)")
            terms.append(SequenceTerm(m=m, mode="exact", p=p, q=q_int))
            q_prev = q_int
            n_m = n_m * q_int
            continue
        # Logspace: p = 2^a, q = 2^b + 1.
        a_first = 2 * n_m + _ceil_fraction(log2_b0_hi) + 2
        a_budget = (
            _ceil_fraction(budget_exp * log2_inv_hi)
            + 2 * n_m.bit_length()
            + 6
        )
        a = max(a_first, a_budget)
        if a.bit_length() > _EXPONENT_BIT_LIMIT:
            raise LogspaceOverflow(
                f"term {m} exponent needs {a.bit_length()} bits"
            )
        b = a + _ceil_fraction(budget_exp * log2_inv_hi) + 1
        # (second) needs 2a - (b + pad) > 1 + 2 log2(n_m); grow a if not.
        need = b + 2 + 2 * n_m.bit_length()
        if 2 * a <= need:
            a = need
            b = a + _ceil_fraction(budget_exp * log2_inv_hi) + 1
        lp = Log2Interval.exact(Fraction(a))
        lq = Log2Interval(Fraction(b), b + _q_plus_one_pad(b))
        terms.append(SequenceTerm(m=m, mode="logspace", log2p=lp, log2q=lq))
        if m + 1 < depth:
            # The next term needs q_m as an actual integer.
            if b > _EXPONENT_BIT_LIMIT:
                raise LogspaceOverflow(
                    f"term {m} q exponent itself needs {b.bit_length()} bits;"
                    " the next term is unreachable"
                )
            q_prev = (1 << b) + 1
            n_m = n_m * q_prev
    return ArgumentSequence(n0=n, shrink=shrink, terms=tuple(terms))


def _ceil_fraction(x) -> int:
    return int(math.ceil(x))


def _q_plus_one_pad(b: int) -> Fraction:
    """Upper bound for log2(2^b + 1) - b."""
    if b >= 60:
        return Fraction(1, 2**60)
    return Fraction(3, 2 ** (b + 1))


@dataclass(frozen=True)
class TermReport:
    m: int
    mode: str
    n_m: int
    first: Verdict
    second: Verdict
    side_nine_tenths: Verdict | None
    budget: Verdict | None
    partial_sum: Verdict | None
    partial_sum_log2_hi: Fraction | None


def _verdict_less(
    lo: Fraction, hi: Fraction, bound_lo: Fraction, bound_hi: Fraction
) -> Verdict:
    """Verdict for 'quantity < bound' with both sides known by intervals."""
    if hi < bound_lo:
        return Verdict.PASS
    if lo >= bound_hi:
        return Verdict.FAIL
    return Verdict.INDETERMINATE


def _verdict_greater(
    lo: Fraction, hi: Fraction, bound_lo: Fraction, bound_hi: Fraction
) -> Verdict:
    if lo > bound_hi:
        return Verdict.PASS
    if hi <= bound_lo:
        return Verdict.FAIL
    return Verdict.INDETERMINATE


def verify_assumptions(
    seq: ArgumentSequence, ledger: ConstantsLedger
) -> list[TermReport]:
    """Per-term certificates, exact where the term is exact.

    Exact terms compare integers and rationals directly; logspace terms
    compare log2 intervals, reporting INDETERMINATE when an interval
    straddles its bound. Partial sums of |t_k|^{1/q_{k-1}} are accumulated
    as directed log2 upper bounds and compared against 4^-n/16, whose log2
    is the exact integer -(2n + 4).
    """
    reports: list[TermReport] = []
    n_m = seq.n0
    q_prev: int | None = None
    sum_hi: Fraction | None = None
    sum_lo: Fraction | None = None
    log2_delta = Fraction(-(2 * seq.n0 + 4))
    b0 = Fraction(ledger.B0)
    nine_lo, nine_hi = log2_bounds_fraction(Fraction(9, 10))
    for idx, term in enumerate(seq.terms):
        lp = term.log2_p()
        lq = term.log2_q()
        if term.mode == "exact":
            p, q = abs(term.p), term.q
            first = Verdict.PASS if Fraction(p) > 2 * b0 * 4**n_m else Verdict.FAIL
            second = Verdict.PASS if p * p > 2 * n_m * n_m * q else Verdict.FAIL
        else:
            b_lo = log2_bounds_fraction(2 * b0)[0] + 2 * n_m
            b_hi = log2_bounds_fraction(2 * b0)[1] + 2 * n_m
            first = _verdict_greater(lp.lo, lp.hi, b_lo, b_hi)
            n_lo, n_hi = log2_bounds_int(n_m)
            second = _verdict_greater(
                2 * lp.lo, 2 * lp.hi, 1 + 2 * n_lo + lq.lo, 1 + 2 * n_hi + lq.hi
            )
        side = None
        budget = None
        partial = None
        if term.m >= 1:
            if q_prev is None:
                raise DomainError("terms out of order: missing predecessor q")
            lt = term.log2_abs_t()
            eps_lo, eps_hi = lt.lo / q_prev, lt.hi / q_prev
            e_m = (term.m + 1) * q_prev
            if term.mode == "exact":
                # Exact terms can sit exactly on the generator's budget
                # boundary, which no interval can decide; compare the
                # rationals directly.
                t_abs = Fraction(abs(term.p), term.q)
                side = (
                    Verdict.PASS
                    if t_abs < Fraction(9, 10) ** q_prev
                    else Verdict.FAIL
                )
                if seq.shrink is not None:
                    budget = (
                        Verdict.PASS
                        if t_abs <= seq.shrink**e_m
                        else Verdict.FAIL
                    )
            else:
                side = _verdict_less(eps_lo, eps_hi, nine_lo, nine_hi)
                if seq.shrink is not None:
                    sh_lo, sh_hi = log2_bounds_fraction(seq.shrink)
                    budget = _verdict_less(lt.lo, lt.hi, e_m * sh_lo, e_m * sh_hi)
            sum_hi = eps_hi if sum_hi is None else log2_add_upper(sum_hi, eps_hi)
            sum_lo = eps_lo if sum_lo is None else max(sum_lo, eps_lo)
            # The running sum is known by [max term, add-chain] bounds.
            partial = _verdict_less(sum_lo, sum_hi, log2_delta, log2_delta)
        reports.append(
            TermReport(
                m=term.m,
                mode=term.mode,
                n_m=n_m,
                first=first,
                second=second,
                side_nine_tenths=side,
                budget=budget,
                partial_sum=partial,
                partial_sum_log2_hi=sum_hi,
            )
        )
        if idx + 1 < len(seq.terms):
            q_prev = _q_as_int(term)
            n_m = n_m * q_prev
    return reports


def write_sequence_file(seq: ArgumentSequence, path) -> None:
    """One term per line: `m p q exact` or the five-field logspace form."""
    lines = [f"# n0 {seq.n0}", f"# shrink {seq.shrink}"]
    for t in seq.terms:
        if t.mode == "exact":
            lines.append(f"{t.m} {t.p} {t.q} exact")
        else:
            lines.append(
                f"{t.m} {t.log2p.lo} {t.log2p.hi} {t.log2q.lo} {t.log2q.hi} logspace"
            )
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def read_sequence_file(path) -> ArgumentSequence:
    n0 = None
    shrink = None
    terms = []
    with open(path, "r", encoding="ascii") as fh:
        for raw in fh:
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                parts = line[1:].split()
                if len(parts) == 2 and parts[0] == "n0":
                    n0 = int(parts[1])
                elif len(parts) == 2 and parts[0] == "shrink":
                    shrink = Fraction(parts[1])
                continue
            parts = line.split()
            if parts[-1] == "exact":
                m, p, q = int(parts[0]), int(parts[1]), int(parts[2])
                terms.append(SequenceTerm(m=m, mode="exact", p=p, q=q))
            elif parts[-1] == "logspace":
                m = int(parts[0])
                vals = [Fraction(x) for x in parts[1:5]]
                terms.append(
                    SequenceTerm(
                        m=m,
                        mode="logspace",
                        log2p=Log2Interval(vals[0], vals[1]),
                        log2q=Log2Interval(vals[2], vals[3]),
                    )
                )
            else:
                raise DomainError(f"unrecognised sequence line: {line!r}")
    if n0 is None:
        raise DomainError("sequence file missing '# n0' header")
    return ArgumentSequence(
        n0=n0, shrink=shrink if shrink is not None else Fraction(1, 10),
        terms=tuple(terms),
    )


# ---------------------------------------------------------------------------
# Toy nesting of bifurcation disks.


@dataclass(frozen=True)
class BoundingDisk:
    center: complex
    radius: float

    def contains_disk(self, other: "BoundingDisk", tol: float = 1e-9) -> bool:
        return abs(other.center - self.center) + other.radius <= self.radius + tol


@dataclass(frozen=True)
class NestingLevel:
    m: int
    period: int
    tangency: complex
    disk_B: BoundingDisk | None
    disk_D: BoundingDisk | None
    disk_D_prime: BoundingDisk | None
    disk_Bc: BoundingDisk | None
    eps: float | None
    shrink_ratio: float | None
    inclusion_c_next_in_D: bool | None
    inclusion_Bc_next_in_D_prime: bool | None


@dataclass(frozen=True)
class NestingReport:
    levels: tuple[NestingLevel, ...]
    c_star_estimate: complex
    c_star_radius: float
    components: tuple[HyperbolicComponent, ...] = field(repr=False, default=())


def _map_log_disk(
    component: HyperbolicComponent,
    center_w: complex,
    radius: float,
    config: NumericsConfig,
    samples: int = 64,
) -> BoundingDisk | None:
    """Bounding disk of psi(exp(disk)) from 64 boundary images, None on failure."""
    pts = []
    for j in range(samples):
        w = center_w + radius * complex(
            math.cos(2 * math.pi * j / samples), math.sin(2 * math.pi * j / samples)
        )
        rho = cmath.exp(w)
        try:
            pts.append(psi_W(component, rho, None, config))
        except ContinuationError:
            return None
    re = [p.real for p in pts]
    im = [p.imag for p in pts]
    center = complex((min(re) + max(re)) / 2.0, (min(im) + max(im)) / 2.0)
    radius_out = max(abs(p - center) for p in pts)
    return BoundingDisk(center, radius_out)


def toy_nesting(
    W: HyperbolicComponent,
    t_list,
    d_list,
    config: NumericsConfig = DEFAULT_CONFIG,
) -> NestingReport:
    """Numerically trace the nested-disk structure along a toy chain.

    Level m maps, through the chart of the m-th component around its
    outgoing tangency argument, the log-plane disks of radius (9/10)^{q_m}
    (B), |t_{m+1}| (D), 100 |t_{m+1}| (D'), and d_m/2 (the limb cover).
    The final level has no successor argument, so its D and D' fall back to
    the B disk, whose center serves as the accumulation estimate. Toy
    arguments need not satisfy the depth hypotheses; inclusion failures are
    reported, not raised.
    """
    t_list = [t if isinstance(t, InternalArgument) else InternalArgument.parse(str(t))
              for t in t_list]
    d_list = list(d_list)
    if len(d_list) != len(t_list):
        raise DomainError("d_list must match t_list in length")
    period = W.n
    for t in t_list[:-1]:
        period *= t.q
        if period > 12:
            raise DomainError("toy chains keep every period at 12 or below")
    comps = [W]
    for t in t_list[:-1]:
        comps.append(bifurcation_child(comps[-1], t, config))
    levels: list[NestingLevel] = []
    prev_b_radius: float | None = None
    last_dprime: BoundingDisk | None = None
    for m, (comp, t) in enumerate(zip(comps, t_list)):
        w_center = 2j * math.pi * float(t)
        tangency = boundary_point(comp, t, config)
        t_next = t_list[m + 1] if m + 1 < len(t_list) else None
        disk_B = _map_log_disk(comp, w_center, 0.9**t.q, config)
        disk_Bc = _map_log_disk(comp, w_center, d_list[m] / 2.0, config)
        if t_next is not None:
            r_next = abs(float(t_next))
            disk_D = _map_log_disk(comp, w_center, r_next, config)
            disk_Dp = _map_log_disk(comp, w_center, 100.0 * r_next, config)
            eps = r_next ** (1.0 / t.q)
        else:
            disk_D = disk_B
            disk_Dp = disk_B
            eps = None
        incl_c = None
        incl_bc = None
        if t_next is not None and disk_D is not None:
            c_next = boundary_point(comps[m + 1], t_next, config) if m + 1 < len(
                comps
            ) else None
            if c_next is not None:
                incl_c = abs(c_next - disk_D.center) <= disk_D.radius + 1e-9
        shrink_ratio = None
        if disk_B is not None and prev_b_radius is not None:
            shrink_ratio = disk_B.radius / prev_b_radius
        if disk_B is not None:
            prev_b_radius = disk_B.radius
        levels.append(
            NestingLevel(
                m=m,
                period=comp.n,
                tangency=tangency,
                disk_B=disk_B,
                disk_D=disk_D,
                disk_D_prime=disk_Dp,
                disk_Bc=disk_Bc,
                eps=eps,
                shrink_ratio=shrink_ratio,
                inclusion_c_next_in_D=incl_c,
                inclusion_Bc_next_in_D_prime=incl_bc,
            )
        )
        if disk_Dp is not None:
            last_dprime = disk_Dp
    # Second pass for the B(c_{m+1}) in D_m' inclusions.
    fixed: list[NestingLevel] = []
    for m, lev in enumerate(levels):
        incl_bc = None
        if m + 1 < len(levels) and lev.disk_D_prime is not None:
            nxt = levels[m + 1].disk_Bc
            if nxt is not None:
                incl_bc = lev.disk_D_prime.contains_disk(nxt)
        fixed.append(
            NestingLevel(
                m=lev.m,
                period=lev.period,
                tangency=lev.tangency,
                disk_B=lev.disk_B,
                disk_D=lev.disk_D,
                disk_D_prime=lev.disk_D_prime,
                disk_Bc=lev.disk_Bc,
                eps=lev.eps,
                shrink_ratio=lev.shrink_ratio,
                inclusion_c_next_in_D=lev.inclusion_c_next_in_D,
                inclusion_Bc_next_in_D_prime=incl_bc,
            )
        )
    if last_dprime is None:
        est, rad = 0j, math.inf
    else:
        est, rad = last_dprime.center, last_dprime.radius
    return NestingReport(
        levels=tuple(fixed),
        c_star_estimate=est,
        c_star_radius=rad,
        components=tuple(comps),
    )


def limb_cover_diameter(
    W: HyperbolicComponent,
    t: InternalArgument,
    config: NumericsConfig = DEFAULT_CONFIG,
) -> float:
    """Diameter of the chart image covering the t-limb.

    Maps the log-plane disk of radius d/2 around 2 pi i t through the
    component chart, with d = (4 n log 2)/q the Yoccoz-derived cap on the
    cover radius; the limb is contained in the image, so the bounding-disk
    diameter is the limb-size estimate whose product with p/4^n stays
    uniformly bounded.
    """
    if t.p == 0:
        raise DomainError("t must be nonzero")
    d = 4.0 * W.n * math.log(2.0) / t.q
    disk = _map_log_disk(W, 2j * math.pi * float(t), d / 2.0, config)
    if disk is None:
        raise ContinuationError("limb cover could not be mapped")
    return 2.0 * disk.radius


@dataclass(frozen=True)
class ChainDistance:
    index: int
    distance: float
    bound: float
    within: bool


@dataclass(frozen=True)
class DistanceMonitor:
    min_dist: float
    threshold: float
    witness_ok: bool
    chain: tuple[ChainDistance, ...] = ()


def orbit_distance_monitor(
    c: complex,
    orbits,
    n: int,
    chain_pairs=None,
) -> DistanceMonitor:
    """Distance of the orbit chain from the origin, against 4^-n/2.

    chain_pairs, when given, is a sequence of (A_points, B_points, bound)
    triples reporting the one-sided distances d(A, B) of consecutive
    bifurcated orbits against their 7 eps bounds.
    """
    pts = [p for o in orbits for p in o.points]
    if not pts:
        raise DomainError("no orbit points supplied")
    for o in orbits:
        if abs(complex(o.c) - complex(c)) > 1e-9:
            raise DomainError("orbits must be continued to the common parameter")
    min_dist = min(abs(p) for p in pts)
    threshold = 4.0**-n / 2.0
    chain = []
    if chain_pairs:
        for i, (a_pts, b_pts, bound) in enumerate(chain_pairs):
            d = orbit_set_distance(a_pts, b_pts)
            chain.append(ChainDistance(i, d, bound, d < bound))
    return DistanceMonitor(min_dist, threshold, min_dist >= threshold, tuple(chain))
