"""Deterministic SVG emission for region, ray, and nesting geometry.

Hand-rolled markup: a fixed viewBox transform, polylines, and circles with
six-decimal coordinates, so identical inputs produce identical bytes up to
the generator comment in the header.
"""

from __future__ import annotations

import math
from pathlib import Path

from . import __version__
from .regions import ConstantsLedger, R_n_value, omega_for_period

_W = 800
_H = 600


class SvgCanvas:
    """Maps a data window onto a fixed pixel frame and collects elements."""

    def __init__(self, x0, x1, y0, y1, title=""):
        self.x0, self.x1, self.y0, self.y1 = x0, x1, y0, y1
        self.parts: list[str] = []
        self.title = title

    def _tx(self, x: float) -> float:
        return (x - self.x0) / (self.x1 - self.x0) * _W

    def _ty(self, y: float) -> float:
        return _H - (y - self.y0) / (self.y1 - self.y0) * _H

    def polyline(self, pts, color="#003366", width=1.2) -> None:
        if not pts:
            return
        coords = " ".join(
            f"{self._tx(p[0]):.6f},{self._ty(p[1]):.6f}" for p in pts
        )
        self.parts.append(
            f'<polyline fill="none" stroke="{color}" stroke-width="{width}" '
            f'points="{coords}"/>'
        )

    def circle(self, cx, cy, r_data, color="#aa3311", width=1.2, dash=False) -> None:
        rx = r_data / (self.x1 - self.x0) * _W
        ry = r_data / (self.y1 - self.y0) * _H
        dash_attr = ' stroke-dasharray="6 4"' if dash else ""
        self.parts.append(
            f'<ellipse fill="none" stroke="{color}" stroke-width="{width}"'
            f'{dash_attr} cx="{self._tx(cx):.6f}" cy="{self._ty(cy):.6f}" '
            f'rx="{abs(rx):.6f}" ry="{abs(ry):.6f}"/>'
        )

    def dot(self, cx, cy, color="#000000") -> None:
        self.parts.append(
            f'<circle fill="{color}" cx="{self._tx(cx):.6f}" '
            f'cy="{self._ty(cy):.6f}" r="2.5"/>'
        )

    def text(self, x, y, s, size=14) -> None:
        self.parts.append(
            f'<text x="{self._tx(x):.6f}" y="{self._ty(y):.6f}" '
            f'font-size="{size}" font-family="monospace">{s}</text>'
        )

    def render(self) -> str:
        head = (
            '<?xml version="1.0" encoding="UTF-8"?>\n'
            f"<!-- generator: mandelmult {__version__} -->\n"
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
            f'viewBox="0 0 {_W} {_H}">\n'
            f'<rect width="{_W}" height="{_H}" fill="white"/>\n'
        )
        if self.title:
            head += (
                f'<text x="10" y="20" font-size="15" font-family="monospace">'
                f"{self.title}</text>\n"
            )
        return head + "\n".join(self.parts) + "\n</svg>\n"


def _omega_boundary_curve(C: float, samples: int = 400) -> list[tuple[float, float]]:
    """Boundary y(x) of the log-domain lobe with y > 0, for 0 < x < cut."""
    from .regions import _omega_x_cut

    cut = min(_omega_x_cut(C), 2.0 / (C - 2.0) if C > 2 else 2.0)
    pts = []
    for i in range(1, samples):
        x = cut * i / samples
        rhs = (C * C * x * x - (math.expm1(x)) ** 2) / (4.0 * math.exp(x))
        if rhs >= 1.0:
            break
        if rhs <= 0.0:
            y = 0.0
        else:
            y = 2.0 * math.asin(math.sqrt(rhs))
        pts.append((x, y))
    return pts


def plot_regions(n: int, ledger: ConstantsLedger, yoccoz: list | None = None) -> str:
    """The log-domain lobes for period n with the deleted-disk tongue.

    The lobes live in a strip of width ~ 2n/(4^n B0), orders of magnitude
    thinner than the deleted disk's radius ~ 2n log 2; the frame follows
    the lobe scale and the disk appears as the parabolic tongue
    |y| = sqrt(2 R_n x - x^2) entering from the right.
    """
    dom = omega_for_period(n, ledger)
    rn = R_n_value(n, ledger)
    curve = _omega_boundary_curve(dom.C)
    xmax = max((p[0] for p in curve), default=0.1)
    canvas = SvgCanvas(
        -0.12 * xmax,
        1.25 * xmax,
        -math.pi * 1.15,
        math.pi * 1.15,
        title=f"log-domain boundary and deleted disk tongue, period {n}",
    )
    upper = [(x, y) for x, y in curve]
    lower = [(x, -y) for x, y in curve]
    canvas.polyline([(0, math.pi)] + upper + [(xmax, math.pi)], color="#003366")
    canvas.polyline([(0, -math.pi)] + lower + [(xmax, -math.pi)], color="#003366")
    canvas.polyline([(0, -math.pi), (0, math.pi)], color="#888888", width=0.6)
    tongue_u = []
    tongue_l = []
    for i in range(1, 220):
        x = 1.25 * xmax * i / 220.0
        y2 = 2.0 * rn * x - x * x
        if y2 <= 0:
            continue
        y = math.sqrt(y2)
        tongue_u.append((x, y))
        tongue_l.append((x, -y))
    canvas.polyline([(0.0, 0.0)] + tongue_u, color="#aa3311", width=1.2)
    canvas.polyline([(0.0, 0.0)] + tongue_l, color="#aa3311", width=1.2)
    for disk in yoccoz or []:
        canvas.circle(disk.center.real, disk.center.imag, disk.radius, color="#117733")
    return canvas.render()


def plot_rays(polylines, landings=None, title="external rays") -> str:
    xs = [p.real for r in polylines for p in r.points]
    ys = [p.imag for r in polylines for p in r.points]
    pad = 0.3
    canvas = SvgCanvas(
        min(xs) - pad, max(xs) + pad, min(ys) - pad, max(ys) + pad, title=title
    )
    for ray in polylines:
        canvas.polyline([(p.real, p.imag) for p in ray.points])
        canvas.dot(ray.landing_estimate.real, ray.landing_estimate.imag, "#aa3311")
    for p in landings or []:
        canvas.dot(p.real, p.imag, "#117733")
    return canvas.render()


def plot_nesting(report, title="nested bifurcation disks") -> str:
    disks = []
    for lev in report.levels:
        for d, color in (
            (lev.disk_B, "#003366"),
            (lev.disk_D, "#117733"),
            (lev.disk_D_prime, "#aa3311"),
        ):
            if d is not None and math.isfinite(d.radius):
                disks.append((d, color))
    if not disks:
        canvas = SvgCanvas(-2, 1, -1.5, 1.5, title=title)
        return canvas.render()
    finite = [d for d, _ in disks if d.radius < 1e3]
    ref = finite if finite else [d for d, _ in disks]
    cx = sum(d.center.real for d in ref) / len(ref)
    cy = sum(d.center.imag for d in ref) / len(ref)
    span = max(max(d.radius for d in ref) * 1.4, 1e-6)
    canvas = SvgCanvas(cx - span, cx + span, cy - span, cy + span, title=title)
    for d, color in disks:
        canvas.circle(d.center.real, d.center.imag, d.radius, color=color)
    canvas.dot(report.c_star_estimate.real, report.c_star_estimate.imag)
    return canvas.render()


def write_svg(text: str, path) -> None:
    Path(path).write_text(text, encoding="ascii")
