"""CSV and JSON emission with deterministic, round-trip-safe formatting."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from pathlib import Path

from .atlas import HyperbolicComponent
from .regions import ConstantsLedger

ATLAS_FORMAT_VERSION = 1


def fmt(x: float) -> str:
    """Floats serialized with 17 significant digits (lossless round trip)."""
    return format(float(x), ".17g")


@dataclass(frozen=True)
class VerificationRow:
    """One orbit's worth of inequality bookkeeping for a CSV report."""

    orbit_id: str
    c: complex
    n: int
    rho: complex
    rho_prime: complex
    lhs: float
    rhs: float
    gap: float
    k_n: float
    area: float
    stderr: float
    verdict: str

    def as_record(self) -> list[str]:
        return [
            self.orbit_id,
            fmt(self.c.real),
            fmt(self.c.imag),
            str(self.n),
            fmt(self.rho.real),
            fmt(self.rho.imag),
            fmt(self.rho_prime.real),
            fmt(self.rho_prime.imag),
            fmt(self.lhs),
            fmt(self.rhs),
            fmt(self.gap),
            fmt(self.k_n),
            fmt(self.area),
            fmt(self.stderr),
            self.verdict,
        ]


VERIFICATION_HEADER = [
    "orbit_id", "c_re", "c_im", "n", "rho_re", "rho_im",
    "rho_prime_re", "rho_prime_im", "lhs", "rhs", "gap",
    "k_n", "area", "stderr", "verdict",
]


def rows_to_csv(header: list[str], records: list[list[str]]) -> str:
    """RFC-style quoted CSV with \\n line endings, as one string."""
    buf = io.StringIO()
    writer = csv.writer(buf, quoting=csv.QUOTE_MINIMAL, lineterminator="\n")
    writer.writerow(header)
    for rec in records:
        writer.writerow(rec)
    return buf.getvalue()


def write_verification_csv(rows: list[VerificationRow], path: str | Path) -> None:
    """Canonical order (n, re c, im c, orbit_id) so parallel fill never
    changes bytes."""
    rows = sorted(rows, key=lambda r: (r.n, r.c.real, r.c.imag, r.orbit_id))
    text = rows_to_csv(VERIFICATION_HEADER, [r.as_record() for r in rows])
    Path(path).write_text(text, encoding="ascii")


class _Float17(float):
    def __repr__(self) -> str:  # json uses repr for floats
        return format(float(self), ".17g")


def _wrap_floats(obj):
    if isinstance(obj, bool):
        return obj
    if isinstance(obj, float):
        if not math.isfinite(obj):
            raise ValueError("non-finite float in JSON payload")
        return _Float17(obj)
    if isinstance(obj, dict):
        return {k: _wrap_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_wrap_floats(v) for v in obj]
    return obj


def dump_json(payload: dict, path: str | Path) -> None:
    text = json.dumps(_wrap_floats(payload), indent=1, sort_keys=True)
    Path(path).write_text(text + "\n", encoding="ascii")


def component_record(
    comp: HyperbolicComponent, boundary: list[tuple[str, complex]]
) -> dict:
    return {
        "period": comp.n,
        "center": [comp.center.real, comp.center.imag],
        "root": [comp.root.real, comp.root.imag],
        "boundary": [
            {"t": t, "c": [c.real, c.imag]} for t, c in boundary
        ],
    }


def atlas_payload(
    ledger: ConstantsLedger,
    components: list[dict],
    verification_rows: list[VerificationRow] | None = None,
) -> dict:
    rows = verification_rows or []
    rows = sorted(rows, key=lambda r: (r.n, r.c.real, r.c.imag, r.orbit_id))
    return {
        "version": ATLAS_FORMAT_VERSION,
        "ledger": ledger.as_dict(),
        "components": components,
        "verification_rows": [r.as_record() for r in rows],
    }


def load_atlas(path: str | Path) -> dict:
    payload = json.loads(Path(path).read_text())
    if payload.get("version") != ATLAS_FORMAT_VERSION:
        raise ValueError(f"unsupported atlas version {payload.get('version')}")
    return payload
