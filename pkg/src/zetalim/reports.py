"""Run configuration, report rows and deterministic CSV/JSON emission."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import __version__
from .errors import InputError

SCHEMA_VERSION = 1
SCHEMA_LINE = f"# zetalim report schema {SCHEMA_VERSION}"
COLUMNS = (
    "id", "kind", "r", "g", "N", "eps_re", "eps_im",
    "residual_re", "residual_im", "abs_residual", "envelope", "pass",
)

DEFAULT_CONSTANTS = {
    "ff": {"c1": 40.0, "c2": 4.0},
    "nf": {"c1": 10.0, "c2": 10.0},
    "family": {"C": 8.0},
}


@dataclass
class RunConfig:
    """Everything that determines a run's output, hashed into every report."""

    command: str
    N_grid: tuple = ()
    eps_grid: tuple = ()
    constants: dict = field(default_factory=lambda: json.loads(json.dumps(DEFAULT_CONSTANTS)))
    seed: int = 0
    precision: str = "double"
    budget: int | None = None
    inputs: tuple = ()

    def __post_init__(self):
        if self.command in ("verify-ff", "verify-nf", "family") and not (self.N_grid and self.eps_grid):
            raise InputError("N and eps grids must be non-empty")

    def canonical(self) -> str:
        d = asdict(self)
        d["eps_grid"] = [[complex(e).real, complex(e).imag] for e in self.eps_grid]
        return json.dumps(d, sort_keys=True, separators=(",", ":"), default=str)

    @property
    def config_hash(self) -> str:
        return hashlib.sha256(self.canonical().encode()).hexdigest()


def load_constants(path: str | Path) -> dict:
    """Envelope constants file, merged over the defaults."""
    try:
        user = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read constants file {path}: {exc}") from exc
    merged = json.loads(json.dumps(DEFAULT_CONSTANTS))
    if not isinstance(user, dict):
        raise InputError("constants file must hold a JSON object")
    for key, vals in user.items():
        if key not in merged or not isinstance(vals, dict):
            raise InputError(f"unknown constants section {key!r}")
        for name, v in vals.items():
            if name not in merged[key]:
                raise InputError(f"unknown constant {key}.{name}")
            merged[key][name] = float(v)
    return merged


@dataclass(frozen=True)
class Row:
    id: str
    kind: str
    r: int | str
    g: float
    N: int
    eps: complex
    residual: complex
    envelope: float
    status: str  # "pass", "fail" or "skip"

    @property
    def sort_key(self):
        return (self.id, self.kind, self.N, self.eps.real, self.eps.imag)

    def cells(self) -> list[str]:
        return [
            self.id, self.kind, str(self.r), _fmt(self.g), str(self.N),
            _fmt(self.eps.real), _fmt(self.eps.imag),
            _fmt(self.residual.real), _fmt(self.residual.imag), _fmt(abs(self.residual)),
            _fmt(self.envelope), self.status,
        ]


def _fmt(x) -> str:
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return repr(x)


def row_from_report(id_: str, kind: str, r, g, N, eps, report) -> Row:
    return Row(id_, kind, r, float(g), int(N), complex(eps), complex(report.residual),
               float(report.envelope), "pass" if report.passed else "fail")


def skip_row(id_: str, kind: str, r, g, N, eps) -> Row:
    return Row(id_, kind, r, float(g), int(N), complex(eps), complex(math.nan, math.nan), math.nan, "skip")


@dataclass
class Report:
    config: RunConfig
    rows: list[Row]
    extra: dict = field(default_factory=dict)

    @property
    def sorted_rows(self) -> list[Row]:
        return sorted(self.rows, key=lambda r: r.sort_key)

    @property
    def failures(self) -> int:
        return sum(r.status == "fail" for r in self.rows)

    def summary(self) -> dict:
        counts = {s: sum(r.status == s for r in self.rows) for s in ("pass", "fail", "skip")}
        return {
            "version": __version__,
            "schema": SCHEMA_VERSION,
            "command": self.config.command,
            "config_hash": self.config.config_hash,
            "seed": self.config.seed,
            "rows": len(self.rows),
            **counts,
            **self.extra,
        }

    def csv_text(self) -> str:
        buf = io.StringIO()
        buf.write(SCHEMA_LINE + "\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(COLUMNS)
        for row in self.sorted_rows:
            w.writerow(row.cells())
        return buf.getvalue()

    def summary_text(self) -> str:
        return json.dumps(self.summary(), sort_keys=True, indent=2, default=_json_default) + "\n"

    def write(self, out_dir: str | Path, stem: str) -> tuple[Path, Path]:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        csv_path, json_path = out / f"{stem}.csv", out / f"{stem}.json"
        csv_path.write_text(self.csv_text())
        json_path.write_text(self.summary_text())
        return csv_path, json_path


def _json_default(x):
    if isinstance(x, complex):
        return [x.real, x.imag]
    if hasattr(x, "item"):
        return x.item()
    raise TypeError(f"not serializable: {type(x).__name__}")


def finite_or_none(x: float):
    """JSON has no infinities; represent them as strings."""
    x = float(x)
    if math.isfinite(x):
        return x
    return "inf" if x > 0 else ("-inf" if x < 0 else "nan")
