"""Command-line front end.

Exit status: 0 on success, 1 on a numerical failure or failed check,
2 on invalid arguments.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field, fields
from typing import Any

import numpy as np

from . import checks, energy, modes
from .modes import IntegrationError
from .potential import PotentialProfile
from .quadrature import QuadratureError, QuadratureSpec

COMMANDS = ("table6", "pulse", "static-energy", "mode-trace", "step-case",
            "quasistatic", "verify", "sweep")

# (f2, lambda0, printed E(0->T))
REFERENCE_TABLE = [
    (1.0, 0.5, -0.0134),
    (2.0, 0.5, -0.00413),
    (2.0, 1.0, -0.0268),
    (4.0, 2.0, -0.0536),
    (4.0, 3.0, -0.155),
]


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str = "table6"
    profile: str = "rational"
    lambda0: float | None = None
    f2: float | None = None
    T: float | None = None
    omega: float = 1.0
    t: list[float] = field(default_factory=list)
    nt: int = 101
    xmin: float | None = None
    xmax: float | None = None
    nx: int = 201
    wmax: float = 20.0
    nw: int = 200
    cutoff: float | None = None
    rel_tol: float = 1e-8
    abs_tol: float = 1e-12
    max_subdivisions: int = 10_000
    format: str | None = None
    out: str | None = None

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.nx < 1 or self.nt < 1 or self.nw < 1:
            raise UsageError("grid counts must be >= 1")
        if self.xmin is not None and self.xmax is not None and not self.xmin < self.xmax:
            raise UsageError("need xmin < xmax")
        if self.format not in (None, "csv", "json"):
            raise UsageError("format must be csv or json")
        if self.omega <= 0:
            raise UsageError("omega must be > 0")

    def quad(self) -> QuadratureSpec:
        cutoff = 100.0 if self.cutoff is None else self.cutoff
        return QuadratureSpec(rel_tol=self.rel_tol, abs_tol=self.abs_tol,
                              max_subdivisions=self.max_subdivisions, cutoff_Lambda=cutoff)

    def build_profile(self) -> PotentialProfile:
        lam0 = 1.0 if self.lambda0 is None else self.lambda0
        if self.profile == "static":
            return PotentialProfile.static(lam0)
        if self.profile == "step":
            return PotentialProfile.step(lam0, self.T)
        if self.profile == "rational":
            return PotentialProfile.rational(lam0, 2.0 * lam0 if self.f2 is None else self.f2)
        raise UsageError(f"unknown profile {self.profile!r}")


def _fmt(v: Any) -> str:
    if isinstance(v, float):
        return f"{v:.9g}"
    return "" if v is None else str(v)


def _csv(header: list[str], rows: list[list[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _json(obj: Any) -> str:
    def clean(o):
        if isinstance(o, float):
            return float(f"{o:.9g}") if math.isfinite(o) else None
        if isinstance(o, dict):
            return {k: clean(v) for k, v in o.items()}
        if isinstance(o, (list, tuple)):
            return [clean(v) for v in o]
        return o
    return json.dumps(clean(obj), indent=2) + "\n"


def reference_tolerance(value: float) -> float:
    """Five units in the fourth significant figure of ``value``."""
    return 5.0 * 10.0 ** (math.floor(math.log10(abs(value))) - 3)


# commands ---------------------------------------------------------------

def cmd_table6(cfg: RunConfig) -> tuple[int, str]:
    if cfg.f2 is not None or cfg.lambda0 is not None:
        if cfg.f2 is None or cfg.lambda0 is None:
            raise UsageError("single-row mode needs both --f2 and --lambda0")
        reference = {(f2, l0): e for f2, l0, e in REFERENCE_TABLE}.get((cfg.f2, cfg.lambda0))
        rows_in = [(cfg.f2, cfg.lambda0, reference)]
    else:
        rows_in = REFERENCE_TABLE
    quad = cfg.quad()
    records = []
    ok = True
    for f2, lam0, reference in rows_in:
        rep = energy.radiated_energy(PotentialProfile.rational(lam0, f2), quad)
        if reference is None:
            status = "n/a"
        else:
            status = "PASS" if abs(rep.E_radiated_half - reference) <= reference_tolerance(reference) else "FAIL"
            ok &= status == "PASS"
        records.append({"f2": f2, "lambda0": lam0, "T": rep.T, "E_half": rep.E_radiated_half,
                        "E_total": rep.E_total, "tail_estimate": rep.tail_estimate,
                        "error_estimate": rep.error_estimate, "Lambda": rep.Lambda,
                        "reference": reference, "status": status})
    if (cfg.format or "csv") == "json":
        text = _json(records)
    else:
        keys = ["f2", "lambda0", "T", "E_half", "E_total", "tail_estimate", "reference", "status"]
        text = _csv(keys, [[r[k] for k in keys] for r in records])
    return (0 if ok else 1), text


def cmd_pulse(cfg: RunConfig) -> tuple[int, str]:
    p = cfg.build_profile()
    if not math.isfinite(p.T):
        raise UsageError("pulse needs a profile that switches off")
    ts = cfg.t or [2.0 * p.T]
    reach = max(ts) + 0.25 * p.T
    xs = np.linspace(-reach if cfg.xmin is None else cfg.xmin,
                     reach if cfg.xmax is None else cfg.xmax, cfg.nx)
    samples = energy.density_grid(xs, ts, p, cfg.quad())
    if cfg.format == "json":
        return 0, _json([{"x": s.x, "t": s.t, "T00R": s.value} for s in samples])
    return 0, energy.density_csv(samples)


def cmd_static_energy(cfg: RunConfig) -> tuple[int, str]:
    lam0 = 1.0 if cfg.lambda0 is None else cfg.lambda0
    # the static integrand decays as w^-3; 100 is too short a cutoff here
    cutoff = 1e4 if cfg.cutoff is None else cfg.cutoff
    report = {"lambda0": lam0, "E_K": energy.static_total_energy(lam0),
              "L_T00R_quadrature": energy.static_density_continuum(lam0, cutoff), "Lambda": cutoff}
    if cfg.format == "csv":
        return 0, _csv(list(report), [list(report.values())])
    return 0, _json(report)


def cmd_mode_trace(cfg: RunConfig) -> tuple[int, str]:
    p = cfg.build_profile()
    t_end = cfg.t[0] if cfg.t else (2.0 * p.T if math.isfinite(p.T) else 10.0)
    rows = []
    for t in np.linspace(0.0, t_end, cfg.nt):
        c = modes.mode_amplitude(cfg.omega, p, float(t))
        rows.append([float(t), c.real, c.imag, abs(c)])
    header = ["t", "Re(C)", "Im(C)", "|C|"]
    if cfg.format == "json":
        return 0, _json({"omega": cfg.omega, "profile": p.to_dict(),
                         "trace": [dict(zip(header, r)) for r in rows]})
    return 0, _csv(header, rows)


def cmd_step_case(cfg: RunConfig) -> tuple[int, str]:
    lam0 = 1.0 if cfg.lambda0 is None else cfg.lambda0
    T = 100.0 / lam0 if cfg.T is None else cfg.T
    ws = np.linspace(cfg.wmax / cfg.nw, cfg.wmax, cfg.nw)
    approx = energy.step_mode_energy_change(ws, lam0)
    exact = energy.step_mode_energy_change_exact(ws, lam0, T)
    total = checks.step_total_by_quadrature(lam0)
    if cfg.format == "csv":
        return 0, _csv(["omega", "dxi_large_T", "dxi_exact"], list(zip(ws, approx, exact)))
    return 0, _json({"lambda0": lam0, "T": T, "total": total,
                     "total_closed_form": checks.STEP_TOTAL_PER_LAMBDA * lam0,
                     "all_negative": bool(np.all(exact < 0)),
                     "spectrum": [{"omega": w, "dxi_large_T": a, "dxi_exact": e}
                                  for w, a, e in zip(ws, approx, exact)]})


def cmd_quasistatic(cfg: RunConfig) -> tuple[int, str]:
    lam0 = 1.0 if cfg.lambda0 is None else cfg.lambda0
    p = PotentialProfile.static(lam0)
    ws = np.linspace(cfg.wmax / cfg.nw, cfg.wmax, cfg.nw)
    spectrum = [energy.quasistatic_mode_energy_change(w, p) for w in ws]
    if cfg.format == "csv":
        return 0, _csv(["omega", "dxi_quasistatic"], list(zip(ws, spectrum)))
    total = checks.quasistatic_total_by_quadrature(lam0)
    return 0, _json({"lambda0": lam0, "total": total,
                     "total_closed_form": energy.quasistatic_total(lam0),
                     "E_K": energy.static_total_energy(lam0),
                     "balance": energy.static_total_energy(lam0) + total,
                     "spectrum": [{"omega": w, "dxi_quasistatic": d} for w, d in zip(ws, spectrum)]})


def cmd_sweep(cfg: RunConfig) -> tuple[int, str]:
    """Two-sided radiated energy as f2 approaches lambda0 from above."""
    lam0 = 1.0 if cfg.lambda0 is None else cfg.lambda0
    rows = []
    for ratio in (4.0, 2.0, 1.5, 1.2, 1.1):
        rep = energy.radiated_energy(PotentialProfile.rational(lam0, ratio * lam0), cfg.quad(),
                                     tail=False)
        rows.append([ratio * lam0, lam0, rep.T, rep.E_total, energy.quasistatic_total(lam0)])
    return 0, _csv(["f2", "lambda0", "T", "E_total", "quasistatic_total"], rows)


def cmd_verify(cfg: RunConfig) -> tuple[int, str]:
    results = checks.run_all()
    if cfg.format == "json":
        text = _json([{"name": c.name, "deviation": c.deviation, "threshold": c.threshold,
                       "passed": c.passed} for c in results])
    else:
        text = "".join(c.line() + "\n" for c in results)
    return (0 if all(c.passed for c in results) else 1), text


DISPATCH = {
    "table6": cmd_table6,
    "pulse": cmd_pulse,
    "static-energy": cmd_static_energy,
    "mode-trace": cmd_mode_trace,
    "step-case": cmd_step_case,
    "quasistatic": cmd_quasistatic,
    "verify": cmd_verify,
    "sweep": cmd_sweep,
}


# argument handling -------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="deltapulse", description=__doc__)
    ap.add_argument("cmd", nargs="?", choices=COMMANDS, help="command (or use --command)")
    ap.add_argument("--command", choices=COMMANDS)
    ap.add_argument("--config", help="JSON file with RunConfig fields; flags override it")
    ap.add_argument("--profile", choices=("static", "step", "rational"))
    ap.add_argument("--lambda0", type=float)
    ap.add_argument("--f2", type=float)
    ap.add_argument("--T", type=float)
    ap.add_argument("--omega", type=float)
    ap.add_argument("--t", type=float, nargs="+", help="snapshot time(s) / trace end time")
    ap.add_argument("--nt", type=int)
    ap.add_argument("--xmin", type=float)
    ap.add_argument("--xmax", type=float)
    ap.add_argument("--nx", type=int)
    ap.add_argument("--wmax", type=float)
    ap.add_argument("--nw", type=int)
    ap.add_argument("--cutoff", type=float, help="frequency cutoff Lambda")
    ap.add_argument("--rel-tol", dest="rel_tol", type=float)
    ap.add_argument("--abs-tol", dest="abs_tol", type=float)
    ap.add_argument("--max-subdivisions", dest="max_subdivisions", type=int)
    ap.add_argument("--format", choices=("csv", "json"))
    ap.add_argument("--out", help="output path (default: standard output)")
    return ap


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    values: dict[str, Any] = {}
    if ns.config:
        with open(ns.config) as fh:
            values.update(json.load(fh))
    known = {f.name for f in fields(RunConfig)}
    unknown = set(values) - known
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")
    for name in known:
        v = getattr(ns, name, None)
        if v is not None:
            values[name] = v
    if ns.cmd:
        values["command"] = ns.cmd
    cfg = RunConfig(**values)
    cfg.validate()
    return cfg


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = config_from_args(ns)
        status, text = DISPATCH[cfg.command](cfg)
    except (ValueError, OSError, TypeError) as exc:
        print(f"deltapulse: error: {exc}", file=sys.stderr)
        return 2
    except (QuadratureError, IntegrationError) as exc:
        print(f"deltapulse: numerical failure: {exc}", file=sys.stderr)
        return 1
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
