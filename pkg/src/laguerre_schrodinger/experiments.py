"""Experiment configuration, execution and file output.

A run goes potential -> basis -> coefficients -> evaluations -> diagnostics
and produces a :class:`Report`: named tables (written as CSV), pass/fail
checks and per-stage wall-clock timings.  :func:`emit_outputs` writes the
tables plus a ``manifest.json`` from which the run can be repeated.
"""

from __future__ import annotations

import csv
import json
import math
import platform
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .coefficients import coefficients_direct, coefficients_recurrent
from .errors import DomainError, PoleError
from .example1 import Battery, auto_stride, grade, log_linear_sweep
from .expr import parse_potential
from .grid import DEFAULT_NODES, cumulative_values, make_uniform_grid
from .oracles import constant_q_values, rk_solution
from .representation import (
    evaluate_solution,
    evaluate_sweep,
    kernel_moment,
    kernel_slice,
    shifted_solve,
)
from .spps import build_formal_powers, build_particular_basis, spps_solution

COMMANDS = ("coeffs", "solve", "sweep", "kernel", "validate", "repro-example1")
ARTIFACTS = {
    "coeffs": ("coefficients", "decay", "sum_rule"),
    "solve": ("solution",),
    "sweep": ("sweep",),
    "kernel": ("kernel", "moments"),
    "validate": ("checks",),
    "repro-example1": ("criteria", "sweep_n100", "sweep_nlarge", "decay", "sum_rule"),
}


def parse_omega(text):
    """Parse ``v``, ``v1,v2,...`` or ``min:max:count[:log]`` into an array of omegas.

    Values may be complex in Python syntax (``-0.25j``).  A log sweep with
    ``min = -max`` is the symmetric log+linear sweep; otherwise both ends
    must have the same sign.
    """
    text = str(text).strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) not in (3, 4) or (len(parts) == 4 and parts[3] not in ("log", "linear")):
            raise DomainError(f"bad sweep {text!r}; expected min:max:count[:log]")
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
        if count < 1:
            raise DomainError("sweep count must be at least 1")
        if len(parts) == 4 and parts[3] == "log":
            if lo == -hi and hi > 0:
                return log_linear_sweep(hi, count).astype(complex)
            if lo * hi <= 0:
                raise DomainError("log sweep needs endpoints of one sign or min = -max")
            return (np.sign(lo) * np.geomspace(abs(lo), abs(hi), count)).astype(complex)
        return np.linspace(lo, hi, count).astype(complex)
    try:
        values = np.array([complex(v.replace(" ", "")) for v in text.split(",")])
    except ValueError:
        raise DomainError(f"cannot parse omega {text!r}") from None
    return values


def parse_shift(text):
    """``lambda[,omega0_im]`` -> ``(lambda, omega0)``; ``omega0 = i * omega0_im`` (default -1/4)."""
    if text is None or text == "":
        return None
    parts = str(text).split(",")
    lam = float(parts[0])
    im = float(parts[1]) if len(parts) > 1 else -0.25
    return lam, complex(0.0, im)


@dataclass
class ExperimentConfig:
    command: str = "solve"
    potential: str = "one"
    d: float | None = None
    grid: int = DEFAULT_NODES
    N: int = 100
    omega: str = "0"
    shift: str | None = None
    outputs: list = field(default_factory=list)
    stride: int | None = None
    x: float | None = None
    t: str = "10:201"
    j_max: int = 2
    grid_sizes: list = field(default_factory=lambda: [2001, 5001])
    n_large: int = 10_000
    streaming: bool = False

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise DomainError(f"unknown command {self.command!r}")
        if self.d is not None and not self.d > 0:
            raise DomainError("d must be positive")
        if self.N < 0:
            raise DomainError("N must be nonnegative")
        if not self.outputs:
            self.outputs = list(ARTIFACTS[self.command])
        unknown = set(self.outputs) - set(ARTIFACTS[self.command])
        if unknown:
            raise DomainError(f"unknown outputs for {self.command}: {sorted(unknown)}")

    @classmethod
    def from_dict(cls, data):
        known = {k: v for k, v in data.items() if k in cls.__dataclass_fields__}
        return cls(**known)


@dataclass
class Report:
    config: ExperimentConfig
    tables: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    timings: dict = field(default_factory=dict)
    summary: dict = field(default_factory=dict)

    @property
    def ok(self):
        return all(passed for _, passed, _ in self.checks)

    def check(self, name, passed, detail=""):
        self.checks.append((name, bool(passed), detail))

    def table(self, name, header, rows):
        if name in self.config.outputs:
            self.tables[name] = (tuple(header), rows)


class _Stopwatch:
    def __init__(self, timings):
        self.timings = timings

    def __call__(self, name):
        watch = self

        class _Ctx:
            def __enter__(self):
                self.t0 = time.perf_counter()

            def __exit__(self, *exc):
                watch.timings[name] = watch.timings.get(name, 0.0) + time.perf_counter() - self.t0

        return _Ctx()


def _setup(cfg, report):
    stage = _Stopwatch(report.timings)
    with stage("potential"):
        pot = parse_potential(cfg.potential)
        d = cfg.d if cfg.d is not None else getattr(pot, "d", 1.0)
        grid = make_uniform_grid(d, cfg.grid)
        q = pot.profile(grid)
    return pot, q, stage


def _oracle(pot, q, omega, lam=0.0):
    """Reference values on ``q.grid`` for ``-u'' + (q + lam) u = omega^2 u``."""
    if pot.is_constant:
        return constant_q_values(pot.constant_value() + lam, omega, q.grid.nodes)
    return rk_solution(q.shifted(lam) if lam else q, omega, tol=1e-12).values.values


def _stride_for(cfg, N):
    if cfg.stride is not None:
        return cfg.stride
    return auto_stride(cfg.grid, N)


def _run_coeffs(cfg, report):
    pot, q, stage = _setup(cfg, report)
    with stage("basis"):
        basis = build_particular_basis(q)
    store = "coefficients" in cfg.outputs
    with stage("coefficients"):
        coeffs = coefficients_recurrent(basis, cfg.N, stride=_stride_for(cfg, cfg.N) if store else None)
    if store:
        x = coeffs.grid.nodes
        rows = [(n, x[i], coeffs.values[n, i].real, coeffs.values[n, i].imag)
                for n in range(coeffs.N + 1) for i in range(x.size)]
        report.table("coefficients", ("n", "x", "re", "im"), rows)
        report.check("a_n(0) = 0", np.all(coeffs.values[:, 0] == 0))
    report.table("decay", ("n", "max_abs"), list(enumerate(coeffs.decay)))
    report.table("sum_rule", ("N", "residual"), list(enumerate(coeffs.residual)))
    report.summary.update(N=cfg.N, sum_rule_residual=float(coeffs.residual[-1]),
                          max_abs_a0=float(coeffs.decay[0]))


def _solution_for(cfg, pot, q, stage, omega):
    shift = parse_shift(cfg.shift)
    if shift is None:
        with stage("basis"):
            basis = build_particular_basis(q)
        with stage("coefficients"):
            coeffs = coefficients_recurrent(basis, cfg.N, stride=1)
        with stage("evaluation"):
            ev = evaluate_solution(coeffs, omega, cfg.N)
        return ev, coeffs, 0.0
    lam, omega0 = shift
    with stage("coefficients"):
        ev = shifted_solve(q, np.sqrt(omega0**2 - lam), cfg.N, lam, omega0=omega0)
    return ev, None, lam


def _run_solve(cfg, report):
    pot, q, stage = _setup(cfg, report)
    omegas = parse_omega(cfg.omega)
    if omegas.size != 1 and cfg.shift is None:
        raise DomainError("solve takes a single omega; use sweep for several")
    ev, coeffs, lam = _solution_for(cfg, pot, q, stage, omegas[0])
    with stage("oracle"):
        ref = _oracle(pot, q, ev.omega0, lam)
    u = ev.values.values
    report.table("solution", ("x", "re_u", "im_u", "re_oracle", "im_oracle"),
                 list(zip(ev.x, u.real, u.imag, ref.real, ref.imag)))
    err = np.abs(u - ref)
    report.summary.update(omega=ev.omega, omega0=ev.omega0, shift=lam,
                          max_abs_err=float(err.max()),
                          max_rel_err=float((err / np.abs(ref)).max()),
                          sum_rule_residual=ev.sum_rule_residual)
    report.check("u(0) = 1", abs(u[0] - 1) <= 1e-14)


def _run_sweep(cfg, report):
    pot, q, stage = _setup(cfg, report)
    omegas = parse_omega(cfg.omega)
    if np.any(omegas == -1j):
        raise PoleError("the sweep contains omega = -i")
    with stage("basis"):
        basis = build_particular_basis(q)
    with stage("coefficients"):
        coeffs = coefficients_recurrent(basis, cfg.N, stride=_stride_for(cfg, cfg.N))
    with stage("evaluation"):
        u = evaluate_sweep(coeffs, omegas, cfg.N)
    rows = []
    x = coeffs.grid.nodes
    with stage("oracle"):
        if pot.is_constant:
            exact = constant_q_values(pot.constant_value(), omegas[:, None], x[None, :])
        else:
            s = coeffs.stride
            exact = np.array([rk_solution(q, w, tol=1e-12).values.values[::s] for w in omegas])
    err = np.abs(u - exact)
    rel = err / np.abs(exact)
    for w, e, r in zip(omegas, err.max(axis=1), rel.max(axis=1)):
        rows.append((w.real, w.imag, e, r))
    report.table("sweep", ("omega_re", "omega_im", "max_abs_err", "max_rel_err"), rows)
    i = int(np.argmax(err.max(axis=1)))
    report.summary.update(count=int(omegas.size), max_abs_err=float(err.max()),
                          argmax_omega=omegas[i])
    report.check("u(0) = 1 for every omega", np.all(np.abs(u[:, 0] - 1) <= 1e-14))


def _run_kernel(cfg, report):
    pot, q, stage = _setup(cfg, report)
    with stage("basis"):
        basis = build_particular_basis(q)
    with stage("coefficients"):
        coeffs = coefficients_recurrent(basis, cfg.N, stride=_stride_for(cfg, cfg.N))
    x = q.grid.d if cfg.x is None else cfg.x
    tmax, count = cfg.t.split(":")
    t = np.linspace(0.0, float(tmax), int(count))
    with stage("kernel"):
        ks = kernel_slice(coeffs, x, t)
    report.table("kernel", ("t", "re", "im"), list(zip(t, ks.values.real, ks.values.imag)))
    fp = build_formal_powers(basis, cfg.j_max)
    i = int(round(x / q.grid.h))
    rows = []
    with stage("moments"):
        for j in range(cfg.j_max + 1):
            m = kernel_moment(coeffs, x, j)
            ref = fp.phi[j].values[i] - x**j
            rows.append((j, m.real, m.imag, ref.real, ref.imag))
    report.table("moments", ("j", "re", "im", "re_ref", "im_ref"), rows)
    half_q = 0.5 * np.interp(x, q.grid.nodes, cumulative_values(q.values, q.grid.h))
    report.summary.update(x=x, diagonal=ks.values[0], half_integral_q=float(half_q))


def _run_validate(cfg, report):
    pot, q, stage = _setup(cfg, report)
    with stage("basis"):
        basis = build_particular_basis(q)
    scale = max(1.0, float(np.max(np.abs(basis.f0.values * basis.f1_prime.values))))
    wr = float(np.max(np.abs(basis.wronskian() - 1)))
    report.check("wronskian", wr <= 1e-9 * scale, f"{wr:.3e}")
    with stage("coefficients"):
        coeffs = coefficients_recurrent(basis, max(cfg.N, 200), stride=1)
    report.check("a_n(0) = 0", np.all(coeffs.values[:, 0] == 0), "exact")
    n_dir = min(cfg.N, 20)
    with stage("direct"):
        fp = build_formal_powers(basis, max(n_dir, 80))
        direct = coefficients_direct(fp, n_dir)
    dev = float(np.max(np.abs(direct.values - coeffs.values[: n_dir + 1])))
    report.check("direct vs recurrent", dev <= 1e-8 * max(1.0, float(coeffs.decay[0])), f"{dev:.3e}")
    f0 = basis.f0.values
    col = float(np.max(np.abs(evaluate_solution(coeffs, 0.0).values.values - f0)))
    report.check("omega = 0 collapse", col <= 1e-13 * max(1.0, float(np.abs(f0).max())), f"{col:.3e}")
    with stage("spps"):
        worst = 0.0
        for w in (0.5, 1.0, 2.0):
            lag = evaluate_solution(coeffs, w).values.values
            spps = spps_solution(fp, w, 80).values
            worst = max(worst, float(np.max(np.abs(lag - spps))))
    report.check("spps cross-check (|omega| <= 2)", worst <= 1e-9 * scale, f"{worst:.3e}")
    if cfg.N >= 100:
        big = coefficients_recurrent(basis, cfg.N, stride=None)
        pts = [cfg.N // 100, cfg.N // 10, cfg.N]
        res = [float(big.residual[n]) for n in pts]
        report.check("sum rule decreasing", all(np.diff(res) < 0), str(res))
    for w in parse_omega(cfg.omega)[:5]:
        u = evaluate_solution(coeffs, w).values.values
        report.check(f"u(0) = 1 at omega={w}", abs(u[0] - 1) <= 1e-14)
    report.table("checks", ("name", "passed", "detail"),
                 [(n, int(p), d) for n, p, d in report.checks])


def _run_repro(cfg, report):
    stage = _Stopwatch(report.timings)
    lines = []
    rows = []
    for size in cfg.grid_sizes:
        battery = Battery(size, n_large=cfg.n_large)
        with stage(f"battery_{size}"):
            results = grade(battery, include_streaming=cfg.streaming and size == cfg.grid_sizes[-1])
        for r in results:
            lines.append(f"grid {size}: {r.line()}")
            rows.append((size, r.number, r.name, int(r.passed), json.dumps(_jsonable(r.measured))))
            report.check(f"grid {size} criterion {r.number}", r.passed)
        last = battery
    report.table("criteria", ("grid", "criterion", "name", "passed", "measured"), rows)
    _, sw100 = last.measure_sweep_n100()
    report.table("sweep_n100", ("omega_re", "omega_im", "max_abs_err", "max_rel_err"),
                 [(w, 0.0, e, r) for w, e, r in zip(sw100.omegas, sw100.max_abs, sw100.max_rel)])
    if cfg.n_large >= 10_000:
        _, swl = last.measure_sweep_large()
        report.table("sweep_nlarge", ("omega_re", "omega_im", "max_abs_err", "max_rel_err"),
                     [(w, 0.0, e, r) for w, e, r in zip(swl.omegas, swl.max_abs, swl.max_rel)])
    coeffs, _ = last.table()
    report.table("decay", ("n", "max_abs"), list(enumerate(coeffs.decay)))
    report.table("sum_rule", ("N", "residual"), list(enumerate(coeffs.residual)))
    report.summary["lines"] = lines


_RUNNERS = {
    "coeffs": _run_coeffs,
    "solve": _run_solve,
    "sweep": _run_sweep,
    "kernel": _run_kernel,
    "validate": _run_validate,
    "repro-example1": _run_repro,
}


def run_experiment(cfg: ExperimentConfig) -> Report:
    """Execute the pipeline for ``cfg.command`` and collect the report."""
    report = Report(cfg)
    t0 = time.perf_counter()
    _RUNNERS[cfg.command](cfg, report)
    report.timings["total"] = time.perf_counter() - t0
    return report


def _format(v):
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.16e}"
    return str(v)


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (complex, np.complexfloating)):
        return {"re": float(v.real), "im": float(v.imag)}
    if isinstance(v, (np.bool_, bool)):
        return bool(v)
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else str(v)
    return v


def emit_outputs(report: Report, out_dir) -> list:
    """Write one CSV per table plus ``manifest.json``; return the written paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name, (header, rows) in report.tables.items():
        path = out / f"{name}.csv"
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([_format(v) for v in row])
        written.append(path)
    manifest = {
        "config": _jsonable(asdict(report.config)),
        "artifacts": [p.name for p in written],
        "checks": [{"name": n, "passed": p, "detail": d} for n, p, d in report.checks],
        "summary": _jsonable(report.summary),
        "timings": report.timings,
        "versions": {"laguerre_schrodinger": __version__, "numpy": np.__version__,
                     "python": platform.python_version()},
    }
    path = out / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    written.append(path)
    return written


def load_manifest(path):
    data = json.loads(Path(path).read_text())
    return ExperimentConfig.from_dict(data["config"])
