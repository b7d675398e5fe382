"""Command-line harness for the lid-driven cavity experiments.

Subcommands ``run``, ``sweep``, ``divnorm`` and ``spectrum`` share one flat
``key=value`` configuration (``--config FILE`` then ``--set key=value``
overrides). CSV outputs start with ``# key=value`` lines for every effective
setting.

Exit codes: 0 converged, 1 usage/config error, 2 non-convergence or
divergence, 3 internal abort.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field, fields

from .errors import InnerSolverError, InvalidArgumentError, OperatorNotSPDError
from .iterate import IterationConfig, IterationHistory, check_sufficient_condition, run
from .oracle import companion_spectral_radius, exact_schur_spectrum
from .saddle import estimate_extreme_eigen
from .stokes import LidProfile, build_mac_stokes

EXIT_OK, EXIT_USAGE, EXIT_NOCONV, EXIT_ABORT = 0, 1, 2, 3
ORACLE_MAX_MESH = 6


class UsageError(Exception):
    pass


def fmt(v) -> str:
    """Data values: 17 significant digits."""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".17g")
    if isinstance(v, (list, tuple)):
        return ",".join(fmt(x) for x in v)
    if isinstance(v, LidProfile):
        return v.value
    return str(v)


def fmt_setting(v) -> str:
    """Config echoes: shortest round-trip form, so ``1e-6`` reads back as typed."""
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (list, tuple)):
        return ",".join(fmt_setting(x) for x in v)
    return fmt(v)


def _parse_bool(s: str) -> bool:
    s = s.strip().lower()
    if s in ("1", "true", "yes", "on"):
        return True
    if s in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {s!r}")


@dataclass
class RunConfig:
    mesh_n: int = 10
    alpha2: float = 1.5
    beta: float = 0.0
    tol: float = 1e-6
    max_outer: int = 500
    inner_tol: float = 1e-12
    inner_max: int = 0  # 0: ten times the velocity dimension
    lid: str = "regularized"
    step1: str = "exact"
    richardson_omega: str = "auto"
    seed: int = 1
    eig_tol: float = 1e-6
    eig_max_iter: int = 5000
    mesh_list: list = field(default_factory=lambda: [10, 20, 40])
    beta_list: list = field(default_factory=lambda: [0.0, 1e-4, 1e-2, 0.1])

    def validate(self) -> None:
        if self.mesh_n < 3:
            raise UsageError("mesh_n must be at least 3")
        if any(n < 3 for n in self.mesh_list):
            raise UsageError("every mesh_list entry must be at least 3")
        if not self.mesh_list or not self.beta_list:
            raise UsageError("mesh_list and beta_list must be nonempty")
        if self.lid not in ("regularized", "unit"):
            raise UsageError(f"lid must be regularized or unit, got {self.lid!r}")
        if self.step1 not in ("exact", "richardson"):
            raise UsageError(f"step1 must be exact or richardson, got {self.step1!r}")
        if self.richardson_omega != "auto":
            try:
                omega = float(self.richardson_omega)
            except ValueError:
                raise UsageError("richardson_omega must be 'auto' or a number") from None
            if not omega > 0:
                raise UsageError("richardson_omega must be positive")
        if not 0 <= self.seed < 2**64:
            raise UsageError("seed must be a 64-bit unsigned integer")
        try:
            self.iteration_config()
        except InvalidArgumentError as exc:
            raise UsageError(str(exc)) from None

    def iteration_config(self, **overrides) -> IterationConfig:
        values = dict(
            alpha2=self.alpha2,
            beta=self.beta,
            tol=self.tol,
            max_outer=self.max_outer,
            step1=self.step1,
            richardson_omega=None if self.richardson_omega == "auto" else float(self.richardson_omega),
            inner_tol=self.inner_tol,
            inner_max=self.inner_max or None,
        )
        values.update(overrides)
        return IterationConfig(**values)

    def header_lines(self, command: str, keys=None) -> list[str]:
        lines = [f"# command={command}"]
        for f in fields(self):
            if keys is not None and f.name not in keys:
                continue
            lines.append(f"# {f.name}={fmt_setting(getattr(self, f.name))}")
        return lines


_CONVERTERS = {
    int: int,
    float: float,
    str: str,
    bool: _parse_bool,
}


def _convert(name: str, raw: str):
    raw = raw.strip()
    if name == "mesh_list":
        return [int(x) for x in raw.split(",") if x.strip()]
    if name == "beta_list":
        return [float(x) for x in raw.split(",") if x.strip()]
    default = getattr(RunConfig(), name)
    return _CONVERTERS[type(default)](raw)


def parse_config_text(text: str) -> dict:
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"config line {lineno}: expected key=value, got {line!r}")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out


COMMAND_DEFAULTS = {
    "run": {},
    "sweep": {},
    "divnorm": {"mesh_n": "40", "alpha2": "1.5", "beta": "0.05"},
    "spectrum": {},
}


def build_config(command: str, config_path: str | None, sets: list[str]) -> RunConfig:
    raw = dict(COMMAND_DEFAULTS[command])
    if config_path:
        try:
            with open(config_path, encoding="utf-8") as fh:
                raw.update(parse_config_text(fh.read()))
        except OSError as exc:
            raise UsageError(f"cannot read config {config_path}: {exc}") from None
    for item in sets:
        if "=" not in item:
            raise UsageError(f"--set expects key=value, got {item!r}")
        k, v = item.split("=", 1)
        raw[k.strip()] = v.strip()
    known = {f.name for f in fields(RunConfig)}
    values = {}
    for k, v in raw.items():
        if k not in known:
            raise UsageError(f"unknown config key {k!r}")
        try:
            values[k] = _convert(k, v)
        except ValueError as exc:
            raise UsageError(f"bad value for {k}: {exc}") from None
    cfg = RunConfig(**values)
    cfg.validate()
    return cfg


class _Output:
    """CSV sink: a file when ``--out`` is given, stdout otherwise."""

    def __init__(self, path: str | None):
        self.path = path
        if path:
            self.fh = open(path, "w", encoding="utf-8", newline="\n")
        else:
            self.fh = sys.stdout

    def write_line(self, line: str) -> None:
        self.fh.write(line + "\n")
        self.fh.flush()

    def close(self) -> None:
        if self.path:
            self.fh.close()

    @property
    def info(self):
        # summaries go to stderr when the CSV itself occupies stdout
        return sys.stdout if self.path else sys.stderr


def _run_case(cfg: RunConfig, mesh_n: int | None = None, beta: float | None = None,
              lid: str | None = None) -> IterationHistory:
    system = build_mac_stokes(mesh_n or cfg.mesh_n, lid or cfg.lid)
    overrides = {} if beta is None else {"beta": beta}
    return run(system.problem(cfg.inner_tol, cfg.inner_max or None), cfg.iteration_config(**overrides))


_RUN_KEYS = {
    "mesh_n", "alpha2", "beta", "tol", "max_outer", "inner_tol", "inner_max",
    "lid", "step1", "richardson_omega", "seed",
}


def cmd_run(cfg: RunConfig, out: _Output) -> int:
    for line in cfg.header_lines("run", keys=_RUN_KEYS):
        out.write_line(line)
    out.write_line("iter,u_inc,p_inc,div_norm")
    hist = _run_case(cfg)
    for k, rec in enumerate(hist.records, 1):
        out.write_line(f"{k},{fmt(rec.u_inc)},{fmt(rec.p_inc)},{fmt(rec.div_norm)}")
    final = hist.records[-1].div_norm if hist.records else float("nan")
    summary = (
        f"converged={fmt(hist.converged)} iterations={hist.iterations} "
        f"final_div_norm={fmt(final)} tol={fmt_setting(cfg.tol)} diverged={fmt(hist.diverged)}"
    )
    print(summary, file=out.info)
    return EXIT_OK if hist.converged else EXIT_NOCONV


def cmd_sweep(cfg: RunConfig, out: _Output) -> int:
    keys = (_RUN_KEYS - {"mesh_n", "beta"}) | {"mesh_list", "beta_list"}
    for line in cfg.header_lines("sweep", keys=keys):
        out.write_line(line)
    out.write_line("mesh_n,beta,alpha2,iterations,converged,final_div_norm")
    all_ok = True
    for n in cfg.mesh_list:
        for beta in cfg.beta_list:
            try:
                hist = _run_case(cfg, mesh_n=n, beta=beta)
            except (InnerSolverError, OperatorNotSPDError) as exc:
                print(f"sweep aborted at mesh_n={n} beta={fmt(beta)}: {exc}", file=sys.stderr)
                return EXIT_ABORT
            final = hist.records[-1].div_norm if hist.records else float("nan")
            all_ok &= hist.converged
            out.write_line(
                f"{n},{fmt(float(beta))},{fmt(float(cfg.alpha2))},{hist.iterations},"
                f"{fmt(hist.converged)},{fmt(final)}"
            )
    return EXIT_OK if all_ok else EXIT_NOCONV


def cmd_divnorm(cfg: RunConfig, out: _Output) -> int:
    for line in cfg.header_lines("divnorm", keys=_RUN_KEYS - {"lid"}):
        out.write_line(line)
    out.write_line("iter,div_norm_regularized,div_norm_unit")
    reg = _run_case(cfg, lid="regularized")
    unit = _run_case(cfg, lid="unit")
    a = reg.column("div_norm")
    b = unit.column("div_norm")
    for k in range(max(a.size, b.size)):
        ca = fmt(float(a[k])) if k < a.size else ""
        cb = fmt(float(b[k])) if k < b.size else ""
        out.write_line(f"{k + 1},{ca},{cb}")
    print(
        f"regularized: converged={fmt(reg.converged)} iterations={reg.iterations} "
        f"final_div_norm={fmt(float(a[-1]))}; unit: converged={fmt(unit.converged)} "
        f"iterations={unit.iterations} final_div_norm={fmt(float(b[-1]))}",
        file=out.info,
    )
    return EXIT_OK if reg.converged and unit.converged else EXIT_NOCONV


def cmd_spectrum(cfg: RunConfig, out: _Output) -> int:
    system = build_mac_stokes(cfg.mesh_n, cfg.lid)
    prob = system.problem(cfg.inner_tol, cfg.inner_max or None)
    top = estimate_extreme_eigen(prob, "max", cfg.eig_tol, cfg.eig_max_iter, cfg.seed)
    low = estimate_extreme_eigen(prob, "min", cfg.eig_tol, cfg.eig_max_iter, cfg.seed, M_est=top.value)
    M, m = top.value, low.value
    sufficient = check_sufficient_condition(cfg.alpha2, cfg.beta, M)
    if cfg.mesh_n <= ORACLE_MAX_MESH:
        rho = fmt(companion_spectral_radius(exact_schur_spectrum(prob), cfg.alpha2, cfg.beta))
    else:
        rho = "n/a"
    line = (
        f"m={fmt(m)} M={fmt(M)} one_over_M={fmt(1.0 / M)} sufficient={fmt(sufficient)} "
        f"predicted_rho={rho}"
    )
    if not (top.converged and low.converged):
        line += f" M_converged={fmt(top.converged)} m_converged={fmt(low.converged)}"
    if out.path:
        for h in cfg.header_lines("spectrum", keys=_RUN_KEYS | {"eig_tol", "eig_max_iter"}):
            out.write_line(h)
    out.write_line(line)
    if out.path:
        print(line)
    return EXIT_OK if top.converged and low.converged else EXIT_NOCONV


COMMANDS = {"run": cmd_run, "sweep": cmd_sweep, "divnorm": cmd_divnorm, "spectrum": cmd_spectrum}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="uzawa-stokes", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="flat key=value config file")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help="override a config key")
        p.add_argument("--out", help="output path (default: stdout)")
    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        cfg = build_config(args.command, args.config, args.set)
    except UsageError as exc:
        print(f"uzawa_stokes {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        out = _Output(args.out)
    except OSError as exc:
        print(f"uzawa_stokes {args.command}: cannot open output: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return COMMANDS[args.command](cfg, out)
    except (InnerSolverError, OperatorNotSPDError) as exc:
        print(f"uzawa_stokes {args.command}: internal abort: {exc}", file=sys.stderr)
        return EXIT_ABORT
    finally:
        out.close()


if __name__ == "__main__":
    sys.exit(main())
