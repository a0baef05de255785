"""Command-line front end.

Every subcommand writes deterministic JSON (or a short text rendering with
``--text``).  Exit status: 0 success, 1 invalid input or failed verification,
2 request outside the supported scope.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .curve import CurveSpec, CurveSpecError, build_equations, check_nonsingular
from .differentials import holomorphic_basis
from .fundform import UnsolvableSystemError, fundamental_form
from .polyring import lambda_degree
from .riemann.branch import SingularCurveError, UnsupportedCurveError
from .riemann.periods import PeriodError, period_matrices
from .riemann.report import Tolerances, verify_report
from .riemann.sigma import UnsupportedGenusError, sigma_function
from .riemann.theta import DivergentThetaError, ThetaParams
from .semigroup import (SequenceError, apery_and_T, check_telescopic, gap_partition,
                        gaps_and_genus, generators_V)

ENV_TOLERANCE = "TELESIGMA_TOLERANCE"
ENV_THETA_ERROR = "TELESIGMA_THETA_ERROR"
ENV_QUAD_DEPTH = "TELESIGMA_QUAD_DEPTH"

SUBCOMMANDS = ("semigroup", "equations", "diffbasis", "fundform", "periods", "sigma", "verify")


class InputError(ValueError):
    pass


class ScopeError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    source: str
    output: Path | None
    text: bool
    tolerance: float | None
    theta_error: float
    quad_depth: int
    default_lambda: str | None
    points: tuple[str, ...] = ()

    @classmethod
    def from_args(cls, ns: argparse.Namespace, env=os.environ) -> "RunConfig":
        def pick(flag, var, conv, default):
            raw = flag if flag is not None else env.get(var)
            if raw is None:
                return default
            try:
                return conv(raw)
            except ValueError:
                raise InputError(f"invalid value {raw!r} for {var}") from None

        tol = pick(ns.tolerance, ENV_TOLERANCE, float, None)
        theta_error = pick(ns.theta_error, ENV_THETA_ERROR, float, ThetaParams.error)
        depth = pick(ns.quad_depth, ENV_QUAD_DEPTH, int, 30)
        if tol is not None and not tol > 0:
            raise InputError("tolerance must be positive")
        if not theta_error > 0:
            raise InputError("theta error must be positive")
        if depth < 1:
            raise InputError("quadrature depth must be at least 1")
        return cls(ns.command, ns.source, ns.output, ns.text, tol, theta_error, depth,
                   ns.default_lambda, tuple(getattr(ns, "at", None) or ()))


def _parse_sequence(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",")]
    except ValueError:
        raise InputError(f"cannot read {text!r} as a comma-separated integer sequence") from None


def load_spec(source: str, default_lambda: str | None = None) -> CurveSpec:
    """``source`` is a JSON file path or an inline sequence such as ``2,3``."""
    path = Path(source)
    if path.suffix == ".json" or path.exists():
        try:
            text = path.read_text()
        except OSError as exc:
            raise InputError(f"cannot read {source}: {exc.strerror}") from None
        spec = CurveSpec.from_json(text)
    else:
        spec = CurveSpec(check_telescopic(_parse_sequence(source)))
    if default_lambda is not None:
        spec = CurveSpec(spec.seq, spec.lambda_values, default_lambda)
    return spec


def _vec(v) -> str:
    return "(" + ",".join(map(str, v)) + ")"


# --- subcommands -----------------------------------------------------------

def cmd_semigroup(cfg: RunConfig):
    seq = check_telescopic(_parse_sequence(cfg.source))
    gaps, g = gaps_and_genus(seq)
    data = {
        "sequence": list(seq.a),
        "d": list(seq.d),
        "e": list(seq.e[1:]),
        "genus": g,
        "gaps": gaps,
        "gap_partition": list(gap_partition(gaps)),
        "V": [list(v) for v in generators_V(seq)],
        "T": [{"residue": r, "apery": b, "exponent": list(m)} for r, b, m in apery_and_T(seq)],
    }
    text = (f"d={_vec(seq.d)}, g={g}, gaps {{{','.join(map(str, gaps))}}}, "
            f"V={{{','.join(_vec(v) for v in generators_V(seq))}}}")
    return data, text


def cmd_equations(cfg: RunConfig):
    spec = load_spec(cfg.source, cfg.default_lambda)
    eqs = build_equations(spec)
    R = eqs.ring
    data = {
        "spec": spec.to_dict(),
        "equations": [R.to_text(f) for f in eqs.F],
        "symbolic_lambda": {k.json_key: lambda_degree(spec.seq, k) for k in spec.symbolic_keys},
    }
    if not spec.symbolic:
        data["nonsingular"] = check_nonsingular(spec).to_dict()
    lines = [f"F{n + 2} = {R.to_text(f)}" for n, f in enumerate(eqs.F)]
    if "nonsingular" in data:
        lines.append("nonsingular: " + ("yes" if data["nonsingular"]["nonsingular"] else "no"))
    return data, "\n".join(lines)


def cmd_diffbasis(cfg: RunConfig):
    spec = load_spec(cfg.source, cfg.default_lambda)
    eqs = build_equations(spec)
    basis = holomorphic_basis(spec.seq)
    det_g1 = eqs.ring.to_text(eqs.det_G[0])
    data = {
        "genus": spec.seq.genus,
        "det_G1": det_g1,
        "du": [{"exponent": list(k), "vanishing_order": v} for k, v in basis.entries],
    }
    lines = [f"du{n + 1} = x^{_vec(k)} dx1 / det G1   (zero of order {v} at infinity)"
             for n, (k, v) in enumerate(basis.entries)]
    return data, "\n".join([f"det G1 = {det_g1}"] + lines)


def cmd_fundform(cfg: RunConfig):
    spec = load_spec(cfg.source, cfg.default_lambda)
    data = fundamental_form(spec).to_dict()
    lines = [f"det H = {data['det_H']}", f"c ({len(data['c'])} entries, {data['pivot_rule']}):"]
    lines += [f"  c[{k}] = {v}" for k, v in data["c"].items()]
    for n, item in enumerate(data["dr"]):
        terms = " + ".join(f"({v}) y^({k})" for k, v in item["dr"].items()) or "0"
        lines.append(f"dr{n + 1} = [{terms}] dy1 / det G1(y)")
    return data, "\n".join(lines)


def _periods(cfg: RunConfig, spec: CurveSpec):
    if spec.seq.a[0] != 2 or spec.seq.t != 2:
        raise ScopeError(f"periods unsupported for {spec.seq} (a_1≠2)")
    if spec.symbolic:
        raise InputError("periods need concrete lambda values (set them or use --default-lambda zero)")
    return period_matrices(spec, max_depth=cfg.quad_depth)


def _fmt_matrix(name: str, m) -> str:
    def part(v):
        return round(v, 12) + 0.0  # no "-0"

    rows = ["[" + ", ".join(f"{part(z.real):.12g}{part(z.imag):+.12g}j" for z in row) + "]"
            for row in m]
    return f"{name} = [" + ", ".join(rows) + "]"


def cmd_periods(cfg: RunConfig):
    spec = load_spec(cfg.source, cfg.default_lambda)
    pd = _periods(cfg, spec)
    lines = [_fmt_matrix(n, getattr(pd, n)) for n in ("omega1", "omega2", "eta1", "eta2", "tau")]
    lines.append(f"legendre residual = {pd.legendre_residual():.3e}")
    return pd.to_dict(), "\n".join(lines)


def _parse_point(text: str, g: int) -> np.ndarray:
    try:
        u = np.array([complex(v.replace(" ", "")) for v in text.split(",")])
    except ValueError:
        raise InputError(f"cannot read point {text!r}") from None
    if u.shape != (g,):
        raise InputError(f"point {text!r} has {u.size} coordinates, genus is {g}")
    return u


def cmd_sigma(cfg: RunConfig):
    spec = load_spec(cfg.source, cfg.default_lambda)
    pd = _periods(cfg, spec)
    try:
        sig = sigma_function(pd, ThetaParams(cfg.theta_error))
    except UnsupportedGenusError as exc:
        raise ScopeError(str(exc)) from None
    values = []
    for text in cfg.points:
        u = _parse_point(text, pd.genus)
        s = sig(u)
        values.append({"u": [[float(z.real), float(z.imag)] for z in u],
                       "sigma": [float(s.real), float(s.imag)]})
    data = {"genus": pd.genus, **sig.to_dict(), "values": values}
    lines = [f"characteristic: delta'={data['delta_prime']}, delta''={data['delta_dblprime']}",
             f"c = {complex(sig.c):.12g}"]
    lines += [f"sigma({t}) = {complex(*v['sigma']):.12g}" for t, v in zip(cfg.points, values)]
    return data, "\n".join(lines)


def cmd_verify(cfg: RunConfig):
    spec = load_spec(cfg.source, cfg.default_lambda)
    rep = verify_report(spec, Tolerances(override=cfg.tolerance),
                        ThetaParams(cfg.theta_error), cfg.quad_depth)
    lines = []
    for c in rep.checks:
        extra = "" if c.residual is None else f"  residual={c.residual:.3e}"
        extra += "" if c.tolerance is None else f" tol={c.tolerance:.1e}"
        extra += f"  {c.detail}" if c.detail else ""
        lines.append(f"{'PASS' if c.passed else 'FAIL'} {c.name}{extra}")
    lines += [f"note: {n}" for n in rep.notes]
    lines.append("overall: " + ("PASS" if rep.passed else "FAIL"))
    return rep.to_dict(), "\n".join(lines), (0 if rep.passed else 1)


COMMANDS = {
    "semigroup": cmd_semigroup,
    "equations": cmd_equations,
    "diffbasis": cmd_diffbasis,
    "fundform": cmd_fundform,
    "periods": cmd_periods,
    "sigma": cmd_sigma,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="telesigma", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in SUBCOMMANDS:
        p = sub.add_parser(name)
        if name == "semigroup":
            p.add_argument("source", metavar="SEQUENCE", help="comma-separated, e.g. 4,6,5")
        else:
            p.add_argument("source", metavar="SPEC",
                           help="curve spec JSON file, or an inline sequence such as 2,3")
        p.add_argument("-o", "--output", type=Path, help="write to this file instead of stdout")
        p.add_argument("--text", action="store_true", help="human-readable output")
        p.add_argument("--default-lambda", choices=("symbolic", "zero"),
                       help="override the spec's treatment of omitted lambda values")
        p.add_argument("--tolerance", help=f"override every numeric threshold (env {ENV_TOLERANCE})")
        p.add_argument("--theta-error", help=f"theta tail target (env {ENV_THETA_ERROR})")
        p.add_argument("--quad-depth", help=f"max quadrature bisection depth (env {ENV_QUAD_DEPTH})")
        if name == "sigma":
            p.add_argument("--at", action="append", metavar="U",
                           help="evaluation point, comma-separated complex coordinates")
    return parser


def render(data, text: str, as_text: bool) -> str:
    if as_text:
        return text + "\n"
    return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        ns = build_parser().parse_args(argv)
    except SystemExit as exc:
        # argparse reports usage errors with 2, which is reserved for scope
        return 0 if exc.code in (0, None) else 1
    try:
        cfg = RunConfig.from_args(ns)
        result = COMMANDS[cfg.command](cfg)
    except (SequenceError, CurveSpecError, InputError, SingularCurveError) as exc:
        print(f"error: {exc}", file=stderr)
        return 1
    except (ScopeError, UnsupportedCurveError, UnsupportedGenusError) as exc:
        print(f"unsupported: {exc}", file=stderr)
        return 2
    except (PeriodError, DivergentThetaError, UnsolvableSystemError) as exc:
        print(f"error: {exc}", file=stderr)
        return 1
    data, text, *rest = result
    code = rest[0] if rest else 0
    out = render(data, text, cfg.text)
    if cfg.output is not None:
        try:
            cfg.output.write_text(out)
        except OSError as exc:
            print(f"error: cannot write {cfg.output}: {exc.strerror}", file=stderr)
            return 1
    else:
        stdout.write(out)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
