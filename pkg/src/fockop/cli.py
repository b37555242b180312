"""``fock``: command-line front end.

Subcommands: symbol, recover, matrix, apply, spectrum, gallery, verify.
A JSON config file (``--config``) supplies defaults; flags override it.
Exit codes: 0 ok, 2 bad input, 3 numerical failure, 4 suite failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import ConvergenceError, EvaluationError, FockError, ParameterError
from .hermite import FockVector, TruncationBasis, fock_eval
from .multiplier import GridSpec, cubature_for, from_spec
from .operator import OperatorMatrix, apply, build_matrix
from .symbol import multiplier_from_symbol_coeffs, multiplier_from_symbol_integral, symbol_coeffs, symbol_point

log = logging.getLogger("fockop.cli")

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC, EXIT_SUITE = 0, 2, 3, 4
MAX_ORACLE_POINTS = 5
MIN_TOL = 100 * np.finfo(float).eps


@dataclass
class RunConfig:
    n: int = 1
    N: int = 32
    order: int | None = None
    grid: dict = field(default_factory=lambda: asdict(GridSpec()))
    tolerances: dict = field(default_factory=dict)
    output: str | None = None
    seed: int = 0

    def validate(self):
        if self.n < 1 or self.N < 0:
            raise ParameterError("n must be >= 1 and N >= 0")
        if self.order is not None and self.order < 1:
            raise ParameterError("order must be positive")
        g = self.grid_spec
        if g.R <= 0 or g.points < 2 or g.eps_cluster <= 0:
            raise ParameterError("grid needs R > 0, points >= 2, eps_cluster > 0")
        for k, v in self.tolerances.items():
            if not float(v) >= MIN_TOL:
                raise ParameterError(f"tolerance {k}={v} below 100 machine epsilons")
        if self.seed < 0:
            raise ParameterError("seed must be nonnegative")
        return self

    @property
    def grid_spec(self) -> GridSpec:
        return GridSpec(**self.grid)

    @classmethod
    def load(cls, path):
        if not path:
            return cls()
        try:
            with open(path, encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ParameterError(f"cannot read config {path}: {exc}") from exc
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise ParameterError(f"unknown config keys: {sorted(unknown)}")
        cfg = cls(**data)
        cfg.grid = {**asdict(GridSpec()), **cfg.grid}
        return cfg


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def _write(text: str, path: str | None):
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(header, rows, comment=None) -> str:
    buf = io.StringIO()
    if comment:
        buf.write(f"# {comment}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([v if isinstance(v, str) else _fmt(v) for v in r])
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _range(text, what):
    try:
        lo, hi, cnt = text.split(":")
        cnt = int(cnt)
        if cnt < 1:
            raise ValueError
        return np.linspace(float(lo), float(hi), cnt)
    except ValueError:
        raise ParameterError(f"bad {what} range {text!r}; expected lo:hi:count") from None


def _floats(text, what):
    try:
        return [float(v) for v in text.replace(";", ",").split(",") if v.strip()]
    except ValueError:
        raise ParameterError(f"bad {what} value {text!r}") from None


def _read_table(path, what):
    try:
        with open(path, encoding="utf-8") as fh:
            rows = [r for r in csv.reader(line for line in fh if line.strip() and not line.startswith("#"))]
    except OSError as exc:
        raise ParameterError(f"cannot read {what} file: {exc}") from exc
    out = []
    for r in rows:
        try:
            out.append([float(v) for v in r])
        except ValueError:
            if out:
                raise ParameterError(f"non-numeric row in {what} file: {r}") from None
    return out


def _z_points(args, n):
    pts = []
    for item in args.z or []:
        v = _floats(item, "z")
        if len(v) != 2 * n:
            raise ParameterError(f"--z needs {2 * n} numbers (re,im per coordinate), got {item!r}")
        pts.append([complex(v[2 * j], v[2 * j + 1]) for j in range(n)])
    if args.z_range:
        if n != 1:
            raise ParameterError("--z-range is for n = 1")
        parts = args.z_range.split(",")
        if len(parts) != 2:
            raise ParameterError("--z-range needs 're_lo:re_hi:n,im_lo:im_hi:n'")
        re_, im_ = _range(parts[0], "re"), _range(parts[1], "im")
        pts.extend([[complex(a, b)] for a in re_ for b in im_])
    if args.z_file:
        for r in _read_table(args.z_file, "z"):
            if len(r) != 2 * n:
                raise ParameterError(f"z file rows need {2 * n} columns")
            pts.append([complex(r[2 * j], r[2 * j + 1]) for j in range(n)])
    if not pts:
        raise ParameterError("no evaluation points: use --z, --z-range or --z-file")
    return np.array(pts, dtype=complex)


def _x_points(args, n):
    pts = []
    for item in args.x or []:
        v = _floats(item, "x")
        if len(v) != n:
            raise ParameterError(f"--x needs {n} numbers, got {item!r}")
        pts.append(v)
    if args.x_range:
        if n != 1:
            raise ParameterError("--x-range is for n = 1")
        pts.extend([[v] for v in _range(args.x_range, "x")])
    if args.x_file:
        for r in _read_table(args.x_file, "x"):
            if len(r) != n:
                raise ParameterError(f"x file rows need {n} columns")
            pts.append(r)
    if not pts:
        raise ParameterError("no evaluation points: use --x, --x-range or --x-file")
    return np.array(pts, dtype=float)


def _multiplier(args):
    if not args.multiplier:
        raise ParameterError("a multiplier is required (-m)")
    spec = args.multiplier
    if spec.startswith("@"):
        try:
            with open(spec[1:], encoding="utf-8") as fh:
                spec = fh.read()
        except OSError as exc:
            raise ParameterError(f"cannot read multiplier file: {exc}") from exc
    return from_spec(spec)


def _load_json(path, what):
    """JSON from a file path, or inline when the argument starts with '{'."""
    if path.lstrip().startswith("{"):
        try:
            return json.loads(path)
        except json.JSONDecodeError as exc:
            raise ParameterError(f"malformed inline {what}: {exc}") from exc
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParameterError(f"cannot read {what}: {exc}") from exc


def _basis(cfg, m=None):
    n = m.n if m is not None else cfg.n
    return TruncationBasis(n, cfg.N)


def cmd_symbol(args, cfg):
    m = _multiplier(args)
    basis = _basis(cfg, m)
    if args.coeffs:
        cub = cubature_for(m, basis.N, cfg.order)
        c = symbol_coeffs(m, basis, cubature=cub)
        out = {**c.to_dict(), "order": cub.size, "multiplier": m.spec}
        _write(_json(out), cfg.output)
        return EXIT_OK
    z = _z_points(args, m.n)
    cub = cubature_for(m, max(basis.N, 32), cfg.order)
    phi = symbol_point(m, z, cubature=cub)
    phi = np.atleast_1d(phi)
    if m.n == 1:
        header = ["re_z", "im_z", "re_phi", "im_phi"]
    else:
        header = [f"{p}_z{j + 1}" for j in range(m.n) for p in ("re", "im")] + ["re_phi", "im_phi"]
    rows = [[v for zj in zr for v in (zj.real, zj.imag)] + [p.real, p.imag] for zr, p in zip(z, phi)]
    _write(_csv(header, rows, f"n={m.n} N={basis.N} order={cub.size}"), cfg.output)
    return EXIT_OK


def cmd_recover(args, cfg):
    if args.coeffs:
        d = _load_json(args.coeffs, "coefficient file")
        c = FockVector.from_dict(d)
        order = d.get("order")
    else:
        m = _multiplier(args)
        basis = _basis(cfg, m)
        cub = cubature_for(m, basis.N, cfg.order)
        c = symbol_coeffs(m, basis, cubature=cub)
        order = cub.size
    x = _x_points(args, c.n)
    vals = np.atleast_1d(multiplier_from_symbol_coeffs(c, x))
    header = [f"x{j + 1}" if c.n > 1 else "x" for j in range(c.n)] + ["re_m", "im_m"]
    rows = [list(xr) + [v.real, v.imag] for xr, v in zip(x, vals)]
    if args.integral_oracle:
        if c.n != 1:
            raise ParameterError("--integral-oracle is implemented for n = 1")
        header += ["re_m_integral", "im_m_integral"]
        pick = set(np.unique(np.round(np.linspace(0, len(x) - 1, min(MAX_ORACLE_POINTS, len(x)))).astype(int)))
        for k, r in enumerate(rows):
            if k in pick:
                v = multiplier_from_symbol_integral(c, x[k, 0], order=args.oracle_order)
                r += [v.real, v.imag]
            else:
                r += ["", ""]
    _write(_csv(header, rows, f"n={c.n} N={c.basis.N} order={order}"), cfg.output)
    return EXIT_OK


def cmd_matrix(args, cfg):
    m = _multiplier(args)
    S = build_matrix(m, _basis(cfg, m), order=cfg.order)
    if args.binary:
        header, payload = S.to_binary()
        header["order"] = S.order
        with open(args.binary, "wb") as fh:
            fh.write(payload)
        _write(_json(header), cfg.output)
        return EXIT_OK
    _write(_json({**S.to_dict(), "order": S.order, "source": S.source}), cfg.output)
    return EXIT_OK


def cmd_apply(args, cfg):
    d = _load_json(args.vector, "vector")
    F = FockVector.from_dict(d)
    if args.matrix:
        S = OperatorMatrix.from_dict(_load_json(args.matrix, "matrix"))
    else:
        m = _multiplier(args)
        S = build_matrix(m, F.basis, order=cfg.order)
    G = apply(S, F)
    out = {**G.to_dict(), "order": S.order}
    if args.z or args.z_range or args.z_file:
        z = _z_points(args, F.n)
        vals = np.atleast_1d(fock_eval(G, z))
        out["values"] = [{"z": [[float(v.real), float(v.imag)] for v in zr], "value": [float(w.real), float(w.imag)]}
                         for zr, w in zip(z, vals)]
    _write(_json(out), cfg.output)
    return EXIT_OK


def cmd_spectrum(args, cfg):
    from .spectral import spectrum_estimate
    m = _multiplier(args)
    rep = spectrum_estimate(m, _basis(cfg, m), order=cfg.order, grid=cfg.grid_spec)
    out = rep.to_dict()
    out["cluster_fraction"] = rep.cluster_fraction()
    out["cluster_radius"] = float(cfg.tolerances.get("cluster_radius", 0.05))
    _write(_json(out), cfg.output)
    return EXIT_OK


def _params(items):
    out = {}
    for item in items or []:
        if "=" not in item:
            raise ParameterError(f"--param needs key=value, got {item!r}")
        k, v = item.split("=", 1)
        try:
            out[k] = json.loads(v)
        except json.JSONDecodeError:
            out[k] = v
    return out


def cmd_gallery(args, cfg):
    from .gallery import run_gallery
    params = _params(args.param)
    if args.name in ("riesz",):
        params.setdefault("n", args.n or 2)
    if args.name in ("identity",) and args.n:
        params.setdefault("n", args.n)
    if args.name != "counterexample" and args.N is not None:
        params.setdefault("N", args.N)
    rep = run_gallery(args.name, **params)
    _write(_json(rep.to_dict()), cfg.output)
    return EXIT_OK if rep.passed or not args.strict else EXIT_SUITE


def cmd_verify(args, cfg):
    from .verify import run_suite
    results = run_suite(args.suite, seed=cfg.seed, tolerances=cfg.tolerances)
    ok = all(c.passed for _, c in results)
    if args.json:
        _write(_json({"suite": args.suite, "seed": cfg.seed, "pass": ok,
                      "checks": [{"suite": s, **c.to_dict()} for s, c in results]}), cfg.output)
    else:
        width = max(len(f"{s}.{c.id}") for s, c in results)
        lines = [f"{'check':<{width}}  result  {'value':>24}  {'reference':>24}  tolerance"]
        for s, c in results:
            lines.append(f"{s + '.' + c.id:<{width}}  {'PASS' if c.passed else 'FAIL':<6}  "
                         f"{_fmt(c.value):>24}  {_fmt(c.reference):>24}  {c.relation} {_fmt(c.tolerance)}")
        lines.append(f"{sum(c.passed for _, c in results)}/{len(results)} checks passed")
        _write("\n".join(lines) + "\n", cfg.output)
    return EXIT_OK if ok else EXIT_SUITE


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON run config; flags override it")
    common.add_argument("-n", type=int, default=None, help="dimension")
    common.add_argument("-N", type=int, default=None, help="truncation degree")
    common.add_argument("--order", type=int, default=None, help="quadrature order per axis")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("-o", "--output", default=None, help="output file (default stdout)")
    common.add_argument("-v", "--verbose", action="store_true")

    mult = argparse.ArgumentParser(add_help=False)
    mult.add_argument("-m", "--multiplier", help="multiplier spec: name, JSON object, or @file")

    zpts = argparse.ArgumentParser(add_help=False)
    zpts.add_argument("--z", action="append", help="point re,im[,re,im...]; repeatable")
    zpts.add_argument("--z-range", help="grid re_lo:re_hi:n,im_lo:im_hi:n")
    zpts.add_argument("--z-file", help="CSV of points (re,im per coordinate)")

    p = argparse.ArgumentParser(prog="fock", description="Singular integral operators on the Fock space.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("symbol", parents=[common, mult, zpts], help="synthesise the symbol of a multiplier")
    s.add_argument("--coeffs", action="store_true", help="emit monomial coefficients (JSON) instead of values")
    s.set_defaults(func=cmd_symbol)

    r = sub.add_parser("recover", parents=[common, mult], help="recover the multiplier from a symbol")
    r.add_argument("--coeffs", help="symbol coefficient JSON (from 'fock symbol --coeffs')")
    r.add_argument("--x", action="append", help="real point; repeatable")
    r.add_argument("--x-range", help="lo:hi:count")
    r.add_argument("--x-file", help="CSV of real points")
    r.add_argument("--integral-oracle", action="store_true",
                   help=f"cross-check up to {MAX_ORACLE_POINTS} points with the double integral")
    r.add_argument("--oracle-order", type=int, default=32)
    r.set_defaults(func=cmd_recover)

    mx = sub.add_parser("matrix", parents=[common, mult], help="truncated matrix of S")
    mx.add_argument("--binary", help="write raw c128 row-major payload here; header goes to output")
    mx.set_defaults(func=cmd_matrix)

    a = sub.add_parser("apply", parents=[common, mult, zpts], help="apply S to a Fock vector")
    a.add_argument("--vector", required=True, help="Fock vector: JSON file or inline JSON")
    a.add_argument("--matrix", help="matrix: JSON file or inline JSON (instead of -m)")
    a.set_defaults(func=cmd_apply)

    sp = sub.add_parser("spectrum", parents=[common, mult], help="spectrum report")
    sp.set_defaults(func=cmd_spectrum)

    g = sub.add_parser("gallery", parents=[common], help="named operator report")
    g.add_argument("--name", required=True)
    g.add_argument("--param", action="append", help="extra parameter key=value (JSON value)")
    g.add_argument("--strict", action="store_true", help="exit 4 when a check fails")
    g.set_defaults(func=cmd_gallery)

    v = sub.add_parser("verify", parents=[common], help="run invariant suites")
    v.add_argument("--suite", default="all")
    v.add_argument("--json", action="store_true", help="JSON instead of a text table")
    v.set_defaults(func=cmd_verify)
    return p


def _config(args) -> RunConfig:
    cfg = RunConfig.load(args.config)
    for key in ("n", "N", "order", "seed", "output"):
        val = getattr(args, key, None)
        if val is not None:
            setattr(cfg, key, val)
    return cfg.validate()


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = _config(args)
        return args.func(args, cfg)
    except (EvaluationError, ConvergenceError, FloatingPointError, ArithmeticError) as exc:
        print(f"fock: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ParameterError, ValueError) as exc:
        print(f"fock: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except FockError as exc:
        print(f"fock: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
