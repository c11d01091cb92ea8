"""Command-line front end.

Subcommands::

    cheneysharma sample   evaluate operators on a lattice and write CSV/JSON surfaces
    cheneysharma verify   run the property suites, one PASS/FAIL line each
    cheneysharma bounds   tabulate remainders against the error bounds
    cheneysharma nodes    print the node partitions through a point

Settings come from defaults, then ``--config`` (a JSON file), then flags.
Exit codes: 0 success, 1 property or bound failure, 2 usage or config error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import error_analysis as ea
from .domain import Axis, CurvedTriangle, parse_curve
from .exceptions import CheneySharmaError, CurveInvariantError, MissingDerivativeError
from .fields import ScalarField, get_field
from .operators import BivariateParams, OperatorKind, apply, remainder
from .verification import run_all

log = logging.getLogger("cheneysharma")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

#: Surfaces written for ``--op all``.
ALL_OPS = ("qx", "qy", "p1", "p2", "s1")
OP_NAMES = tuple(k.value for k in OperatorKind)


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    """Everything a command needs; defaults reproduce the Gentle example (h=1, m=5, n=6, beta=b=1)."""

    h: float = 1.0
    curve: str = "line"
    m: int = 5
    n: int = 6
    beta: float = 1.0
    b: float = 1.0
    field: str = "gentle"
    grid: int = 33
    op: str = "all"
    out: str = "out"
    format: str = "csv"

    def validate(self) -> None:
        if self.grid < 2:
            raise ConfigError(f"grid must be >= 2, got {self.grid}")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.format!r}")
        self.operators()
        try:
            self.bivariate()
            self.scalar_field()
        except (CheneySharmaError, KeyError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc

    def operators(self) -> list[str]:
        names: list[str] = []
        for part in self.op.lower().split(","):
            part = part.strip()
            if part == "all":
                names += [o for o in ALL_OPS if o not in names]
            elif part in OP_NAMES:
                if part not in names:
                    names.append(part)
            else:
                raise ConfigError(f"unknown operator {part!r}; choose from {', '.join(OP_NAMES)} or all")
        return names

    def triangle(self) -> CurvedTriangle:
        return CurvedTriangle(self.h, parse_curve(self.curve))

    def bivariate(self) -> BivariateParams:
        return BivariateParams.from_values(self.m, self.n, self.beta, self.b)

    def scalar_field(self) -> ScalarField:
        return get_field(self.field)

    def to_dict(self) -> dict[str, Any]:
        return dataclasses.asdict(self)

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "RunConfig":
        known = {f.name: f for f in dataclasses.fields(cls)}
        unknown = set(data) - set(known)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
        kwargs = {}
        for key, value in data.items():
            kwargs[key] = _coerce(known[key].type, value, key)
        return cls(**kwargs)

    @classmethod
    def loads(cls, text: str) -> "RunConfig":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        return cls.from_dict(data)


def _coerce(type_name: Any, value: Any, key: str) -> Any:
    try:
        if type_name in ("int", int):
            if isinstance(value, bool) or float(value) != int(float(value)):
                raise ValueError
            return int(float(value))
        if type_name in ("float", float):
            return float(value)
        return str(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad value for {key}: {value!r}") from exc


# Output


def lattice_points(tri: CurvedTriangle, N: int) -> list[tuple[float, float]]:
    """Row-major (y outer, x inner) lattice of ``[0, h]^2`` masked to the triangle."""
    grid = np.linspace(0.0, tri.h, N)
    return [(float(x), float(y)) for y in grid for x in grid if tri.contains(x, y, 0.0)]


def evaluate_surface(cfg: RunConfig, tri: CurvedTriangle, params: BivariateParams, F: ScalarField, op: str | None):
    rows = []
    for x, y in lattice_points(tri, cfg.grid):
        try:
            value = float(F(x, y)) if op is None else apply(OperatorKind(op), tri, params, F, x, y)
        except Exception as exc:
            raise RuntimeError(f"evaluation of {op or 'F'} failed at ({x!r}, {y!r}): {exc}") from exc
        rows.append((x, y, value))
    return rows


def write_surface(path: Path, rows, cfg: RunConfig, surface: str) -> None:
    if cfg.format == "csv":
        lines = ["x,y,value"] + [f"{x:.17g},{y:.17g},{v:.17g}" for x, y, v in rows]
        path.write_text("\n".join(lines) + "\n")
    else:
        doc = {"meta": {**cfg.to_dict(), "surface": surface}, "points": [list(r) for r in rows]}
        path.write_text(json.dumps(doc, indent=1) + "\n")


def read_surface(path: Path) -> list[tuple[float, float, float]]:
    """Load a surface written by :func:`write_surface`."""
    path = Path(path)
    if path.suffix == ".json":
        return [tuple(p) for p in json.loads(path.read_text())["points"]]
    lines = path.read_text().splitlines()[1:]
    return [tuple(float(v) for v in line.split(",")) for line in lines if line]


def cmd_sample(cfg: RunConfig) -> int:
    tri, params, F = cfg.triangle(), cfg.bivariate(), cfg.scalar_field()
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    for op in [None, *cfg.operators()]:
        name = "F" if op is None else op
        try:
            rows = evaluate_surface(cfg, tri, params, F, op)
        except RuntimeError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_FAIL
        path = out / f"{name}.{cfg.format}"
        write_surface(path, rows, cfg, name)
        print(f"wrote {path} ({len(rows)} points)")
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    try:
        params, F = cfg.bivariate(), cfg.scalar_field()
    except (CheneySharmaError, KeyError) as exc:
        print(f"FAIL  configuration: {exc}")
        return EXIT_FAIL
    try:
        results = run_all(cfg.triangle, params, F)
    except CurveInvariantError as exc:
        print(f"FAIL  curve invariants: {exc}")
        return EXIT_FAIL
    for r in results:
        print(r.line())
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} properties passed")
    return EXIT_OK if failed == 0 else EXIT_FAIL


def _sample_points(tri: CurvedTriangle, count: int) -> list[tuple[float, float]]:
    # interior lattice points, kept away from the sides where gaps vanish
    grid = np.linspace(0.0, tri.h, count + 2)[1:-1]
    return [(float(x), float(y)) for y in grid for x in grid if y < tri.f(x) - 1e-9]


def cmd_bounds(cfg: RunConfig, mode: str = "auto", samples: int = 7) -> int:
    tri, params, F = cfg.triangle(), cfg.bivariate(), cfg.scalar_field()
    if mode == "auto":
        mode = "certified" if F.lipschitz is not None else "estimate"
    if mode == "certified":
        try:
            mod_x = ea.lipschitz_modulus_1d(F, tri, Axis.X)
            mod_y = ea.lipschitz_modulus_1d(F, tri, Axis.Y)
            mod_xy = ea.lipschitz_modulus_2d(F, tri)
        except MissingDerivativeError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USAGE
    else:
        mod_x = mod_y = mod_xy = None
    header = "x,y,R_qx,B_qx,R_qy,B_qy,R_p1,B_p1,R_s1,B_s1,violation"
    print(f"# mode={mode} field={F.name} curve={cfg.curve} h={cfg.h} m={cfg.m} n={cfg.n} beta={cfg.beta} b={cfg.b}")
    print(header)
    violations = 0
    for x, y in _sample_points(tri, samples):
        gx, gy = ea.moment_gap_x(tri, params, x, y), ea.moment_gap_y(tri, params, x, y)
        r = {k: abs(remainder(OperatorKind(k), tri, params, F, x, y)) for k in ("qx", "qy", "p1", "s1")}
        bnd = {
            "qx": ea.bound_directional(tri, params, F, x, y, math.sqrt(gx), Axis.X, mod_x) if gx > 0 else 0.0,
            "qy": ea.bound_directional(tri, params, F, x, y, math.sqrt(gy), Axis.Y, mod_y) if gy > 0 else 0.0,
            "p1": ea.bound_product(tri, params, F, x, y, mod_xy),
            "s1": ea.bound_boolean(tri, params, F, x, y, mod_x, mod_y, mod_xy),
        }
        bad = [k for k in r if r[k] > bnd[k] * (1 + 1e-12) + 1e-15]
        violations += bool(bad)
        cells = [f"{x:.6g}", f"{y:.6g}"] + [f"{v:.6e}" for k in r for v in (r[k], bnd[k])]
        print(",".join(cells + ["|".join(bad) or "-"]))
    print(f"# {violations} point(s) with a violated bound")
    if violations and mode == "certified":
        return EXIT_FAIL
    return EXIT_OK


def cmd_nodes(cfg: RunConfig, x: float | None, y: float | None) -> int:
    tri = cfg.triangle()
    y = tri.h / 2 if y is None else y
    x = tri.h / 2 if x is None else x
    for coord, name in ((y, "y"), (x, "x")):
        if not (0.0 <= coord <= tri.h):
            print(f"error: {name}={coord} is outside [0, {tri.h}]", file=sys.stderr)
            return EXIT_USAGE
    nodes_x = tri.nodes_along(cfg.m, y, Axis.X)
    nodes_y = tri.nodes_along(cfg.n, x, Axis.Y)
    if nodes_x[-1] == 0.0:
        print(f"warning: degenerate chord at y={y} (g(y)=0)", file=sys.stderr)
    if nodes_y[-1] == 0.0:
        print(f"warning: degenerate chord at x={x} (f(x)=0)", file=sys.stderr)
    print(f"x-nodes at y={y!r} (m={cfg.m}): " + ", ".join(f"{v:.17g}" for v in nodes_x))
    print(f"y-nodes at x={x!r} (n={cfg.n}): " + ", ".join(f"{v:.17g}" for v in nodes_y))
    return EXIT_OK


# Argument handling


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="JSON file with RunConfig fields")
    common.add_argument("--h", type=float)
    common.add_argument("--curve", help="line | circle | superellipse:p | poly:c0,c1,...")
    common.add_argument("--m", type=int)
    common.add_argument("--n", type=int)
    common.add_argument("--beta", type=float)
    common.add_argument("--b", type=float)
    common.add_argument("--field", help="registry name, const:c or poly:i,j,c;...")
    common.add_argument("--grid", type=int)
    common.add_argument("--op", help=f"comma list of {', '.join(OP_NAMES)} or all")
    common.add_argument("--out")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="cheneysharma", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("sample", parents=[common], help="write operator surfaces")
    sub.add_parser("verify", parents=[common], help="run property checks")
    bounds = sub.add_parser("bounds", parents=[common], help="remainders against error bounds")
    bounds.add_argument("--mode", choices=("auto", "certified", "estimate"), default="auto")
    bounds.add_argument("--samples", type=int, default=7, help="interior lattice size per axis")
    nodes = sub.add_parser("nodes", parents=[common], help="print node partitions")
    nodes.add_argument("--x", type=float, dest="at_x")
    nodes.add_argument("--y", type=float, dest="at_y")
    sub.add_parser("show-config", parents=[common], help="print the merged configuration")
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    if args.config is not None:
        try:
            cfg = RunConfig.loads(Path(args.config).read_text())
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
    overrides = {f.name: getattr(args, f.name) for f in dataclasses.fields(RunConfig) if getattr(args, f.name, None) is not None}
    return dataclasses.replace(cfg, **overrides)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = resolve_config(args)
        if args.command == "verify":
            return cmd_verify(cfg)
        cfg.validate()
        cfg.triangle()
    except (ConfigError, CheneySharmaError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    log.debug("config: %s", cfg.to_dict())
    if args.command == "sample":
        return cmd_sample(cfg)
    if args.command == "bounds":
        return cmd_bounds(cfg, args.mode, args.samples)
    if args.command == "nodes":
        return cmd_nodes(cfg, args.at_x, args.at_y)
    sys.stdout.write(cfg.dumps())
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
