"""Batch front-end: read a job, run it, print a report.

A job is a JSON (or TOML) document with the fields

    space        {"kind": "circle" | "box" | "finite" | "complex", ...}
                 or {"fixture": name}
    cover_chain  {"standard": kind, "depth": n}
                 or {"covers": [{"id": ..., "elements": ...}, ...],
                     "projections": [{fine: coarse, ...}, ...]}
    coefficients "Z", "Z/2", "Z+Z/2", ...
    requests     [{"op": ..., ...}, ...]
    options      {"window": k, "degrees": [lo, hi]}

Rationals are integers, "p/q" strings or [p, q] pairs.  Box axes default to
closed intervals and circle arcs to open ones; "closed": [left, right]
overrides either.
"""

import argparse
import json
import sys
from collections.abc import Hashable, Mapping, Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import portion as P
import tomli

from . import _matrix as mx
from .abelian import FgAbGroup
from .backends import (
    AffineMap,
    BoxSpace,
    CircleSpace,
    FiniteSpace,
    IdentityMap,
    RotationMap,
    WindingMap,
    rational,
    standard_chain,
)
from .cech import (
    CoverSystem,
    Verdict,
    compact_beta_check,
    eta,
    functional,
    induced_limit_map,
    naturality_check,
    pair_sequence_check,
    realizes_group,
    record_stages,
    triple_sequence_check,
)
from .config import Settings, parse_degree_range
from .cover import Cover, MapHandle
from .errors import CheckFailure, FcechError, NotACover, ParseError
from .fixtures import FIXTURES, Fixture, get_fixture
from .logger import Logger
from .simplicial import Complex, SimplicialPair, cohomology, homology
from .timer import Timer

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT_ERROR = 2

SPACE_KINDS = ("circle", "box", "finite", "complex")
GROUP_OPS = ("homology", "cohomology")
CHECK_OPS = ("pair_sequence", "triple_sequence", "naturality", "realizes", "compact_beta")


@dataclass
class JobSpec:
    name: str
    coefficients: FgAbGroup
    requests: list[dict[str, Any]]
    window: int
    degrees: tuple[int, int]
    system: CoverSystem | None = None
    complex: SimplicialPair | None = None
    fixture: Fixture | None = None
    compact: bool = True


@dataclass
class Report:
    name: str
    space: dict[str, Any]
    coefficients: str
    results: list[dict[str, Any]] = field(default_factory=list)
    timings: list[tuple[str, float]] = field(default_factory=list)

    @property
    def exit_code(self) -> int:
        for r in self.results:
            if r.get("passed") is False:
                return EXIT_CHECK_FAILED
        return EXIT_OK

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "space": self.space,
            "coefficients": self.coefficients,
            "results": self.results,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def lines(self) -> list[str]:
        out = [f"job: {self.name}"]
        flag = "compact" if self.space["compact"] else "non-compact"
        out.append(f"space: {self.space['kind']} ({flag})")
        out.append(f"coefficients: {self.coefficients}")
        for r in self.results:
            out.append(_result_line(r))
            out.extend(f"  note: {n}" for n in r.get("notes", []))
        if self.timings:
            out.append("timings:")
            out.extend(f"  {label}: {t:.4f} s" for label, t in self.timings)
        return out


def _result_line(r: Mapping[str, Any]) -> str:
    op = r["op"]
    if op in GROUP_OPS:
        symbol = "H_" if op == "homology" else "H^"
        flag = "stabilized" if r["stabilized"] else "not stabilized"
        return f"{symbol}{r['degree']} = {r['group']} ({flag})"
    if op == "eta":
        value = "bounded-unknown" if r["value"] is None else r["value"]
        return f"eta = {value} (dimension bound {r['dimension_bound']})"
    if op == "induced":
        return f"induced {r['variance']} {r['degree']}: {r['matrix']}"
    status = "pass" if r["passed"] else "FAIL"
    return f"{op}: {status}"


def report_from_dict(body: Mapping[str, Any]) -> Report:
    results = []
    for r in body["results"]:
        r = dict(r)
        if "group" in r:
            r["group"] = str(FgAbGroup.parse(r["group"]))
        results.append(r)
    return Report(body["name"], dict(body["space"]), body["coefficients"], results)


# ---------------------------------------------------------------------------
# parsing


def _require(d: Mapping[str, Any], key: str, path: str) -> Any:
    if not isinstance(d, Mapping):
        raise ParseError(path, "expected an object")
    try:
        return d[key]
    except KeyError:
        raise ParseError(f"{path}.{key}" if path else key, "missing field")


def _rational(x: Any, path: str):
    try:
        return rational(x)
    except (TypeError, ValueError, ZeroDivisionError) as e:
        raise ParseError(path, f"invalid rational {x!r} ({e})")


def _bounds(d: Mapping[str, Any], default: bool) -> tuple[P.Bound, P.Bound]:
    closed = d.get("closed", [default, default])
    if isinstance(closed, bool):
        closed = [closed, closed]
    return (P.CLOSED if closed[0] else P.OPEN, P.CLOSED if closed[1] else P.OPEN)


def _axis(a: Any, path: str) -> P.Interval:
    if isinstance(a, Sequence) and not isinstance(a, str) and len(a) == 2:
        return P.closed(_rational(a[0], f"{path}[0]"), _rational(a[1], f"{path}[1]"))
    lo = _rational(_require(a, "lo", path), f"{path}.lo")
    hi = _rational(_require(a, "hi", path), f"{path}.hi")
    left, right = _bounds(a, True)
    return P.Interval.from_atomic(left, lo, hi, right)


def _box_union(region: Any, path: str, dim: int | None = None) -> tuple:
    if not isinstance(region, list):
        raise ParseError(path, "a box region is a list of boxes")
    boxes = []
    for i, b in enumerate(region):
        if not isinstance(b, list):
            raise ParseError(f"{path}[{i}]", "a box is a list of axis intervals")
        if dim is not None and len(b) != dim:
            raise ParseError(f"{path}[{i}]", f"box is not {dim}-dimensional")
        boxes.append(tuple(_axis(a, f"{path}[{i}][{k}]") for k, a in enumerate(b)))
    return tuple(boxes)


def _arc(a: Any, path: str) -> P.Interval:
    if isinstance(a, Mapping) and "point" in a:
        return CircleSpace.point(_rational(a["point"], f"{path}.point"))
    start = _rational(_require(a, "start", path), f"{path}.start")
    length = _rational(_require(a, "length", path), f"{path}.length")
    left, right = _bounds(a, False)
    try:
        return CircleSpace.arc(start, length, left == P.CLOSED, right == P.CLOSED)
    except ValueError as e:
        raise ParseError(path, str(e))


def _circle_region(region: Any, path: str) -> P.Interval:
    if isinstance(region, Mapping):
        return _arc(region, path)
    if not isinstance(region, list):
        raise ParseError(path, "a circle region is an arc or a list of arcs")
    out = P.empty()
    for i, a in enumerate(region):
        out = out | _arc(a, f"{path}[{i}]")
    return out


def parse_region(space_kind: str, region: Any, path: str, dim: int | None = None) -> Any:
    if space_kind == "box":
        return _box_union(region, path, dim)
    if space_kind == "circle":
        return _circle_region(region, path)
    if not isinstance(region, list):
        raise ParseError(path, "a finite region is a list of points")
    return frozenset(region)


def parse_space(d: Mapping[str, Any], path: str = "space"):
    kind = _require(d, "kind", path)
    if kind not in SPACE_KINDS:
        raise ParseError(f"{path}.kind", f"unknown space kind {kind!r}")
    try:
        if kind == "box":
            whole = _box_union(_require(d, "whole", path), f"{path}.whole")
            dim = len(whole[0]) if whole else d.get("dim", 1)
            sub = _box_union(d.get("sub", []), f"{path}.sub", dim)
            return BoxSpace(whole, sub, dim=dim)
        if kind == "circle":
            whole = _circle_region(d["whole"], f"{path}.whole") if "whole" in d else None
            sub = _circle_region(d["sub"], f"{path}.sub") if "sub" in d else None
            return CircleSpace(whole, sub)
        if kind == "finite":
            return FiniteSpace(_require(d, "points", path), d.get("sub", []))
    except ParseError:
        raise
    except ValueError as e:
        raise ParseError(path, str(e))
    raise ParseError(f"{path}.kind", "complex spaces carry no cover chain")


def _label(key: Any) -> Hashable:
    if isinstance(key, str) and key.lstrip("-").isdigit():
        return int(key)
    return key


def parse_cover_chain(space, d: Mapping[str, Any], depth: int, path: str = "cover_chain"):
    if "standard" in d:
        kind = d["standard"]
        try:
            sys = standard_chain(kind, int(d.get("depth", depth)))
        except ValueError as e:
            raise ParseError(f"{path}.standard", str(e))
        if space is None:
            return sys
        if space.kind != sys.space.kind:
            raise ParseError(f"{path}.standard", f"{kind} chain does not live on a {space.kind} space")
        return sys.with_sub(space.sub) if not space.is_empty(space.sub) else sys
    if space is None:
        raise ParseError("space", "explicit covers need a space")
    covers_data = _require(d, "covers", path)
    if not isinstance(covers_data, list) or not covers_data:
        raise ParseError(f"{path}.covers", "expected a nonempty list of covers")
    dim = getattr(space, "dim", None)
    covers = []
    for i, c in enumerate(covers_data):
        cpath = f"{path}.covers[{i}]"
        elements = _require(c, "elements", cpath)
        if isinstance(elements, Mapping):
            items = [(_label(k), v, f"{cpath}.elements.{k}") for k, v in elements.items()]
        else:
            items = [(k, v, f"{cpath}.elements[{k}]") for k, v in enumerate(elements)]
        regions = {
            k: space.restrict(parse_region(space.kind, v, p, dim)) for k, v, p in items
        }
        covers.append(Cover(str(c.get("id", f"cover{i}")), space, regions))
    projections = d.get("projections")
    if projections is not None:
        if not isinstance(projections, list):
            raise ParseError(f"{path}.projections", "expected a list of objects")
        projections = [
            {_label(k): _label(v) for k, v in p.items()} for p in projections
        ]
    try:
        return CoverSystem(space, covers, projections, name=d.get("name"))
    except NotACover:
        raise
    except ValueError as e:
        raise ParseError(path, str(e))


def parse_complex(d: Mapping[str, Any], path: str = "space") -> SimplicialPair:
    try:
        total = Complex.generated_by(_require(d, "simplices", path))
        sub = Complex.generated_by(d.get("sub", []))
        return SimplicialPair(total, sub)
    except ParseError:
        raise
    except ValueError as e:
        raise ParseError(path, str(e))


def parse_job(data: Any, settings: Settings | None = None, name: str = "job") -> JobSpec:
    settings = Settings() if settings is None else settings
    if not isinstance(data, Mapping):
        raise ParseError("", "a job is an object")
    options = data.get("options", {})
    try:
        window = int(options.get("window", settings.window))
        degrees = parse_degree_range(options.get("degrees", settings.degrees))
    except (TypeError, ValueError) as e:
        raise ParseError("options", str(e))
    if window < 1:
        raise ParseError("options.window", f"window must be positive: {window}")
    try:
        coefficients = FgAbGroup.parse(str(data.get("coefficients", "Z")))
    except ValueError as e:
        raise ParseError("coefficients", str(e))
    if coefficients.is_trivial():
        raise ParseError("coefficients", "coefficient group must be nontrivial")
    requests = data.get("requests", [{"op": "homology"}, {"op": "cohomology"}])
    if not isinstance(requests, list):
        raise ParseError("requests", "expected a list")
    for i, r in enumerate(requests):
        op = _require(r, "op", f"requests[{i}]")
        if op not in GROUP_OPS + CHECK_OPS + ("eta", "induced"):
            raise ParseError(f"requests[{i}].op", f"unknown operation {op!r}")
    job = JobSpec(str(data.get("name", name)), coefficients, requests, window, degrees)

    space_data = data.get("space", {})
    if not isinstance(space_data, Mapping):
        raise ParseError("space", "expected an object")
    chain = data.get("cover_chain")
    if "fixture" in space_data:
        try:
            fx = get_fixture(space_data["fixture"])
        except KeyError as e:
            raise ParseError("space.fixture", str(e))
        job.fixture = fx
        job.compact = fx.compact
        if fx.kind == "complex":
            job.complex = fx.complex()
        else:
            depth = (chain or {}).get("depth", settings.depth)
            job.system = fx.build(int(depth))
        return job
    if space_data.get("kind") == "complex":
        job.complex = parse_complex(space_data)
        return job
    space = parse_space(space_data) if space_data else None
    if chain is None:
        raise ParseError("cover_chain", "missing field")
    job.system = parse_cover_chain(space, chain, settings.depth)
    job.compact = job.system.space.is_compact()
    return job


def load_job(path: str | Path, settings: Settings | None = None) -> JobSpec:
    path = Path(path)
    try:
        if path.suffix == ".toml":
            with open(path, "rb") as f:
                data = tomli.load(f)
        else:
            with open(path) as f:
                data = json.load(f)
    except OSError as e:
        raise ParseError(str(path), e.strerror or str(e))
    except json.JSONDecodeError as e:
        raise ParseError(str(path), f"line {e.lineno} column {e.colno}: {e.msg}")
    except tomli.TOMLDecodeError as e:
        raise ParseError(str(path), str(e))
    try:
        return parse_job(data, settings, name=path.stem)
    except ParseError as e:
        raise ParseError(f"{path}:{e.path}", e.msg)


def fixture_job(name: str, settings: Settings | None = None) -> JobSpec:
    fx = get_fixture(name)
    requests: list[dict[str, Any]] = [{"op": "homology"}, {"op": "cohomology"}]
    if fx.kind == "cover_system":
        requests += [{"op": "eta"}, {"op": "pair_sequence"}]
        if fx.compact:
            requests.append({"op": "compact_beta"})
        if fx.inner is not None:
            requests.append({"op": "triple_sequence"})
    return parse_job({"space": {"fixture": name}, "requests": requests}, settings, name=name)


# ---------------------------------------------------------------------------
# running


def _degrees(r: Mapping[str, Any], job: JobSpec) -> tuple[int, int]:
    if "degree" in r:
        return parse_degree_range(int(r["degree"]))
    return parse_degree_range(r.get("degrees", job.degrees))


def _verdict_result(op: str, v: Verdict) -> dict[str, Any]:
    return {"op": op, "check": v.check, "passed": v.passed, "failures": v.failures, "notes": v.notes}


def _complex_groups(job: JobSpec, op: str, lo: int, hi: int) -> list[dict[str, Any]]:
    assert job.complex is not None
    compute = homology if op == "homology" else cohomology
    return [
        {"op": op, "degree": n, "group": str(compute(job.complex, job.coefficients, n)), "stabilized": True}
        for n in range(lo, hi + 1)
    ]


def _map_handle(d: Mapping[str, Any], sys: CoverSystem, path: str) -> MapHandle:
    space = sys.space
    kind = _require(d, "kind", path)
    try:
        if kind == "identity":
            return IdentityMap(space)
        if kind == "rotation":
            return RotationMap(space, space, _rational(_require(d, "offset", path), f"{path}.offset"))
        if kind == "winding":
            return WindingMap(space, space, int(_require(d, "degree", path)))
        if kind == "affine":
            scale = _rational(_require(d, "scale", path), f"{path}.scale")
            shift = _rational(d.get("shift", 0), f"{path}.shift")
            return AffineMap(space, space, scale, shift)
    except ParseError:
        raise
    except ValueError as e:
        raise ParseError(path, str(e))
    raise ParseError(f"{path}.kind", f"unknown map kind {kind!r}")


def _run_request(job: JobSpec, r: Mapping[str, Any], i: int, logger: Logger | None) -> list[dict[str, Any]]:
    op = r["op"]
    path = f"requests[{i}]"
    G = job.coefficients
    if job.complex is not None:
        if op not in GROUP_OPS:
            raise ParseError(f"{path}.op", f"{op} needs a cover system, not a complex")
        return _complex_groups(job, op, *_degrees(r, job))
    sys = job.system
    assert sys is not None
    window = int(r.get("window", job.window))
    if op in GROUP_OPS:
        lo, hi = _degrees(r, job)
        out = []
        reports = {}
        for n in range(lo, hi + 1):
            rep = functional(sys, G, n, op, window)
            reports[(op, n)] = rep
            out.append(
                {
                    "op": op,
                    "degree": n,
                    "group": str(rep.limit_group),
                    "stabilized": rep.stabilized,
                    "stable_window": rep.stable_window,
                    "stages": [str(g) for g in rep.stage_groups],
                }
            )
        if logger is not None:
            record_stages(sys, reports, logger)
        return out
    if op == "eta":
        e = eta(sys, G, window)
        return [
            {
                "op": "eta",
                "value": e.value,
                "candidate": e.candidate,
                "dimension_bound": e.dimension_bound,
                "stabilized": e.stabilized,
            }
        ]
    if op == "pair_sequence":
        v = pair_sequence_check(sys, G, _degrees(r, job))
        return [_verdict_result(op, v)]
    if op == "triple_sequence":
        if "inner" in r:
            inner = parse_region(sys.space.kind, r["inner"], f"{path}.inner", getattr(sys.space, "dim", None))
        elif job.fixture is not None and job.fixture.inner is not None:
            inner = job.fixture.inner
        else:
            raise ParseError(f"{path}.inner", "missing field")
        variance = r.get("variance", "cohomology")
        v = triple_sequence_check(sys, inner, G, _degrees(r, job), variance)
        return [_verdict_result(op, v)]
    if op == "naturality":
        f = _map_handle(_require(r, "map", path), sys, f"{path}.map")
        lo, hi = _degrees(r, job)
        return [_verdict_result(op, naturality_check(f, sys, G, n)) for n in range(max(lo, 1), hi + 1)]
    if op == "induced":
        f = _map_handle(_require(r, "map", path), sys, f"{path}.map")
        variance = r.get("variance", "homology")
        n = int(_require(r, "degree", path))
        h = induced_limit_map(f, sys, G, n, variance)
        return [
            {
                "op": op,
                "variance": variance,
                "degree": n,
                "source": str(h.source),
                "target": str(h.target),
                "matrix": mx.to_lists(h.matrix),
            }
        ]
    if op == "realizes":
        variance = r.get("variance", "cohomology")
        n = int(_require(r, "degree", path))
        try:
            expected = FgAbGroup.parse(str(_require(r, "expected", path)))
        except ValueError as e:
            raise ParseError(f"{path}.expected", str(e))
        return [_verdict_result(op, realizes_group(sys, G, n, expected, variance, window))]
    if op == "compact_beta":
        fixture = r.get("fixture", job.fixture.name if job.fixture is not None else None)
        v = compact_beta_check(sys, G, _degrees(r, job), fixture, window)
        return [_verdict_result(op, v)]
    raise ParseError(f"{path}.op", f"unknown operation {op!r}")


def run(job: JobSpec, logger: Logger | None = None) -> Report:
    if job.complex is not None:
        space = {"kind": "complex", "compact": True}
    else:
        assert job.system is not None
        space = {"kind": job.system.space.kind, "compact": job.compact}
    if job.fixture is not None:
        space["fixture"] = job.fixture.name
    report = Report(job.name, space, str(job.coefficients))
    timer = Timer()
    timer.start()
    for i, r in enumerate(job.requests):
        try:
            results = _run_request(job, r, i, logger)
        except CheckFailure as e:
            results = [{"op": r["op"], "passed": False, "failures": [{"error": str(e), **e.witness}]}]
        report.results.extend(results)
        report.timings.append((f"{i}:{r['op']}", timer.lap(r["op"])))
    return report


def list_fixtures() -> list[dict[str, Any]]:
    return [
        {
            "name": fx.name,
            "kind": fx.kind,
            "description": fx.description,
            "compact": fx.compact,
            "source": fx.source,
            "eta": fx.eta_value,
            "expected": fx.table(),
            "job": fx.job,
        }
        for fx in FIXTURES.values()
    ]


def _print_catalog(as_json: bool) -> None:
    catalog = list_fixtures()
    if as_json:
        print(json.dumps(catalog, indent=2, sort_keys=True))
        return
    for entry in catalog:
        flag = "compact" if entry["compact"] else "non-compact"
        print(f"{entry['name']} ({entry['kind']}, {flag}, source: {entry['source']})")
        print(f"  {entry['description']}")
        for variance, table in entry["expected"].items():
            groups = ", ".join(f"{n}: {g}" for n, g in table.items()) or "none"
            print(f"  {variance}: {groups}")


def parse(argv: Sequence[str] | None = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        description="Compute functional Cech homology and cohomology of a cover system."
    )
    parser.add_argument("input", nargs="?", default=None, help="job file (JSON or TOML)")
    parser.add_argument("-c", "--config", default=None, help="config file")
    parser.add_argument("-o", "--output", default=None, help="CSV file for stage diagnostics")
    parser.add_argument("--json", action="store_true", help="print the machine-readable report")
    parser.add_argument("--degrees", default=None, help="degree range, e.g. 0..3")
    parser.add_argument("--window", default=None, type=int, help="stabilization window")
    parser.add_argument("--fixture", default=None, help="run a bundled fixture")
    parser.add_argument("--list", action="store_true", help="list bundled fixtures")
    return parser.parse_args(argv)


def main(argv: Sequence[str] | None = None) -> int:
    args = parse(argv)
    if args.list:
        _print_catalog(args.json)
        return EXIT_OK
    try:
        settings = Settings(args.config) if args.config else Settings()
        if args.degrees is not None:
            settings.degrees = args.degrees
        if args.window is not None:
            settings.window = args.window
        if args.fixture is not None:
            job = fixture_job(args.fixture, settings)
        elif args.input is not None:
            job = load_job(args.input, settings)
        else:
            raise ParseError("input", "give a job file, --fixture or --list")
        if args.degrees is not None:
            job.degrees = settings.degrees
        if args.window is not None:
            job.window = settings.window
        logger = Logger(args.output) if args.output else None
    except (KeyError, FcechError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    try:
        report = run(job, logger)
    except ParseError as e:
        # request arguments are parsed as each request runs
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except FcechError as e:
        print(f"error: {job.name}: {e}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    if args.json:
        print(report.to_json())
    else:
        print("\n".join(report.lines()))
    if logger is not None:
        logger.dump(quiet=args.json)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
