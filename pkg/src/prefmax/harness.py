"""Experiment dispatch over fixtures, with machine-readable reports and traces."""

from __future__ import annotations

import csv
import json
import os
import time
from dataclasses import dataclass

import numpy as np

from .cones import normal_membership, strict_normal_membership
from .descent import DescentConfig, DescentTrace, StepSchedule, TraceRow, run_descent
from .fixtures import Fixture, get_fixture
from .plastria import zero_maximality_check
from .points import GroundSet, Point
from .relations import check_property, maximal_elements, maxima
from .vip import mvip_solutions, svip_inclusion_check, svip_solutions, uniqueness_check

SCHEMA_VERSION = 1

KNOWN_CHECKS = (
    "maximal", "maxima", "mvip", "mvip-empty", "svip", "svip-all",
    "svip-inclusion", "uniqueness", "zero-maximality", "cones",
    "complete", "transitive", "fip", "strict-gap",
)


class CapabilityError(ValueError):
    """The experiment descriptor asks a fixture for something it cannot do."""


@dataclass(frozen=True)
class ExperimentSpec:
    fixture: str
    suite: tuple[str, ...] | None = None
    ground: GroundSet | None = None
    tol: float = 1e-9
    seed: int = 0
    mode: str | None = None  # "T" | "G" hull variant for the Stampacchia sweeps

    def __post_init__(self):
        if self.tol < 0:
            raise ValueError("tolerance must be nonnegative")
        if self.mode not in (None, "T", "G"):
            raise ValueError("mode must be 'T' or 'G'")


@dataclass(frozen=True)
class Verdict:
    check: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class RunReport:
    command: str
    fixture: str
    verdicts: tuple[Verdict, ...]
    artifacts: tuple[str, ...] = ()
    wall_time_s: float = 0.0

    @property
    def all_passed(self) -> bool:
        return all(v.passed for v in self.verdicts)

    @property
    def exit_code(self) -> int:
        return 0 if self.all_passed else 1

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "command": self.command,
            "fixture": self.fixture,
            "verdicts": [
                {"check": v.check, "pass": v.passed, "detail": v.detail}
                for v in self.verdicts
            ],
            "artifacts": list(self.artifacts),
            "wall_time_s": self.wall_time_s,
        }


def _coords_set(points) -> set[tuple]:
    return {p.coords for p in points}


def _expected_set(exp) -> set[tuple]:
    return {tuple(float(c) for c in p) for p in exp}


def _set_verdict(check: str, actual: set, expected: set) -> Verdict:
    if actual == expected:
        return Verdict(check, True, f"{len(actual)} points as expected")
    extra = sorted(actual - expected)[:3]
    missing = sorted(expected - actual)[:3]
    return Verdict(check, False, f"extra={extra} missing={missing}")


def _ball_on_empty(fixture: Fixture, spec: ExperimentSpec) -> bool:
    mode = spec.mode or fixture.expectations.get("svip_mode", "T")
    return mode == "G"


def _run_check(name: str, fixture: Fixture, ground: GroundSet, spec: ExperimentSpec) -> Verdict:
    rel = fixture.relation
    exp = fixture.expectations

    if name == "maximal":
        me_ground = fixture.me_ground() if spec.ground is None else ground
        window = _coords_set(ground)
        actual = {p.coords for p in maximal_elements(rel, me_ground) if p.coords in window}
        if exp.get("me") == "all":
            expected = window
        elif "me" in exp:
            expected = _expected_set(exp["me"])
        elif "nonmaximal" in exp:
            expected = window - _expected_set(exp["nonmaximal"])
        else:
            return Verdict(name, True, f"{len(actual)} maximal points (no expectation declared)")
        return _set_verdict(name, actual, expected)

    if name == "maxima":
        actual = _coords_set(maxima(rel, ground))
        return _set_verdict(name, actual, _expected_set(exp.get("maxima", ())))

    if name in ("mvip", "mvip-empty"):
        if fixture.cone_oracle is None:
            raise CapabilityError(f"fixture {fixture.name!r} has no cone oracle")
        actual = _coords_set(mvip_solutions(fixture.cone_oracle, ground, spec.tol))
        expected = set() if name == "mvip-empty" else _expected_set(exp.get("mvip", ()))
        return _set_verdict(name, actual, expected)

    if name in ("svip", "svip-all"):
        sols = svip_solutions(rel, ground, fixture.cone_oracle,
                              ball_on_empty=_ball_on_empty(fixture, spec), tol=spec.tol,
                              contour_sampler=fixture.contour_sampler)
        actual = _coords_set(sols)
        expected = _coords_set(ground) if name == "svip-all" else _expected_set(exp.get("svip", ()))
        return _set_verdict(name, actual, expected)

    if name == "svip-inclusion":
        report = svip_inclusion_check(rel, ground, spec.tol, fixture.cone_oracle,
                                      ball_on_empty=_ball_on_empty(fixture, spec),
                                      contour_sampler=fixture.contour_sampler)
        expected = exp.get("svip_subset_me", True)
        ok = report.holds == expected
        tag = "held" if report.holds else "failed"
        return Verdict(name, ok, f"inclusion {tag} (expected {'hold' if expected else 'failure'}); {report.detail}")

    if name == "uniqueness":
        if fixture.cone_oracle is None:
            raise CapabilityError(f"fixture {fixture.name!r} has no cone oracle")
        me_ground = fixture.me_ground() if fixture.me_margin > 0 else None
        got = uniqueness_check(rel, fixture.cone_oracle, ground, spec.tol, me_ground=me_ground)
        expected = exp.get("uniqueness", True)
        return Verdict(name, got == expected, f"equivalence={got}, expected {expected}")

    if name == "zero-maximality":
        if fixture.gap is None:
            raise CapabilityError(f"fixture {fixture.name!r} has no gap function")
        rng = np.random.default_rng(spec.seed)
        report = zero_maximality_check(fixture.gap, rel, ground, spec.tol, rng=rng)
        expected = exp.get("zero_maximality", True)
        return Verdict(name, report.holds == expected, report.detail or report.prop)

    if name == "cones":
        from .fixtures import self_test_fixture
        if fixture.cone_oracle is None:
            raise CapabilityError(f"fixture {fixture.name!r} has no cone oracle")
        try:
            self_test_fixture(fixture, seed=spec.seed or 12345, tol=spec.tol)
        except AssertionError as exc:
            return Verdict(name, False, str(exc))
        return Verdict(name, True, "closed-form cones match sampled membership")

    if name in ("complete", "transitive", "fip"):
        report = check_property(rel, ground, name)
        expected = exp.get(name, fixture.complete if name == "complete" else True)
        ok = report.holds == expected
        wit = f"; witness {report.witness}" if report.witness else ""
        return Verdict(name, ok, f"holds={report.holds}, expected {expected}{wit}")

    if name == "strict-gap":
        query = exp.get("weak_not_strict_query")
        if query is None:
            raise CapabilityError(f"fixture {fixture.name!r} declares no weak/strict gap query")
        query = tuple(float(c) for c in query)
        tested = 0
        for x in ground:
            sample = fixture.contour_sampler(x)
            if sample.is_empty:
                continue
            tested += 1
            if not normal_membership(sample, query, spec.tol):
                return Verdict(name, False, f"query rejected by the weak cone at {x}")
            if strict_normal_membership(sample, query):
                return Verdict(name, False, f"query accepted by the strict cone at {x}")
        if tested == 0:
            return Verdict(name, False, "no base point with a non-empty contour")
        return Verdict(name, True,
                       f"query {query} weakly accepted, strictly rejected at {tested} base points")

    raise CapabilityError(f"unknown check {name!r}; known: {', '.join(KNOWN_CHECKS)}")


def run_experiment(spec: ExperimentSpec) -> RunReport:
    """Run a named check suite against a fixture, in deterministic order."""
    started = time.perf_counter()
    fixture = get_fixture(spec.fixture)
    ground = spec.ground if spec.ground is not None else fixture.default_ground
    suite = spec.suite if spec.suite else fixture.default_suite
    if not suite:
        raise CapabilityError(f"fixture {spec.fixture!r} declares no default suite; pass one")
    for name in suite:
        if name not in KNOWN_CHECKS:
            raise CapabilityError(f"unknown check {name!r}; known: {', '.join(KNOWN_CHECKS)}")
    verdicts = tuple(_run_check(name, fixture, ground, spec) for name in suite)
    command = f"check --fixture {spec.fixture} --suite {','.join(suite)}"
    return RunReport(command, spec.fixture, verdicts,
                     wall_time_s=time.perf_counter() - started)


def descend_fixture(name: str, x0, theta0: float = 1.0, schedule: StepSchedule | None = None,
                    max_iters: int = 10_000, eps: float = 0.0) -> DescentTrace:
    """Run the descent iteration on a fixture that carries a gap function."""
    fixture = get_fixture(name)
    if fixture.gap is None or fixture.descent_direction is None:
        raise CapabilityError(f"fixture {name!r} has no gap function registered")
    x1 = Point(tuple(float(c) for c in x0))
    if x1.dim != fixture.relation.dim:
        raise CapabilityError(
            f"fixture {name!r} is {fixture.relation.dim}-dimensional, got x0 of dim {x1.dim}")
    sched = schedule if schedule is not None else StepSchedule.harmonic(theta0)
    config = DescentConfig(lipschitz=fixture.gap.lipschitz, max_iters=max_iters, eps=eps)
    return run_descent(fixture.descent_oracle(), x1, sched, config,
                       reference=fixture.reference, gap=fixture.gap)


def _fmt(value: float | None) -> str:
    return "" if value is None else repr(value)


def _fmt_point(p: Point | None) -> str:
    return "" if p is None else ";".join(repr(c) for c in p.coords)


def _atomic_write(path: str, payload: str) -> None:
    tmp = f"{path}.tmp.{os.getpid()}"
    with open(tmp, "w", newline="") as fh:
        fh.write(payload)
    os.replace(tmp, path)


TRACE_COLUMNS = ("k", "x", "xstar", "theta", "dist_to_ref", "gap_to_ref", "fejer_residual")


def emit_trace(trace: DescentTrace, fmt: str, path: str) -> str:
    """Write a trace as CSV (plot-ready columns) or JSON; atomic replace."""
    if fmt == "csv":
        import io
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(TRACE_COLUMNS)
        for r in trace.rows:
            writer.writerow([r.k, _fmt_point(r.x), _fmt_point(r.xstar), _fmt(r.theta),
                             _fmt(r.dist), _fmt(r.gap), _fmt(r.fejer_residual)])
        _atomic_write(path, buf.getvalue())
        return path
    if fmt == "json":
        payload = {
            "schema": SCHEMA_VERSION,
            "termination": trace.termination,
            "reference": list(trace.reference.coords) if trace.reference else None,
            "lipschitz": trace.lipschitz,
            "rows": [
                {
                    "k": r.k,
                    "x": list(r.x.coords),
                    "xstar": list(r.xstar.coords) if r.xstar else None,
                    "theta": r.theta,
                    "dist_to_ref": r.dist,
                    "gap_to_ref": r.gap,
                    "fejer_residual": r.fejer_residual,
                }
                for r in trace.rows
            ],
        }
        _atomic_write(path, json.dumps(payload, indent=1))
        return path
    raise ValueError(f"unknown trace format {fmt!r}; expected csv or json")


def load_trace_json(path: str) -> DescentTrace:
    with open(path) as fh:
        payload = json.load(fh)
    rows = tuple(
        TraceRow(
            k=r["k"],
            x=Point(tuple(r["x"])),
            xstar=Point(tuple(r["xstar"])) if r["xstar"] is not None else None,
            theta=r["theta"],
            dist=r["dist_to_ref"],
            gap=r["gap_to_ref"],
            fejer_residual=r["fejer_residual"],
        )
        for r in payload["rows"]
    )
    ref = Point(tuple(payload["reference"])) if payload["reference"] else None
    return DescentTrace(rows, payload["termination"], reference=ref,
                        lipschitz=payload["lipschitz"])


def emit_report(report: RunReport, path: str) -> str:
    _atomic_write(path, json.dumps(report.to_dict(), indent=1))
    return path
