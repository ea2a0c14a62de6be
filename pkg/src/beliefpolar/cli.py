"""Command-line front end.

    beliefpolar simulate scenario.json -o out/
    beliefpolar check scenario.json
    beliefpolar analyze scenario.json
    beliefpolar sweep scenario.json --c 0.1 0.5 --steps 50 100 -o sweep/

Exit codes: 0 success, 1 check failure, 2 invalid scenario, 3 I/O error.
"""
from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import logging
import os
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import analysis, verify
from .errors import BeliefPolarError
from .graphs import classify, shortest_path
from .model import SimulationTrace, UpdateKind, run
from .plotting import beliefs_figure, polarization_figure
from .polarization import polarization_series
from .scenario import Scenario, ScenarioError, parse_scenario

log = logging.getLogger("beliefpolar")

EXIT_OK, EXIT_CHECK_FAILED, EXIT_INVALID, EXIT_IO = 0, 1, 2, 3
DEFAULT_EPS = 1e-2


def write_atomic(path: Path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _csv_text(header: list[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(x) if isinstance(x, float) else x for x in row])
    return buf.getvalue()


def beliefs_csv(trace: SimulationTrace) -> str:
    header = ["t"] + [f"b{i}" for i in range(trace.n)]
    return _csv_text(header, ([t, *map(float, row)] for t, row in enumerate(trace.beliefs)))


def polarization_csv(rho: list[float]) -> str:
    return _csv_text(["t", "rho"], ([t, float(r)] for t, r in enumerate(rho)))


def simulate(s: Scenario) -> SimulationTrace:
    return run(s.initial_beliefs(), s.influence_graph(), s.update, s.steps, s.stop_gap)


def analyze(s: Scenario, trace: SimulationTrace | None = None, rho: list[float] | None = None) -> dict:
    """Structural report, predictions and run summary for a scenario."""
    B0 = s.initial_beliefs()
    I = s.influence_graph()
    trace = trace if trace is not None else simulate(s)
    if rho is None:
        rho = polarization_series(trace, s.polarization.bin_spec(), s.polarization.params())
    report = classify(I)
    ext = analysis.extremes(trace)
    f_min = analysis.min_confirmation_factor(B0) if s.update is UpdateKind.CONFIRMATION_BIAS else None

    bound = None
    if report.clique_constant is not None:
        b = analysis.clique_convergence_bound(report.clique_constant, B0, s.stop_gap or DEFAULT_EPS)
        eps_c = analysis.epsilon_contraction(I, ext, f_min if f_min is not None else 1.0)
        bound = {**b.to_dict(), "epsilon_contraction": eps_c, "f_min": f_min}

    # both rest on the linear (regular) update; neither applies under bias
    limit = predicted = None
    if s.update is UpdateKind.REGULAR:
        limit = analysis.limit_beliefs(I, B0).to_dict()
        predicted = analysis.predict_consensus(I, B0)

    return {
        "scenario": s.to_dict(),
        "graph": report.to_dict(),
        "scc": analysis.scc_condense(I).to_dict(),
        "predicted_consensus": predicted,
        "limit": limit,
        "convergence_bound": bound,
        "f_min": f_min,
        "run": {
            "steps_taken": trace.steps_taken,
            "stop_reason": trace.stop_reason.value,
            "U_est": ext.U_est,
            "L_est": ext.L_est,
            "final_gap": float(ext.gaps()[-1]),
            "final_polarization": float(rho[-1]),
        },
    }


def run_scenario(s: Scenario, out_dir: str | os.PathLike) -> dict[str, str]:
    """Simulate ``s`` and write CSV, JSON and SVG artifacts into ``out_dir``.

    Returns a manifest mapping artifact names to paths.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    trace = simulate(s)
    rho = polarization_series(trace, s.polarization.bin_spec(), s.polarization.params())
    report = analyze(s, trace, rho)
    title = f"{s.influence_kind} influence, {s.beliefs_kind} beliefs, {s.update.value} update, n={s.n}"

    files = {
        "beliefs.csv": beliefs_csv(trace),
        "polarization.csv": polarization_csv(rho),
        "analysis.json": json.dumps(report, indent=2) + "\n",
        "beliefs.svg": beliefs_figure(trace.beliefs, title),
        "polarization.svg": polarization_figure(np.asarray(rho), title),
    }
    manifest = {}
    for name, text in files.items():
        path = out / name
        write_atomic(path, text)
        manifest[name] = str(path)
    return manifest


def run_checks(s: Scenario) -> list[verify.CheckReport]:
    """Run every checker whose hypotheses hold for the scenario."""
    I = s.influence_graph()
    B0 = s.initial_beliefs()
    trace = simulate(s)
    report = classify(I)
    regular = s.update is UpdateKind.REGULAR
    results = []
    if len(trace) >= 2:
        results.append(verify.check_belief_bounds(trace))
    if report.clique_constant is not None:
        results.append(verify.check_order_preservation(trace, report))
        if regular:
            results.append(verify.check_geometric_gap(trace, report.clique_constant))
    if report.balanced and regular:
        results.append(verify.check_conservation(trace, report))
    if report.strongly_connected and I.n > 1:
        # one shortest path from the initial minimum to every other agent;
        # reported as a single result, the first failing path if any
        m = int(np.argmin(B0.values))
        paths = [shortest_path(I, m, j) for j in range(I.n) if j != m]
        checked = [verify.check_path_bound(trace, I, p, 0) for p in paths if p.size + 1 < len(trace)]
        if checked:
            results.append(next((r for r in checked if not r.passed), checked[0]))
    if not regular and np.all((B0.values == 0) | (B0.values == 1)):
        results.append(verify.check_cb_fixedpoint(B0, I))
    return results


def _sweep_one(args) -> dict:
    s, out_dir = args
    manifest = run_scenario(s, out_dir)
    with open(manifest["analysis.json"], encoding="utf-8") as fh:
        summary = json.load(fh)["run"]
    return {"c": s.c, "steps": s.steps, **summary, "dir": str(out_dir)}


def sweep(s: Scenario, cs: list[float], steps: list[int], out_dir: Path, jobs: int = 1) -> list[dict]:
    if s.influence_kind not in ("clique", "circular"):
        raise ScenarioError("influence.kind", "sweeping c needs a clique or circular influence graph")
    tasks = []
    for c, st in itertools.product(cs, steps):
        if not 0 < c <= 1:
            raise ScenarioError("influence.c", f"influence constant must be in (0, 1], got {c!r}")
        if st < 0:
            raise ScenarioError("steps", "must be non-negative")
        tasks.append((s.with_overrides(c=float(c), steps=int(st)), out_dir / f"c={c}_steps={st}"))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_sweep_one, tasks))
    else:
        rows = [_sweep_one(t) for t in tasks]
    out_dir.mkdir(parents=True, exist_ok=True)
    keys = ["c", "steps", "steps_taken", "stop_reason", "final_gap", "final_polarization", "dir"]
    write_atomic(out_dir / "sweep.csv", _csv_text(keys, ([r[k] for k in keys] for r in rows)))
    return rows


def _load(path: str) -> Scenario:
    with open(path, encoding="utf-8") as fh:
        return parse_scenario(fh.read())


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="beliefpolar", description=__doc__.split("\n\n")[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("simulate", help="run a scenario and write CSV/JSON/SVG artifacts")
    sp.add_argument("scenario")
    sp.add_argument("-o", "--out", required=True, help="output directory")

    sp = sub.add_parser("check", help="run all applicable theorem checkers")
    sp.add_argument("scenario")

    sp = sub.add_parser("analyze", help="print the analysis report as JSON")
    sp.add_argument("scenario")

    sp = sub.add_parser("sweep", help="grid over influence constant and step count")
    sp.add_argument("scenario")
    sp.add_argument("--c", type=float, nargs="+", required=True)
    sp.add_argument("--steps", type=int, nargs="+", required=True)
    sp.add_argument("-o", "--out", required=True)
    sp.add_argument("-j", "--jobs", type=int, default=1)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        s = _load(args.scenario)
        if args.command == "simulate":
            for name, path in run_scenario(s, args.out).items():
                print(f"{name}\t{path}")
        elif args.command == "analyze":
            print(json.dumps(analyze(s), indent=2))
        elif args.command == "check":
            results = run_checks(s)
            for r in results:
                print(r.summary())
            if not all(results):
                return EXIT_CHECK_FAILED
        elif args.command == "sweep":
            for row in sweep(s, args.c, args.steps, Path(args.out), args.jobs):
                log.info("c=%s steps=%s gap=%s", row["c"], row["steps"], row["final_gap"])
            print(Path(args.out) / "sweep.csv")
    except ScenarioError as e:
        print(f"invalid scenario: {e}", file=sys.stderr)
        return EXIT_INVALID
    except BeliefPolarError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as e:
        print(f"I/O error: {e}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
