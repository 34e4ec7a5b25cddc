"""Command-line interface.

Subcommands: ingest, simulate, classify, evaluate, sweep, sensitivity,
verify-theorem. Every run writes its outputs plus a manifest.json (command,
parameters, rng seed, input and output sha256 digests, duration) under the
directory given by --out and touches nothing outside it.

Exit codes: 0 success, 1 bad arguments or parameter combinations,
2 missing or unusable input data, 3 internal failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .errors import CitegrowError, IngestError, ValidationError
from .graph import GrowthGraph, SeedNetwork, YearSchedule, load_graph
from .ingest import IngestConfig, build_seed_and_schedule, parse_citations, parse_papers
from .models import DEGREE_MODES, ModelKind, make_model, parse_config_options
from .simulate import init_from_seed, run_simulation
from .trajectory import (
    CATEGORY_ORDER,
    CategoryDistribution,
    ClassifierParams,
    category_distribution,
    classify_graph,
    write_classification_csv,
)
from .evaluation import evaluate_model, model_grid, sensitivity, sweep
from .theory import verify_theorem

__all__ = ["main", "dispatch"]

_MODEL_CHOICES = [m.value for m in ModelKind]
_REGIME_CHOICES = ["const", "linear", "sqrt", "log"]


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


def dispatch(argv) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse uses 2 for usage errors; map onto this tool's contract
        code = exc.code if exc.code is not None else 0
        return 1 if code == 2 else int(code)
    started = time.perf_counter()
    try:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        outputs, params, inputs = args.handler(args, out_dir)
        _write_manifest(out_dir, args, list(argv), params, inputs, outputs, started)
        return 0
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (IngestError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CitegrowError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except Exception as exc:  # noqa: BLE001 - report, then signal internal failure
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


# -- manifest ------------------------------------------------------------------

def _sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _write_manifest(out_dir: Path, args, argv: list, params: dict, inputs: list,
                    outputs: list, started: float) -> None:
    manifest = {
        "command": args.command,
        "argv": argv,
        "parameters": params,
        "inputs": {str(p): _sha256_file(p) for p in inputs},
        "outputs": {name: _sha256_file(out_dir / name) for name in outputs},
        "duration_seconds": round(time.perf_counter() - started, 3),
        "created_utc": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }
    path = out_dir / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n",
                    encoding="utf-8")


# -- shared flag groups --------------------------------------------------------

def _add_out(sp) -> None:
    sp.add_argument("--out", required=True, help="output directory (created if missing)")


def _add_window(sp, seed_years: bool = True, classify_years: bool = True) -> None:
    if seed_years:
        sp.add_argument("--seed-start", type=int, default=1960)
        sp.add_argument("--seed-end", type=int, default=1975)
    if classify_years:
        sp.add_argument("--cutoff", type=int, default=2000,
                        help="last publication year that gets classified")
        sp.add_argument("--horizon", type=int, default=2010,
                        help="last year whose citations count")


def _add_sim_inputs(sp) -> None:
    sp.add_argument("--papers", help="papers TSV (id<TAB>year)")
    sp.add_argument("--citations", help="citations TSV (citing<TAB>cited)")
    sp.add_argument("--seed-graph", help="seed network dump (alternative to --papers)")
    sp.add_argument("--schedule", help="schedule TSV (required with --seed-graph)")


def _add_model_flags(sp, listy: bool = False) -> None:
    sp.add_argument("--model", choices=_MODEL_CHOICES)
    sp.add_argument("--config", help="model config file; explicit flags override it")
    sp.add_argument("--alpha", type=float)
    sp.add_argument("--xm", type=float)
    sp.add_argument("--dim", type=int)
    if listy:
        sp.add_argument("--gamma-regime", help="comma list of regimes to sweep")
        sp.add_argument("--gamma-const", type=float)
        sp.add_argument("--sigma", help="comma list of sigma values")
        sp.add_argument("--rho", help="comma list of rho values")
        sp.add_argument("--shift-unit", choices=["months", "nodes"])
        sp.add_argument("--shift-every", help="comma list of shift intervals")
    else:
        sp.add_argument("--gamma-regime", choices=_REGIME_CHOICES)
        sp.add_argument("--gamma-const", type=float)
        sp.add_argument("--sigma", type=float)
        sp.add_argument("--rho", type=float)
        sp.add_argument("--shift-unit", choices=["months", "nodes"])
        sp.add_argument("--shift-every", type=float)
    sp.add_argument("--degree-mode", choices=list(DEGREE_MODES))


def _add_classifier_flags(sp) -> None:
    sp.add_argument("--activation", type=int, default=5,
                    help="activation period in years")
    sp.add_argument("--peak-threshold", type=float, default=0.75)
    sp.add_argument("--min-history", type=int, default=10)


# -- model resolution ----------------------------------------------------------

_SCALAR_MODEL_KEYS = ("alpha", "xm", "dim", "gamma_regime", "gamma_const",
                      "sigma", "rho", "shift_unit", "shift_every", "degree_mode")


def _collect_model_options(args) -> tuple[str, dict, list]:
    """Kind plus flat options from --config overlaid with explicit flags.
    Returns (kind, options, input files consumed)."""
    inputs = []
    kind = None
    options: dict = {}
    if args.config:
        cfg = Path(args.config)
        if not cfg.exists():
            raise IngestError(f"config file not found: {cfg}")
        kind, options = parse_config_options(cfg.read_text(encoding="utf-8"))
        inputs.append(cfg)
    if args.model:
        kind = args.model
    if kind is None:
        raise ValidationError("a model is required: pass --model or --config")
    for key in _SCALAR_MODEL_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            options[key] = value
    return kind, options, inputs


def _load_sim_inputs(args) -> tuple[SeedNetwork, YearSchedule, list]:
    """Seed network and schedule from either input style."""
    if args.seed_graph:
        if not args.schedule:
            raise ValidationError("--seed-graph needs --schedule")
        if args.papers or args.citations:
            raise ValidationError("pass either --seed-graph/--schedule or --papers/--citations")
        gpath, spath = Path(args.seed_graph), Path(args.schedule)
        for p in (gpath, spath):
            if not p.exists():
                raise IngestError(f"input file not found: {p}")
        g = load_graph(gpath)
        seed = SeedNetwork(
            nodes=tuple((i, int(g.years[i])) for i in range(g.n_nodes)),
            edges=tuple((int(u), int(v)) for u, v in g.edges),
        )
        return seed, YearSchedule.from_tsv(spath), [gpath, spath]
    if not (args.papers and args.citations):
        raise ValidationError("pass --papers with --citations, or --seed-graph with --schedule")
    ppath, cpath = Path(args.papers), Path(args.citations)
    config = IngestConfig(seed_start=args.seed_start, seed_end=args.seed_end,
                          cutoff=args.cutoff, horizon=args.horizon)
    papers = parse_papers(ppath)
    citations = parse_citations(cpath, {r.id for r in papers.records})
    result = build_seed_and_schedule(papers.records, citations.edges, config)
    return result.seed, result.schedule, [ppath, cpath]


def _seed_network_to_graph(seed: SeedNetwork) -> GrowthGraph:
    """Bare seed as a dumpable graph: unit fitness, no locations."""
    n = seed.n_nodes
    edges = np.array(seed.edges, dtype=np.int64).reshape(-1, 2)
    out_deg = (np.bincount(edges[:, 0], minlength=n)
               if seed.n_edges else np.zeros(n, dtype=np.int64))
    return GrowthGraph(
        years=seed.years,
        sub_years=np.zeros(n), fitness=np.ones(n),
        locations=np.zeros((n, 0)), out_degrees=out_deg,
        edges=edges, n_seed=n,
    )


def _parse_value_list(text: str, conv) -> list:
    try:
        return [conv(part) for part in str(text).split(",") if part.strip()]
    except ValueError:
        raise ValidationError(f"bad value list {text!r}") from None


def _parse_int_range(text: str) -> list[int]:
    """'3:7' (inclusive) or '3,4,5'."""
    s = str(text)
    if ":" in s:
        parts = s.split(":")
        if len(parts) != 2:
            raise ValidationError(f"bad integer range {text!r}; expected lo:hi")
        lo, hi = (int(p) for p in parts)
        if hi < lo:
            raise ValidationError(f"empty range {text!r}")
        return list(range(lo, hi + 1))
    return _parse_value_list(s, int)


def _parse_float_range(text: str) -> list[float]:
    """'0.45:0.95:0.05' (inclusive, fixed step) or a comma list."""
    s = str(text)
    if ":" in s:
        parts = s.split(":")
        if len(parts) != 3:
            raise ValidationError(f"bad float range {text!r}; expected lo:hi:step")
        lo, hi, step = (float(p) for p in parts)
        if step <= 0 or hi < lo:
            raise ValidationError(f"empty range {text!r}")
        values = []
        k = 0
        while True:
            v = round(lo + k * step, 10)
            if v > hi + 1e-9:
                break
            values.append(v)
            k += 1
        return values
    return _parse_value_list(s, float)


# -- subcommand handlers ---------------------------------------------------------

def _cmd_ingest(args, out_dir: Path):
    ppath, cpath = Path(args.papers), Path(args.citations)
    config = IngestConfig(seed_start=args.seed_start, seed_end=args.seed_end,
                          cutoff=args.cutoff, horizon=args.horizon)
    papers = parse_papers(ppath)
    citations = parse_citations(cpath, {r.id for r in papers.records})
    result = build_seed_and_schedule(papers.records, citations.edges, config)

    _seed_network_to_graph(result.seed).dump(out_dir / "seed.graph")
    result.schedule.to_tsv(out_dir / "schedule.tsv")
    with open(out_dir / "id_map.tsv", "w", encoding="utf-8") as fh:
        for paper_id, idx in sorted(result.id_map.items(), key=lambda kv: kv[1]):
            fh.write(f"{paper_id}\t{idx}\n")
    report = {
        "papers_parsed": len(papers.records),
        "papers_malformed": papers.malformed,
        "citations_kept": len(citations.edges),
        "citations_malformed": citations.malformed,
        "citations_unknown": citations.dropped_unknown,
        "citations_self": citations.dropped_self,
        "citations_duplicate": citations.duplicates,
        **result.counters,
    }
    (out_dir / "ingest_report.json").write_text(
        json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    print(f"ingest: seed {result.seed.n_nodes} nodes / {result.seed.n_edges} edges, "
          f"schedule {result.schedule.total_nodes} nodes / {result.schedule.total_edges} edges")
    params = {"seed_start": args.seed_start, "seed_end": args.seed_end,
              "cutoff": args.cutoff, "horizon": args.horizon}
    return (["seed.graph", "schedule.tsv", "id_map.tsv", "ingest_report.json"],
            params, [ppath, cpath])


def _cmd_simulate(args, out_dir: Path):
    kind, options, inputs = _collect_model_options(args)
    model = make_model(kind, **options)
    seed_net, schedule, data_inputs = _load_sim_inputs(args)
    inputs = data_inputs + inputs

    seed_graph = init_from_seed(seed_net.nodes, seed_net.edges, model, args.seed)
    grown = run_simulation(seed_graph, schedule, model, args.seed)
    grown.dump(out_dir / "graph.txt")
    model.to_config_file(out_dir / "model.cfg")
    print(f"simulate: {grown.n_nodes} nodes, {grown.n_edges} edges "
          f"(fallback fills {grown.fallback_fills}, subspace shifts {grown.subspace_shifts})")
    params = {
        "model": model.kind.value,
        "config": model.to_config_text(),
        "rng_seed": args.seed,
        "fallback_fills": grown.fallback_fills,
        "subspace_shifts": grown.subspace_shifts,
    }
    return ["graph.txt", "model.cfg"], params, inputs


def _cmd_classify(args, out_dir: Path):
    gpath = Path(args.graph)
    if not gpath.exists():
        raise IngestError(f"graph file not found: {gpath}")
    graph = load_graph(gpath, seed_end=args.seed_end)
    params = ClassifierParams(activation_period=args.activation,
                              peak_threshold=args.peak_threshold,
                              min_history_years=args.min_history)
    rows = classify_graph(graph, args.cutoff, args.horizon, params)
    write_classification_csv(rows, out_dir / "classification.csv")
    dist = category_distribution(graph, args.cutoff, args.horizon, params)
    dist.to_json(out_dir / "distribution.json")
    print("classify: " + ", ".join(
        f"{cat.code}={p:.4f}"
        for cat, p in zip(CATEGORY_ORDER, dist.proportions)))
    run_params = {"cutoff": args.cutoff, "horizon": args.horizon,
                  "activation": args.activation, "peak_threshold": args.peak_threshold,
                  "min_history": args.min_history, "seed_end": args.seed_end}
    return ["classification.csv", "distribution.json"], run_params, [gpath]


def _cmd_evaluate(args, out_dir: Path):
    dpath, rpath = Path(args.distribution), Path(args.reference)
    for p in (dpath, rpath):
        if not p.exists():
            raise IngestError(f"distribution file not found: {p}")
    dist = CategoryDistribution.from_json(dpath)
    ref = CategoryDistribution.from_json(rpath)
    report = evaluate_model(dist, ref, label=args.label)
    report.to_json(out_dir / "evaluation.json")
    print(f"evaluate: {args.label} jsd2={report.jsd2:.6f}")
    return (["evaluation.json"],
            {"label": args.label}, [dpath, rpath])


def _cmd_sweep(args, out_dir: Path):
    kind, options, cfg_inputs = _collect_model_options(args)
    axes: dict[str, list] = {}
    for name, conv in (("gamma_regime", str), ("sigma", float),
                       ("rho", float), ("shift_every", float),
                       ("alpha", float), ("xm", float)):
        raw = options.pop(name, None)
        if raw is None:
            continue
        values = _parse_value_list(raw, conv) if isinstance(raw, str) else [raw]
        if name == "gamma_regime":
            for v in values:
                if v not in _REGIME_CHOICES:
                    raise ValidationError(f"unknown gamma regime {v!r}")
        if len(values) == 1:
            options[name] = values[0]
        else:
            axes[name] = values
    points = model_grid(kind, axes, options)

    seed_net, schedule, data_inputs = _load_sim_inputs(args)
    rpath = Path(args.reference)
    if not rpath.exists():
        raise IngestError(f"reference file not found: {rpath}")
    reference = CategoryDistribution.from_json(rpath)
    cparams = ClassifierParams(activation_period=args.activation,
                               peak_threshold=args.peak_threshold,
                               min_history_years=args.min_history)
    result = sweep(points, seed_net, schedule, reference,
                   cutoff_year=args.cutoff, horizon_year=args.horizon,
                   classifier_params=cparams, runs_per_point=args.runs,
                   rng_seed=args.seed, jobs=args.jobs)
    result.to_csv(out_dir / "sweep.csv")
    (out_dir / "sweep_summary.json").write_text(
        json.dumps(result.summary_json_dict(), indent=2, sort_keys=True) + "\n",
        encoding="utf-8")
    best = result.best
    print(f"sweep: {len(result.rows)} points, best {best.params} jsd2={best.jsd2:.6f}")
    params = {"model": kind, "axes": {k: list(map(str, v)) for k, v in axes.items()},
              "runs_per_point": args.runs, "rng_seed": args.seed,
              "cutoff": args.cutoff, "horizon": args.horizon}
    return (["sweep.csv", "sweep_summary.json"], params,
            data_inputs + cfg_inputs + [rpath])


def _cmd_sensitivity(args, out_dir: Path):
    gpath = Path(args.graph)
    if not gpath.exists():
        raise IngestError(f"graph file not found: {gpath}")
    graph = load_graph(gpath, seed_end=args.seed_end)
    defaults = ClassifierParams(activation_period=args.default_activation,
                                peak_threshold=args.default_threshold,
                                min_history_years=args.min_history)
    activations = _parse_int_range(args.activation)
    thresholds = _parse_float_range(args.peak_threshold)
    result = sensitivity(graph, args.cutoff, args.horizon,
                         activations, thresholds, defaults)
    result.to_csv(out_dir / "sensitivity.csv")
    print(f"sensitivity: {len(result.rows)} rows over "
          f"{len(activations)}x{len(thresholds)} grid")
    params = {"cutoff": args.cutoff, "horizon": args.horizon,
              "activation_values": activations, "threshold_values": thresholds,
              "default_activation": args.default_activation,
              "default_threshold": args.default_threshold,
              "min_history": args.min_history, "seed_end": args.seed_end}
    return ["sensitivity.csv"], params, [gpath]


def _cmd_verify_theorem(args, out_dir: Path):
    report = verify_theorem(args.model, trials=args.trials,
                            size_range=(args.size_min, args.size_max),
                            rng_seed=args.seed)
    report.to_json(out_dir / "theorem_report.json")
    status = "pass" if report.passed else "FAIL"
    print(f"verify-theorem: {report.model} {status} "
          f"(trials {report.trials}, max deviation {report.max_deviation:.3e}, "
          f"violations {report.violations})")
    params = {"model": args.model, "trials": args.trials,
              "size_min": args.size_min, "size_max": args.size_max,
              "rng_seed": args.seed}
    return ["theorem_report.json"], params, []


# -- parser ----------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="citegrow",
        description="Grow synthetic citation networks and score them against "
                    "real trajectory-category distributions.")
    subs = parser.add_subparsers(dest="command", required=True)

    sp = subs.add_parser("ingest", help="parse TSVs into a seed network and schedule")
    sp.add_argument("--papers", required=True)
    sp.add_argument("--citations", required=True)
    _add_window(sp)
    _add_out(sp)
    sp.set_defaults(handler=_cmd_ingest)

    sp = subs.add_parser("simulate", help="grow one synthetic network")
    _add_sim_inputs(sp)
    _add_model_flags(sp)
    _add_window(sp, classify_years=True)
    sp.add_argument("--seed", type=int, default=0, help="rng seed")
    _add_out(sp)
    sp.set_defaults(handler=_cmd_simulate)

    sp = subs.add_parser("classify", help="classify trajectories of a graph dump")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--seed-end", type=int, default=1975,
                    help="last seed year; seed nodes are not classified")
    sp.add_argument("--cutoff", type=int, default=2000)
    sp.add_argument("--horizon", type=int, default=2010)
    _add_classifier_flags(sp)
    _add_out(sp)
    sp.set_defaults(handler=_cmd_classify)

    sp = subs.add_parser("evaluate", help="score a distribution against a reference")
    sp.add_argument("--distribution", required=True)
    sp.add_argument("--reference", required=True)
    sp.add_argument("--label", default="model")
    _add_out(sp)
    sp.set_defaults(handler=_cmd_evaluate)

    sp = subs.add_parser("sweep", help="score a parameter grid against a reference")
    _add_sim_inputs(sp)
    _add_model_flags(sp, listy=True)
    _add_window(sp)
    sp.add_argument("--reference", required=True)
    _add_classifier_flags(sp)
    sp.add_argument("--runs", type=int, default=3, help="runs per grid point")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--seed", type=int, default=0)
    _add_out(sp)
    sp.set_defaults(handler=_cmd_sweep)

    sp = subs.add_parser("sensitivity", help="classifier robustness grid")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--seed-end", type=int, default=1975)
    sp.add_argument("--cutoff", type=int, default=2000)
    sp.add_argument("--horizon", type=int, default=2010)
    sp.add_argument("--activation", default="3:7",
                    help="integer range lo:hi or comma list")
    sp.add_argument("--peak-threshold", default="0.45:0.95:0.05",
                    help="float range lo:hi:step or comma list")
    sp.add_argument("--default-activation", type=int, default=5)
    sp.add_argument("--default-threshold", type=float, default=0.75)
    sp.add_argument("--min-history", type=int, default=10)
    _add_out(sp)
    sp.set_defaults(handler=_cmd_sensitivity)

    sp = subs.add_parser("verify-theorem", help="check attachment dynamics by enumeration")
    sp.add_argument("--model", required=True, choices=["ba", "af", "mf"])
    sp.add_argument("--trials", type=int, default=50)
    sp.add_argument("--size-min", type=int, default=2)
    sp.add_argument("--size-max", type=int, default=30)
    sp.add_argument("--seed", type=int, default=0)
    _add_out(sp)
    sp.set_defaults(handler=_cmd_verify_theorem)

    return parser


if __name__ == "__main__":
    main()
