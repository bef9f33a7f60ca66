"""Command-line entry point: ``tempembed {ingest,synth,embed,evaluate,sweep-dim}``.

Every option can also come from a ``--config`` file of ``key = value`` lines
(keys are option names without the leading dashes); command-line flags win.

Seeds: snapshot ``t`` is embedded with ``seed + t``; repeat ``r`` of the
evaluation splits with ``SeedSequence([seed, r])``.  BCGD initializes from
``seed``.  Outputs are pure functions of inputs, flags and seed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from dataclasses import asdict, replace
from pathlib import Path

from . import embed as embed_mod
from . import graph as graph_mod
from . import matrix_io
from .embed import LineConfig, MatrixConfig, SkipgramConfig
from .linkpred import EvalConfig, ModelHyper, compare_reports, evaluate
from .linkpred.protocol import MODEL_KINDS
from .transform import SMOOTHING_KINDS, GdConfig

log = logging.getLogger("tempembed")

CSV_HEADER = ["dataset", "model", "embedder", "smoothing", "dim", "repeat", "selected",
              "auc", "auprc", "ndcg_at_p"]


class ConfigError(ValueError):
    pass


def _csv_list(text: str, cast=str) -> list:
    return [cast(x.strip()) for x in str(text).split(",") if x.strip()]


def _add_input(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", help="edge list with 'u v t' lines")
    p.add_argument("--snapshots", type=int, help="equal-width bin count K")
    p.add_argument("--boundaries", help="comma-separated interior time cut points")
    p.add_argument("--pre-binned", action="store_true", help="third column is the snapshot index")
    p.add_argument("--weighted", action="store_true",
                   help="tsvd/pca factor the interaction-count adjacency")
    p.add_argument("--synth", help="synthetic graph instead of --input, e.g. "
                                   "'nodes=200,communities=4,snapshots=8,p_in=0.2,p_out=0.01,churn=0.05'")


def _add_model(p: argparse.ArgumentParser, dims: bool = False) -> None:
    p.add_argument("--model", default="RET,HomoLT,HeterLT,StaticBaseline",
                   help=f"comma list from {','.join(MODEL_KINDS)}")
    p.add_argument("--embedder", default="tsvd", help=f"comma list from {','.join(embed_mod.EMBEDDERS)}")
    if dims:
        p.add_argument("--dims", default="32,64,128", help="comma list of latent dimensions")
    else:
        p.add_argument("--dim", type=int, default=64)
    p.add_argument("--smoothing", default="wct", choices=SMOOTHING_KINDS)
    p.add_argument("--theta", type=float, help="fix wct theta instead of tuning it")
    p.add_argument("--alpha", type=float, help="fix the retrofit alpha instead of tuning it")
    p.add_argument("--lambda", dest="lam", metavar="LAMBDA", type=float, help="fix the BCGD lambda instead of tuning it")
    p.add_argument("--repeats", type=int, default=10)
    p.add_argument("--ndcg-p", type=int, default=50)
    p.add_argument("--l2", type=float, default=1.0, help="logistic regression L2 strength")
    p.add_argument("--exclude-historical-negatives", action="store_true")
    p.add_argument("--retrofit-sweeps", type=int, default=20)
    p.add_argument("--gd-iterations", type=int, default=10_000)
    p.add_argument("--gd-learning-rate", type=float, default=1e-3)
    p.add_argument("--bcgd-iterations", type=int, default=500)
    _add_embedder_tuning(p)


def _add_embedder_tuning(p: argparse.ArgumentParser) -> None:
    p.add_argument("--line-samples", type=int, default=LineConfig.samples_per_edge,
                   help="LINE edge samples per distinct edge")
    p.add_argument("--line-order", default="first", choices=("first", "second"))
    p.add_argument("--window", type=int, default=SkipgramConfig.window)
    p.add_argument("--walks-per-node", type=int, default=SkipgramConfig.walks_per_node)
    p.add_argument("--walk-length", type=int, default=SkipgramConfig.walk_length)
    p.add_argument("--p", dest="p", type=float, help="node2vec return parameter")
    p.add_argument("--q", dest="q", type=float, help="node2vec in-out parameter")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tempembed", description="Dynamic network embeddings and temporal link prediction.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse an edge list and print dataset statistics")
    _add_input(p)
    p.add_argument("--out", help="also write the statistics as JSON")

    p = sub.add_parser("synth", help="write a drifting-SBM edge list")
    p.add_argument("--nodes", type=int, default=200)
    p.add_argument("--communities", type=int, default=4)
    p.add_argument("--snapshots", type=int, default=8)
    p.add_argument("--p-in", type=float, default=0.2)
    p.add_argument("--p-out", type=float, default=0.01)
    p.add_argument("--churn", type=float, default=0.05)
    p.add_argument("--out", required=True)

    p = sub.add_parser("embed", help="embed every snapshot with a static embedder")
    _add_input(p)
    p.add_argument("--embedder", default="tsvd")
    p.add_argument("--dim", type=int, default=64)
    _add_embedder_tuning(p)
    p.add_argument("--out", required=True, help="output directory")

    p = sub.add_parser("evaluate", help="temporal link prediction on the last snapshot")
    _add_input(p)
    _add_model(p)
    p.add_argument("--out", required=True, help="output directory")

    p = sub.add_parser("sweep-dim", help="evaluate across latent dimensions")
    _add_input(p)
    _add_model(p, dims=True)
    p.add_argument("--out", required=True, help="output directory")

    for action in sub.choices.values():
        action.add_argument("--seed", type=int, default=0, help="master seed")
        action.add_argument("--config", help="key = value file; flags override it")
    return parser


def _read_config(path: str) -> dict[str, str]:
    values = {}
    with open(path, encoding="utf-8") as fh:
        for n, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{n}: expected 'key = value'")
            k, v = (s.strip() for s in line.split("=", 1))
            values[k.replace("-", "_")] = v
    return values


def _apply_config(parser, sub_parser, argv, args):
    """Re-parse with config-file values installed as defaults."""
    values = _read_config(args.config)
    dests = {a.dest: a for a in sub_parser._actions}
    dests.setdefault("lambda", dests.get("lam"))
    converted = {}
    for k, raw in values.items():
        action = dests.get(k)
        if action is None or k in ("config", "help"):
            raise ConfigError(f"unknown config key {k!r}")
        if isinstance(action, argparse._StoreTrueAction):
            val = raw.lower() in ("1", "true", "yes", "on")
        elif action.type is not None:
            try:
                val = action.type(raw)
            except ValueError:
                raise ConfigError(f"config key {k!r}: cannot parse {raw!r}") from None
        else:
            val = raw
        if action.choices is not None and val not in action.choices:
            raise ConfigError(f"config key {k!r}: {val!r} not in {sorted(action.choices)}")
        converted[action.dest] = val
    for action in sub_parser._actions:
        if action.dest in converted:
            action.required = False
    sub_parser.set_defaults(**converted)
    return parser.parse_args(argv)


def _snapshot_spec(args) -> graph_mod.SnapshotSpec:
    if args.pre_binned:
        return graph_mod.SnapshotSpec.pre_binned()
    if args.boundaries:
        return graph_mod.SnapshotSpec.explicit(_csv_list(args.boundaries, float))
    if args.snapshots is None:
        raise ConfigError("snapshots: give --snapshots K, --boundaries or --pre-binned")
    return graph_mod.SnapshotSpec.equal_width(args.snapshots)


_SYNTH_KEYS = {"nodes": int, "communities": int, "snapshots": int, "p_in": float,
               "p_out": float, "churn": float, "seed": int}


def _synth_params(text: str, seed: int) -> dict:
    params = {"nodes": 200, "communities": 4, "snapshots": 8, "p_in": 0.2, "p_out": 0.01,
              "churn": 0.05, "seed": seed}
    for item in _csv_list(text):
        if "=" not in item:
            raise ConfigError(f"synth: expected key=value, got {item!r}")
        k, v = (s.strip() for s in item.split("=", 1))
        if k not in _SYNTH_KEYS:
            raise ConfigError(f"synth: unknown key {k!r}")
        params[k] = _SYNTH_KEYS[k](v)
    return params


def _load_graph(args) -> tuple[graph_mod.TemporalGraph, str]:
    if args.synth:
        return graph_mod.synth_dynamic_sbm(**_synth_params(args.synth, args.seed)), "synthetic"
    if not args.input:
        raise ConfigError("input: give --input PATH or --synth SPEC")
    if not Path(args.input).exists():
        raise ConfigError(f"input: {args.input} does not exist")
    return graph_mod.read_edge_list(args.input, _snapshot_spec(args)), Path(args.input).stem


def _atomic_write(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def _manifest(args, extra: dict | None = None) -> str:
    # the output location is left out so runs in different directories compare equal
    record = {k: v for k, v in sorted(vars(args).items()) if k not in ("verbose", "out")}
    if extra:
        record.update(extra)
    return json.dumps(record, indent=2, sort_keys=True, default=str) + "\n"


def _check_positive(name: str, value, minimum=1):
    if value is not None and value < minimum:
        raise ConfigError(f"{name}: must be >= {minimum}, got {value}")


def cmd_ingest(args) -> int:
    g, name = _load_graph(args)
    stats = g.summary()
    print(f"{'dataset':<12}{'#nodes':>10}{'#edges':>12}{'interactions':>14}{'#snapshots':>12}")
    print(f"{name:<12}{stats['nodes']:>10}{stats['edges']:>12}{stats['interactions']:>14}"
          f"{stats['snapshots']:>12}")
    if args.out:
        _atomic_write(Path(args.out), json.dumps({"dataset": name, **stats}, indent=2) + "\n")
    return 0


def cmd_synth(args) -> int:
    g = graph_mod.synth_dynamic_sbm(args.nodes, args.communities, args.snapshots, args.p_in,
                                    args.p_out, args.churn, args.seed)
    out = Path(args.out)
    header = (f"# drifting SBM nodes={args.nodes} communities={args.communities} "
              f"snapshots={args.snapshots} p_in={args.p_in} p_out={args.p_out} "
              f"churn={args.churn} seed={args.seed}\n")
    _atomic_write(out, header + graph_mod.dump_edge_list(g))
    stats = g.summary()
    print(f"wrote {out}: {stats['nodes']} nodes, {stats['edges']} distinct edges, "
          f"{stats['interactions']} interactions, {stats['snapshots']} snapshots")
    return 0


def _embedder_config(args, embedder: str):
    if embedder in ("tsvd", "pca"):
        return MatrixConfig(weighted=args.weighted)
    if embedder == "line":
        return LineConfig(order=args.line_order, samples_per_edge=args.line_samples)
    if embedder in ("deepwalk", "node2vec"):
        default_pq = 1.0 if embedder == "deepwalk" else 0.5
        p = args.p if args.p is not None else default_pq
        q = args.q if args.q is not None else default_pq
        return SkipgramConfig(window=args.window, walks_per_node=args.walks_per_node,
                              walk_length=args.walk_length, p=p, q=q)
    return None


def cmd_embed(args) -> int:
    _check_positive("dim", args.dim)
    g, _ = _load_graph(args)
    if args.embedder not in embed_mod.EMBEDDERS:
        raise ConfigError(f"embedder: unknown {args.embedder!r}")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    cfg = _embedder_config(args, args.embedder)
    phis = embed_mod.embed_sequence(g, args.embedder, args.dim, args.seed, cfg)
    for t, phi in enumerate(phis):
        matrix_io.write_embedding(out / f"snapshot_{t:03d}.emb", phi)
    _atomic_write(out / "run-manifest.json", _manifest(args, {"files": len(phis)}))
    print(f"wrote {len(phis)} embeddings to {out}")
    return 0


def _validate_model_args(args) -> tuple[list[str], list[str]]:
    models = _csv_list(args.model)
    embedders = _csv_list(args.embedder)
    for m in models:
        if m not in MODEL_KINDS:
            raise ConfigError(f"model: unknown {m!r}; choose from {','.join(MODEL_KINDS)}")
    for e in embedders:
        if e not in embed_mod.EMBEDDERS:
            raise ConfigError(f"embedder: unknown {e!r}; choose from {','.join(embed_mod.EMBEDDERS)}")
    if not models or not embedders:
        raise ConfigError("model/embedder: at least one of each is required")
    _check_positive("repeats", args.repeats)
    _check_positive("ndcg-p", args.ndcg_p)
    _check_positive("retrofit-sweeps", args.retrofit_sweeps)
    _check_positive("gd-iterations", args.gd_iterations)
    if args.theta is not None and not 0 <= args.theta < 1:
        raise ConfigError(f"theta: must lie in [0, 1), got {args.theta}")
    if args.alpha is not None and not args.alpha > 0:
        raise ConfigError(f"alpha: must be positive, got {args.alpha}")
    if args.lam is not None and args.lam < 0:
        raise ConfigError(f"lambda: must be non-negative, got {args.lam}")
    return models, embedders


def _hyper(args, embedder: str) -> ModelHyper:
    h = ModelHyper(
        retrofit_sweeps=args.retrofit_sweeps,
        smoothing=args.smoothing,
        bcgd_iterations=args.bcgd_iterations,
        gd=GdConfig(iterations=args.gd_iterations, learning_rate=args.gd_learning_rate),
        embedder_config=_embedder_config(args, embedder),
    )
    if args.alpha is not None:
        h = replace(h, alphas=(args.alpha,))
    if args.theta is not None:
        h = replace(h, thetas=(args.theta,))
    if args.lam is not None:
        h = replace(h, lambdas=(args.lam,))
    return h


def _fmt(x: float) -> str:
    return format(x, ".10f")


def _run_matrix(args, g, dataset: str, dims: list[int]):
    models, embedders = _validate_model_args(args)
    for d in dims:
        _check_positive("dim", d)
        if d > g.vertex_count:
            raise ConfigError(f"dim: {d} exceeds the vertex count {g.vertex_count}")
    cfg = EvalConfig(repeats=args.repeats, ndcg_p=args.ndcg_p, seed=args.seed, l2=args.l2,
                     exclude_historical_negatives=args.exclude_historical_negatives)
    reports = []
    for d in dims:
        for m in models:
            cells = ["-"] if m == "BCGD" else embedders
            for e in cells:
                log.info("evaluating %s(%s) d=%d", m, e, d)
                rep = evaluate(g, m, e if e != "-" else "tsvd", d, cfg, _hyper(args, e))
                reports.append(rep)
    return reports


def _csv_text(reports, dataset: str, smoothing: str) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for rep in reports:
        sm = smoothing if rep.model == "HeterLT" else "-"
        head = [dataset, rep.model, rep.embedder, sm, rep.dim]
        for r in rep.per_repeat:
            w.writerow(head + [r["repeat"], r["selected"], _fmt(r["auc"]), _fmt(r["auprc"]),
                               _fmt(r["ndcg"])])
        for stat, fn in (("mean", rep.mean), ("sd", rep.sd)):
            w.writerow(head + [stat, "", _fmt(fn("auc")), _fmt(fn("auprc")), _fmt(fn("ndcg"))])
    return buf.getvalue()


def _summary_text(reports, dataset: str) -> str:
    lines = [f"dataset: {dataset}",
             f"{'model':<16}{'embedder':<10}{'dim':>5}  {'AUC ± sd':<18}{'AUPRC ± sd':<18}"
             f"{'NDCG@P ± sd':<18}{'p(AUC vs BCGD)':>14}"]
    baseline = {rep.dim: rep for rep in reports if rep.model == "BCGD"}
    for rep in reports:
        cols = "".join(f"{rep.mean(m):.4f} ± {rep.sd(m):.4f}".ljust(18) for m in ("auc", "auprc", "ndcg"))
        base = baseline.get(rep.dim)
        pv = "" if base is None or base is rep else f"{compare_reports(rep, base):.3g}"
        lines.append(f"{rep.model:<16}{rep.embedder:<10}{rep.dim:>5}  {cols}{pv:>14}")
    return "\n".join(lines) + "\n"


def _emit(args, reports, dataset, csv_name: str) -> None:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    _atomic_write(out / csv_name, _csv_text(reports, dataset, args.smoothing))
    summary = _summary_text(reports, dataset)
    _atomic_write(out / "summary.txt", summary)
    _atomic_write(out / "run-manifest.json", _manifest(args, {
        "csv_header": CSV_HEADER,
        "alpha_grid": list(ModelHyper.alphas) if args.alpha is None else [args.alpha],
        "theta_grid": list(ModelHyper.thetas) if args.theta is None else [args.theta],
        "lambda_grid": list(ModelHyper.lambdas) if args.lam is None else [args.lam],
        "seed_scheme": "embed: seed+t; split: SeedSequence([seed, repeat]); bcgd: seed",
    }))
    sys.stdout.write(summary)


def cmd_evaluate(args) -> int:
    _check_positive("dim", args.dim)
    g, dataset = _load_graph(args)
    reports = _run_matrix(args, g, dataset, [args.dim])
    _emit(args, reports, dataset, "metrics.csv")
    return 0


def cmd_sweep_dim(args) -> int:
    try:
        dims = _csv_list(args.dims, int)
    except ValueError:
        raise ConfigError(f"dims: cannot parse {args.dims!r}") from None
    if not dims:
        raise ConfigError("dims: at least one dimension required")
    g, dataset = _load_graph(args)
    reports = _run_matrix(args, g, dataset, dims)
    _emit(args, reports, dataset, "sweep.csv")
    return 0


COMMANDS = {"ingest": cmd_ingest, "synth": cmd_synth, "embed": cmd_embed,
            "evaluate": cmd_evaluate, "sweep-dim": cmd_sweep_dim}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.config:
            sub_parser = parser._subparsers._group_actions[0].choices[args.command]
            args = _apply_config(parser, sub_parser, argv, args)
        return COMMANDS[args.command](args)
    except (ConfigError, graph_mod.EdgeListError, graph_mod.StructureError) as exc:
        print(f"tempembed {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError, MemoryError) as exc:
        print(f"tempembed {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
