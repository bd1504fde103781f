"""Command-line entry point.

Subcommands mirror the pipeline stages::

    influence   graph -> influence matrix CSV
    detect      graph -> locally optimal divisions
    blocks      divisions -> building-block report JSON
    overlap     blocks + communities + one threshold -> overlapping nodes
    sweep       same across an ascending threshold list
    pipeline    everything end to end into an output bundle
    export-dot  recolor a graph from saved sweep/block JSON

Every JSON artifact is validated against a schema shipped with the package,
and identical configurations produce byte-identical outputs (no timestamps,
sorted keys, fixed float formatting). Set OVERLAPNET_CACHE to a directory to
reuse influence matrices across runs keyed by graph content and parameters.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from importlib import resources
from pathlib import Path

import jsonschema

from . import __version__
from .blocks import (BlockAssignment, Pattern, block_table,
                     blocks_for_segment, build_blocks, compute_and_rank)
from .config import (CONFIG_FIELDS, RunConfig, parse_threshold_list,
                     resolve_config)
from .dot import dot_string
from .errors import OverlapnetError, ParameterError
from .graph import Graph, load_edge_list
from .influence import compute_influence, export_matrix, import_matrix
from .overlap import (OverlapResult, evaluate_communities, load_communities,
                      threshold_sweep)
from .partition import (DivisionSet, export_divisions, generate_divisions,
                        import_divisions, quality)

SUPPRESS = argparse.SUPPRESS


# ---------------------------------------------------------------------------
# JSON helpers
# ---------------------------------------------------------------------------

def _schema(name: str) -> dict:
    text = (resources.files("overlapnet") / "schemas" / name).read_text()
    return json.loads(text)


def write_json(path, payload, schema_name: str) -> None:
    """Validate against the shipped schema, then write deterministically."""
    jsonschema.validate(payload, _schema(schema_name))
    Path(path).write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n")


def read_json(path, schema_name: str):
    payload = json.loads(Path(path).read_text())
    try:
        jsonschema.validate(payload, _schema(schema_name))
    except jsonschema.ValidationError as exc:
        raise OverlapnetError(f"{path}: {exc.message}")
    return payload


def _external(graph: Graph | None, j: int):
    if graph is not None:
        return graph.external(j)
    return j + 1  # bare division fixtures number nodes from 1


def _xo(row) -> str:
    return "".join("x" if int(b) else "o" for b in row)


# ---------------------------------------------------------------------------
# stage plumbing shared by subcommands
# ---------------------------------------------------------------------------

def _resolve(args) -> tuple[RunConfig, dict]:
    """Split argparse output into RunConfig fields and extra per-command args."""
    d = vars(args).copy()
    d.pop("func", None)
    cfg_file = d.pop("config", None)
    extras = {k: d.pop(k) for k in list(d) if k not in CONFIG_FIELDS}
    # asking for the ranked segment walk implies leaving full-segment mode
    if ("segment_length" in d or "top_k" in d) and "full_segment" not in d:
        d["full_segment"] = False
    return resolve_config(cfg_file, **d), extras


def _load_graph(cfg: RunConfig) -> Graph:
    if not cfg.graph:
        raise ParameterError("a graph file is required (--graph)")
    return load_edge_list(cfg.graph, cfg.weight, cfg.directed,
                          labels_path=cfg.labels,
                          use_weights=not cfg.ignore_weights)


def _obtain_matrix(cfg: RunConfig, g: Graph | None):
    if cfg.matrix:
        return import_matrix(cfg.matrix)
    if g is None:
        return None
    cache_dir = os.environ.get("OVERLAPNET_CACHE")
    if not cache_dir:
        return compute_influence(g, cfg.max_path_length)
    digest = hashlib.sha256()
    digest.update(Path(cfg.graph).read_bytes())
    digest.update(repr((cfg.weight, cfg.directed, cfg.max_path_length)).encode())
    cached = Path(cache_dir) / f"influence-{digest.hexdigest()[:24]}.csv"
    if cached.exists():
        return import_matrix(cached)
    m = compute_influence(g, cfg.max_path_length)
    cached.parent.mkdir(parents=True, exist_ok=True)
    export_matrix(m, cached)
    return m


def _obtain_divisions(cfg: RunConfig, M) -> DivisionSet:
    if cfg.divisions:
        return import_divisions(cfg.divisions, transpose=cfg.transpose)
    if M is None:
        raise ParameterError(
            "division detection needs a graph or an imported matrix")
    return generate_divisions(M, cfg.n_seeds, base_seed=cfg.base_seed,
                              max_iters=cfg.max_iters)


def _block_reports(cfg: RunConfig, M, ds: DivisionSet):
    """Returns (scores | None, reports, diagnostics)."""
    if cfg.full_segment:
        return None, [blocks_for_segment(ds, 1, ds.T)], []
    if M is None:
        raise ParameterError(
            "ranked segments need an influence matrix (use --graph or --matrix)")
    scores = compute_and_rank(M, ds, normalize=cfg.normalize)
    diags: list[dict] = []
    reports = build_blocks(ds, scores, cfg.segment_length, cfg.top_k,
                           diagnostics=diags)
    if not reports:
        raise ParameterError(
            "every segment in the requested range was skipped;"
            " increase segment_length or lower the anchor rank")
    return scores, reports, diags


def _select_report(cfg: RunConfig, reports) -> BlockAssignment:
    if cfg.full_segment:
        return reports[0]
    for rep in reports:
        if rep.anchor != cfg.anchor_rank:
            continue
        if cfg.segment_index is None or rep.segment == cfg.segment_index:
            return rep
    have = sorted({(r.anchor, r.segment) for r in reports})
    raise ParameterError(
        f"no block report for anchor {cfg.anchor_rank}"
        + ("" if cfg.segment_index is None else f" segment {cfg.segment_index}")
        + f"; available (anchor, segment) pairs: {have}")


def _obtain_communities(cfg: RunConfig, ds: DivisionSet, g: Graph | None):
    """Community sizes for the threshold rule: file override or division sides."""
    if cfg.communities:
        index = None
        if g is not None:
            index = {str(g.external(j)): j for j in range(g.n_nodes)}
        return load_communities(cfg.communities, index=index)
    return ds


# ---------------------------------------------------------------------------
# payload builders
# ---------------------------------------------------------------------------

def _divisions_payload(ds: DivisionSet, M) -> dict:
    rows = []
    if ds.divisions is not None:
        for i, d in enumerate(ds.divisions, start=1):
            rows.append({"index": i, "membership": _xo(d.membership),
                         "q_value": d.q_value, "seed": d.seed,
                         "converged": d.converged})
    else:
        for i in range(1, ds.T + 1):
            row = ds.Z[i - 1]
            q = float(quality(M, row)) if M is not None else None
            rows.append({"index": i, "membership": _xo(row), "q_value": q,
                         "seed": None, "converged": None})
    return {"n_nodes": ds.N, "t_divisions": ds.T, "divisions": rows}


def _blocks_payload(ds: DivisionSet, scores, reports, diags,
                    g: Graph | None) -> dict:
    report_objs = []
    for rep in reports:
        report_objs.append({
            "anchor": rep.anchor,
            "segment": rep.segment,
            "t1": rep.t1,
            "t2": rep.t2,
            "clamped": rep.clamped,
            "blocks": [
                {"signature": p.signature, "size": p.size,
                 "members": [_external(g, j) for j in p.members]}
                for p in rep.blocks
            ],
        })
    payload = {"n_nodes": ds.N, "reports": report_objs, "diagnostics": diags}
    payload["scores"] = None if scores is None else {
        "s": [float(x) for x in scores.s],
        "pi": list(scores.pi),
        "normalized": scores.normalized,
    }
    return payload


def _sweep_payload(points, g: Graph | None) -> list:
    out = []
    for thr, res in points:
        out.append({
            "thr": thr,
            "n_overlapping": res.size_O,
            "overlapping_external_ids": [_external(g, j) for j in sorted(res.O)],
            "gamma": list(res.gamma),
        })
    return out


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_influence(args) -> int:
    cfg, extras = _resolve(args)
    g = _load_graph(cfg)
    m = _obtain_matrix(cfg, g)
    export_matrix(m, extras["out"])
    print(f"wrote {m.n}x{m.n} influence matrix to {extras['out']}")
    return 0


def cmd_detect(args) -> int:
    cfg, extras = _resolve(args)
    g = _load_graph(cfg)
    m = _obtain_matrix(cfg, g)
    ds = generate_divisions(m, cfg.n_seeds, base_seed=cfg.base_seed,
                            max_iters=cfg.max_iters)
    export_divisions(ds, extras["out"])
    if extras.get("report"):
        write_json(extras["report"], _divisions_payload(ds, m),
                   "divisions.schema.json")
    qs = [d.q_value for d in ds.divisions]
    print(f"found {ds.T} distinct divisions of {ds.N} nodes"
          f" (q range {min(qs):.6g} .. {max(qs):.6g}) -> {extras['out']}")
    return 0


def cmd_blocks(args) -> int:
    cfg, extras = _resolve(args)
    g = _load_graph(cfg) if cfg.graph else None
    # the matrix is only needed to detect divisions or rank segments
    need_matrix = not cfg.divisions or not cfg.full_segment
    m = _obtain_matrix(cfg, g) if need_matrix else None
    ds = _obtain_divisions(cfg, m)
    scores, reports, diags = _block_reports(cfg, m, ds)
    write_json(extras["out"], _blocks_payload(ds, scores, reports, diags, g),
               "blocks.schema.json")
    if extras.get("table"):
        rep = _select_report(cfg, reports)
        ids = ([str(g.external(j)) for j in range(g.n_nodes)]
               if g is not None else None)
        Path(extras["table"]).write_text(block_table(rep, ids=ids))
    sizes = [list(rep.block_sizes) for rep in reports]
    print(f"{len(reports)} block report(s); block sizes {sizes};"
          f" {len(diags)} segment diagnostic(s) -> {extras['out']}")
    return 0


def _overlap_common(cfg: RunConfig, thresholds):
    g = _load_graph(cfg) if cfg.graph else None
    need_matrix = not cfg.divisions or not cfg.full_segment
    m = _obtain_matrix(cfg, g) if need_matrix else None
    ds = _obtain_divisions(cfg, m)
    _, reports, _ = _block_reports(cfg, m, ds)
    rep = _select_report(cfg, reports)
    communities = _obtain_communities(cfg, ds, g)
    points = threshold_sweep(communities, rep, thresholds, mode=cfg.mode,
                             accumulation=cfg.accumulation)
    return g, rep, points


def cmd_overlap(args) -> int:
    cfg, extras = _resolve(args)
    g, rep, points = _overlap_common(cfg, [extras["thr"]])
    write_json(extras["out"], _sweep_payload(points, g), "sweep.schema.json")
    thr, res = points[0]
    ids = " ".join(str(_external(g, j)) for j in sorted(res.O))
    print(f"thr={thr:g}: |O|={res.size_O}" + (f" -> {ids}" if ids else ""))
    return 0


def cmd_sweep(args) -> int:
    cfg, extras = _resolve(args)
    g, rep, points = _overlap_common(cfg, cfg.thresholds)
    write_json(extras["out"], _sweep_payload(points, g), "sweep.schema.json")
    for thr, res in points:
        print(f"thr={thr:g}\t|O|={res.size_O}")
    return 0


def cmd_pipeline(args) -> int:
    cfg, _ = _resolve(args)
    if not cfg.outdir:
        raise ParameterError("pipeline requires --outdir")
    outdir = Path(cfg.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / "dot").mkdir(exist_ok=True)
    created: list[Path] = []

    def emit(relpath: str, writer) -> Path:
        path = outdir / relpath
        writer(path)
        created.append(path)
        return path

    stage = "configuration"
    try:
        emit("config.json",
             lambda p: write_json(p, cfg.to_dict(), "config.schema.json"))
        stage = "graph loading"
        g = _load_graph(cfg)
        stage = "influence matrix"
        m = _obtain_matrix(cfg, g)
        emit("influence.csv", lambda p: export_matrix(m, p))
        stage = "division detection"
        ds = _obtain_divisions(cfg, m)
        emit("divisions.div", lambda p: export_divisions(ds, p))
        emit("divisions.json",
             lambda p: write_json(p, _divisions_payload(ds, m),
                                  "divisions.schema.json"))
        stage = "block construction"
        scores, reports, diags = _block_reports(cfg, m, ds)
        emit("blocks.json",
             lambda p: write_json(p, _blocks_payload(ds, scores, reports,
                                                     diags, g),
                                  "blocks.schema.json"))
        rep = _select_report(cfg, reports)
        stage = "threshold sweep"
        communities = _obtain_communities(cfg, ds, g)
        points = threshold_sweep(communities, rep, cfg.thresholds,
                                 mode=cfg.mode, accumulation=cfg.accumulation)
        emit("sweep.json",
             lambda p: write_json(p, _sweep_payload(points, g),
                                  "sweep.schema.json"))
        stage = "dot export"
        for thr, res in points:
            emit(f"dot/overlap_thr_{thr:g}.dot",
                 lambda p, res=res: p.write_text(dot_string(g, res, rep)))
    except Exception as exc:
        for path in created:
            try:
                path.unlink()
            except OSError:
                pass
        if isinstance(exc, OverlapnetError):
            raise OverlapnetError(f"pipeline stage '{stage}' failed: {exc}")
        raise
    for thr, res in points:
        print(f"thr={thr:g}\t|O|={res.size_O}")
    print(f"bundle written to {outdir}")
    return 0


def cmd_export_dot(args) -> int:
    cfg, extras = _resolve(args)
    g = _load_graph(cfg)
    blocks_payload = read_json(extras["blocks_json"], "blocks.schema.json")
    sweep_payload = read_json(extras["sweep_json"], "sweep.schema.json")
    thr = extras["thr"]

    chosen = None
    for rep in blocks_payload["reports"]:
        if cfg.segment_index is not None and rep["segment"] != cfg.segment_index:
            continue
        if rep["anchor"] not in (0, cfg.anchor_rank):  # 0 = full-segment run
            continue
        chosen = rep
        break
    if chosen is None:
        have = sorted({(r["anchor"], r["segment"])
                       for r in blocks_payload["reports"]})
        raise ParameterError(
            f"no matching block report; available (anchor, segment): {have}")
    patterns = []
    for blk in chosen["blocks"]:
        members = tuple(g.internal(x) for x in blk["members"])
        patterns.append(Pattern(blk["signature"], members))
    a = [0] * g.n_nodes
    for idx, pat in enumerate(patterns, start=1):
        for j in pat.members:
            a[j] = idx
    assignment = BlockAssignment(chosen["anchor"], chosen["segment"],
                                 chosen["t1"], chosen["t2"],
                                 chosen["clamped"], tuple(patterns),
                                 tuple(a), tuple(p.size for p in patterns))

    point = None
    for p in sweep_payload:
        if abs(p["thr"] - thr) < 1e-12:
            point = p
            break
    if point is None:
        available = ", ".join(f"{p['thr']:g}" for p in sweep_payload)
        raise ParameterError(
            f"threshold {thr:g} not present in sweep (has: {available})")
    overlapping = frozenset(g.internal(x)
                            for x in point["overlapping_external_ids"])
    o = tuple(1 if j in overlapping else 0 for j in range(g.n_nodes))
    res = OverlapResult(float(thr), tuple(point["gamma"]), o, overlapping)
    Path(extras["out"]).write_text(dot_string(g, res, assignment))
    print(f"wrote {extras['out']}")
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="overlapnet",
        description="Overlapping community structure from influence spreading.")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=None, metavar="FILE",
                        help="JSON config file; explicit flags win")

    graph_p = argparse.ArgumentParser(add_help=False)
    graph_p.add_argument("--graph", default=SUPPRESS, metavar="FILE",
                         help="edge list 'u v [w]'")
    graph_p.add_argument("--weight", type=float, default=SUPPRESS,
                         help="weight for edges without a column (default 1.0)")
    graph_p.add_argument("--directed", action="store_true", default=SUPPRESS,
                         help="treat edges as one-way arcs")
    graph_p.add_argument("--ignore-weights", dest="ignore_weights",
                         action="store_true", default=SUPPRESS,
                         help="drop the third column (e.g. co-occurrence "
                              "counts) and use --weight everywhere")
    graph_p.add_argument("--labels", default=SUPPRESS, metavar="FILE",
                         help="optional 'id<TAB>name' display names")

    matrix_p = argparse.ArgumentParser(add_help=False)
    matrix_p.add_argument("-L", "--max-path-length", dest="max_path_length",
                          type=int, default=SUPPRESS,
                          help="influence path length bound (default 4)")
    matrix_p.add_argument("--matrix", default=SUPPRESS, metavar="CSV",
                          help="import an influence matrix instead of computing")

    detect_p = argparse.ArgumentParser(add_help=False)
    detect_p.add_argument("--seeds", dest="n_seeds", type=int, default=SUPPRESS,
                          help="number of random restarts (default 12)")
    detect_p.add_argument("--base-seed", dest="base_seed", type=int,
                          default=SUPPRESS, help="first RNG seed (default 0)")
    detect_p.add_argument("--max-iters", dest="max_iters", type=int,
                          default=SUPPRESS,
                          help="flip budget per search (default 10000)")

    div_p = argparse.ArgumentParser(add_help=False)
    div_p.add_argument("--divisions", default=SUPPRESS, metavar="FILE",
                       help="import divisions (x/o rows) instead of detecting")
    div_p.add_argument("--transpose", action="store_true", default=SUPPRESS,
                       help="division file is node-per-row (table layout)")

    blocks_p = argparse.ArgumentParser(add_help=False)
    blocks_p.add_argument("--full-segment", dest="full_segment",
                          action="store_true", default=SUPPRESS,
                          help="one segment over all divisions (default)")
    blocks_p.add_argument("--segment-length", dest="segment_length", type=int,
                          default=SUPPRESS,
                          help="segment walk length (implies ranked mode)")
    blocks_p.add_argument("-K", "--top-k", dest="top_k", type=int,
                          default=SUPPRESS,
                          help="how many ranked anchors to expand")
    blocks_p.add_argument("--normalize", action="store_true", default=SUPPRESS,
                          help="normalize scores by side-balance")
    blocks_p.add_argument("--anchor", dest="anchor_rank", type=int,
                          default=SUPPRESS,
                          help="anchor rank whose blocks feed the threshold rule")
    blocks_p.add_argument("--segment-index", dest="segment_index", type=int,
                          default=SUPPRESS, help="segment index to select")

    rule_p = argparse.ArgumentParser(add_help=False)
    rule_p.add_argument("--mode", choices=["strict", "non-strict"],
                        default=SUPPRESS,
                        help="match on ratio <= thr (strict) or < thr")
    rule_p.add_argument("--accumulation",
                        choices=["after-scan", "at-own-index"],
                        default=SUPPRESS,
                        help="when unmatched blocks join O (default after-scan)")
    rule_p.add_argument("--communities", default=SUPPRESS, metavar="FILE",
                        help="partition file supplying community sizes"
                             " (default: division sides)")

    p = sub.add_parser("influence", parents=[common, graph_p, matrix_p],
                       help="compute the influence matrix and save CSV")
    p.add_argument("--out", required=True, metavar="CSV")
    p.set_defaults(func=cmd_influence)

    p = sub.add_parser("detect", parents=[common, graph_p, matrix_p, detect_p],
                       help="find locally optimal divisions")
    p.add_argument("--out", required=True, metavar="FILE",
                   help="division file to write (x/o rows)")
    p.add_argument("--report", default=None, metavar="JSON",
                   help="also write a JSON report with q values")
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("blocks",
                       parents=[common, graph_p, matrix_p, detect_p, div_p,
                                blocks_p],
                       help="group nodes into membership-signature blocks")
    p.add_argument("--out", required=True, metavar="JSON")
    p.add_argument("--table", default=None, metavar="TXT",
                   help="also write the per-node signature table")
    p.set_defaults(func=cmd_blocks)

    p = sub.add_parser("overlap",
                       parents=[common, graph_p, matrix_p, detect_p, div_p,
                                blocks_p, rule_p],
                       help="overlapping nodes at one threshold")
    p.add_argument("--thr", type=float, required=True)
    p.add_argument("--out", required=True, metavar="JSON")
    p.set_defaults(func=cmd_overlap)

    p = sub.add_parser("sweep",
                       parents=[common, graph_p, matrix_p, detect_p, div_p,
                                blocks_p, rule_p],
                       help="overlapping nodes across a threshold list")
    p.add_argument("--thr", dest="thresholds", type=parse_threshold_list,
                   required=True, metavar="T1,T2,...",
                   help="strictly ascending comma-separated thresholds")
    p.add_argument("--out", required=True, metavar="JSON")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("pipeline",
                       parents=[common, graph_p, matrix_p, detect_p, div_p,
                                blocks_p, rule_p],
                       help="full run into an output bundle")
    p.add_argument("--thr", dest="thresholds", type=parse_threshold_list,
                   default=SUPPRESS, metavar="T1,T2,...")
    p.add_argument("--outdir", default=SUPPRESS, metavar="DIR")
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("export-dot", parents=[common, graph_p, blocks_p],
                       help="recolor a graph from saved results")
    p.add_argument("--blocks", dest="blocks_json", required=True,
                   metavar="JSON")
    p.add_argument("--sweep", dest="sweep_json", required=True, metavar="JSON")
    p.add_argument("--thr", type=float, required=True)
    p.add_argument("--out", required=True, metavar="DOT")
    p.set_defaults(func=cmd_export_dot)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except OverlapnetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
