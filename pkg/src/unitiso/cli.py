"""Command line front end: construct, search, bound, certify, verify, report.

Every artifact is canonical JSON (sorted keys, two-space indent, trailing
newline) and every write drops a sibling <artifact>.manifest.json naming
the command, the tool version, the seeds and budgets, and the sha256 of
each input file.  Manifests carry no timing and no thread count, so a
rerun with the same seeds is byte-identical regardless of parallelism.

Exit codes: 0 success, 1 verification failure, 2 bad input or infeasible
parameters, 3 search budget or work guard exhausted.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from pathlib import Path

from . import __version__
from .arcs import (
    ArcBudgetExceeded,
    ArcError,
    ArcInfeasible,
    find_arc,
    max_arc,
)
from .bounds import (
    AuditError,
    BoundsError,
    CertificateError,
    audit_lowerbound_machinery,
    construct_extremal_set,
    floor_c,
    theorem1_bounds,
    theorem2_value,
    verify_certificate,
)
from .designs import (
    DesignError,
    canonical_json_bytes,
    construct_bm,
    construct_hermitian,
    construct_order2_unital,
    design_from_json_dict,
    design_hash,
    load_design,
    save_design,
    unital_order,
)
from .isograph import (
    DEFAULT_WORK_GUARD,
    IsoGraphError,
    TheoremViolation,
    WorkGuardExceeded,
    brute_force_iso,
    build_graph,
    graph_to_dimacs,
    graph_to_json_dict,
    heuristic_iso,
)
from .report import (
    bound_table,
    ratio_decimal,
    write_bound_csv,
    write_bound_figure,
    write_floor_c_figure,
)

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3


def _sha256_file(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


def _write_json(path: str, obj) -> None:
    with open(path, "wb") as fh:
        fh.write(canonical_json_bytes(obj))


def _write_manifest(artifact: str, command: list, inputs: list[str], knobs: dict) -> None:
    doc = {
        "command": [str(part) for part in command],
        "version": __version__,
        "inputs": {p: _sha256_file(p) for p in inputs},
        "knobs": knobs,
    }
    _write_json(artifact + ".manifest.json", doc)


def _fmt(frac) -> str:
    return f"{frac.numerator}/{frac.denominator} = " + ratio_decimal(
        frac.numerator, frac.denominator
    )


def _work_guard() -> int:
    return int(os.environ.get("ISO_WORK_GUARD", DEFAULT_WORK_GUARD))


# ----------------------------------------------------------------------
# construct
# ----------------------------------------------------------------------


def cmd_construct(args) -> int:
    if args.kind == "hermitian":
        design = construct_hermitian(args.q)
        command = ["construct", "hermitian", "--q", args.q, "-o", args.output]
    elif args.kind == "bm":
        design = construct_bm(args.q, args.alpha, args.beta)
        command = [
            "construct", "bm",
            "--q", args.q, "--alpha", args.alpha, "--beta", args.beta,
            "-o", args.output,
        ]
    elif args.kind == "order2":
        design = construct_order2_unital()
        command = ["construct", "order2", "-o", args.output]
    else:
        with open(args.input) as fh:
            design = design_from_json_dict(json.load(fh))
        command = ["construct", "import", "-i", args.input, "-o", args.output]
    save_design(design, args.output)
    _write_manifest(args.output, command, [], {})
    p = design.params
    print(
        f"2-({p.v},{p.k},{p.lam}) design, {p.b} blocks, r = {p.r}, "
        f"hash {design_hash(design)[:12]} -> {args.output}"
    )
    return EXIT_OK


# ----------------------------------------------------------------------
# bounds
# ----------------------------------------------------------------------


def _search_arc(design, target: int, args):
    """(arc, how) with budget fallback to the best arc the warm start gives."""
    mode = "exact" if args.exact_arc else "greedy"
    try:
        return sorted(find_arc(design, target, mode, seed=args.seed, budget=args.budget)), mode
    except (ArcBudgetExceeded, ArcInfeasible):
        size, witness, proven = max_arc(design, budget=args.budget, seed=args.seed)
        if size < 3:
            raise
        return sorted(witness), "fallback" + ("-proven" if proven else "")


def cmd_bounds(args) -> int:
    design = load_design(args.design)
    n = unital_order(design.params)
    if n is None:
        raise BoundsError(f"{design.params} is not a unital; bounds need one")
    c = floor_c(n)
    requested = args.arc_target if args.arc_target is not None else c
    target = max(3, min(requested, c))
    arc, how = _search_arc(design, target, args)
    report = theorem1_bounds(n, len(arc))
    graph = build_graph(design, "incidence")
    cert = construct_extremal_set(design, arc, graph)
    cert_path = args.cert or str(Path(args.design).with_suffix("")) + ".cert.json"
    _write_json(cert_path, cert)
    _write_manifest(
        cert_path,
        ["bounds", args.design, "--arc-target", requested, "--seed", args.seed]
        + (["--exact-arc"] if args.exact_arc else [])
        + (["--budget", args.budget] if args.budget is not None else []),
        [args.design],
        {"seed": args.seed, "budget": args.budget, "arc_mode": how},
    )
    p = design.params
    print(f"2-({p.v},{p.k},{p.lam}) unital of order {n}, floor_c = {c}")
    print(f"arc: {len(arc)} points ({how}), certificate uses x = {cert['x']}")
    print(f"lower bound {_fmt(report.lower)}")
    print(f"upper bound {_fmt(report.upper)}" + (" (pinch: exact value)" if report.pinch else ""))
    ratio = cert["claimed"]
    print(f"witness ratio {ratio['num']}/{ratio['den']} = "
          + ratio_decimal(ratio["num"], ratio["den"]))
    print(f"certificate -> {cert_path}")
    if args.brute:
        result = brute_force_iso(graph, work_guard=_work_guard(), threads=args.threads)
        print(f"oracle {_fmt(result.ratio)}")
        if result.ratio != report.lower or not report.pinch:
            print("oracle disagrees with the pinched certificate", file=sys.stderr)
            return EXIT_VERIFY
    if args.audit:
        if n < 3:
            print("audit: order 2 is fully covered by the exhaustive oracle, skipping")
        else:
            audit = audit_lowerbound_machinery(n, seed=args.seed, threads=args.threads)
            checked = ", ".join(f"{k}={v}" for k, v in audit.checked.items())
            print(f"audit ({audit.mode}): {checked}")
    return EXIT_OK


# ----------------------------------------------------------------------
# iso
# ----------------------------------------------------------------------


def cmd_iso(args) -> int:
    design = load_design(args.design)
    graph = build_graph(design, args.flavor)
    if args.brute:
        result = brute_force_iso(graph, work_guard=_work_guard(), threads=args.threads)
    else:
        result = heuristic_iso(
            graph, budget=args.budget, seed=args.seed,
            restarts=args.restarts, threads=args.threads,
        )
    print(
        f"i({args.flavor}) {'=' if args.brute else '<='} {_fmt(result.ratio)} "
        f"({result.method}, witness {result.witness.size} vertices)"
    )
    n = unital_order(design.params)
    if n is not None and args.flavor == "nonincidence":
        print(f"closed form {_fmt(theorem2_value(n))}")
    if args.output:
        doc = result.to_json_dict()
        doc["design"] = {"hash": design_hash(design), "params": list(design.params.as_tuple())}
        _write_json(args.output, doc)
        _write_manifest(
            args.output,
            ["iso", args.design, "--flavor", args.flavor,
             "--brute" if args.brute else "--heuristic",
             "--seed", args.seed, "--budget", args.budget, "--restarts", args.restarts,
             "-o", args.output],
            [args.design],
            {"seed": args.seed, "budget": args.budget, "restarts": args.restarts},
        )
        print(f"result -> {args.output}")
    return EXIT_OK


# ----------------------------------------------------------------------
# verify
# ----------------------------------------------------------------------


def cmd_verify(args) -> int:
    with open(args.certificate) as fh:
        cert = json.load(fh)
    design = load_design(args.design)
    checks = verify_certificate(cert, design)
    print(f"certificate verifies: {', '.join(sorted(checks))}")
    return EXIT_OK


# ----------------------------------------------------------------------
# graph export
# ----------------------------------------------------------------------


def cmd_graph(args) -> int:
    design = load_design(args.design)
    graph = build_graph(design, args.flavor)
    if args.format == "dimacs":
        text = graph_to_dimacs(graph)
        payload = text.encode()
    else:
        payload = canonical_json_bytes(graph_to_json_dict(graph))
    if args.output:
        with open(args.output, "wb") as fh:
            fh.write(payload)
        _write_manifest(
            args.output,
            ["graph", args.design, "--flavor", args.flavor,
             "--format", args.format, "-o", args.output],
            [args.design],
            {},
        )
        print(f"{args.format} graph ({graph.v}+{graph.b} vertices, "
              f"{graph.edges} edges) -> {args.output}")
    else:
        sys.stdout.write(payload.decode())
    return EXIT_OK


# ----------------------------------------------------------------------
# report
# ----------------------------------------------------------------------


def cmd_report(args) -> int:
    if args.n_max < 2:
        raise BoundsError("the report needs n_max >= 2")
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    rows = bound_table(args.n_max)
    csv_path = str(outdir / "bounds.csv")
    write_bound_csv(csv_path, rows)
    fig1 = str(outdir / "bounds.png")
    write_bound_figure(fig1, rows)
    fig2 = str(outdir / "floor_c.png")
    write_floor_c_figure(fig2, rows)
    _write_manifest(
        csv_path,
        ["report", "--n-max", args.n_max, "-o", args.outdir],
        [],
        {"n_max": args.n_max},
    )
    for path in (csv_path, fig1, fig2):
        print(f"wrote {path}")
    return EXIT_OK


# ----------------------------------------------------------------------
# parser
# ----------------------------------------------------------------------


def _add_threads(parser) -> None:
    parser.add_argument(
        "--threads", type=int, default=os.cpu_count() or 1,
        help="worker threads for searches; never changes results",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="unitiso",
        description="Unitals, their bipartite graphs, and vertex-isoperimetric numbers.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    pc = sub.add_parser("construct", help="build a design and save it as JSON")
    kinds = pc.add_subparsers(dest="kind", required=True)
    ph = kinds.add_parser("hermitian", help="classical unital of order q")
    ph.add_argument("--q", type=int, required=True)
    ph.add_argument("-o", "--output", required=True)
    pb = kinds.add_parser("bm", help="parabolic unital for an admissible (alpha, beta)")
    pb.add_argument("--q", type=int, required=True)
    pb.add_argument("--alpha", type=int, required=True)
    pb.add_argument("--beta", type=int, required=True)
    pb.add_argument("-o", "--output", required=True)
    po = kinds.add_parser("order2", help="the unique 2-(9,3,1) design")
    po.add_argument("-o", "--output", required=True)
    pi = kinds.add_parser("import", help="validate an external {v, blocks} JSON file")
    pi.add_argument("-i", "--input", required=True)
    pi.add_argument("-o", "--output", required=True)
    for sp in (ph, pb, po, pi):
        sp.set_defaults(func=cmd_construct)

    pbo = sub.add_parser("bounds", help="arc search, two-sided bounds, certificate")
    pbo.add_argument("design")
    pbo.add_argument("--arc-target", type=int, default=None,
                     help="arc size to search for (clamped to floor_c, floored at 3)")
    pbo.add_argument("--exact-arc", action="store_true",
                     help="branch and bound instead of greedy restarts")
    pbo.add_argument("--audit", action="store_true",
                     help="also recheck the lower-bound inequalities at this order")
    pbo.add_argument("--brute", action="store_true",
                     help="cross-check the certificate against the exhaustive oracle")
    pbo.add_argument("--seed", type=int, default=0)
    pbo.add_argument("--budget", type=int, default=None,
                     help="arc search node/restart budget")
    pbo.add_argument("--cert", default=None, help="certificate path (default <design>.cert.json)")
    _add_threads(pbo)
    pbo.set_defaults(func=cmd_bounds)

    pio = sub.add_parser("iso", help="isoperimetric number of a design graph")
    pio.add_argument("design")
    pio.add_argument("--flavor", choices=("incidence", "nonincidence"), default="incidence")
    group = pio.add_mutually_exclusive_group()
    group.add_argument("--brute", action="store_true", help="exhaustive oracle (guarded)")
    group.add_argument("--heuristic", action="store_true", help="seeded local search (default)")
    pio.add_argument("--seed", type=int, default=0)
    pio.add_argument("--budget", type=int, default=20000)
    pio.add_argument("--restarts", type=int, default=16)
    pio.add_argument("-o", "--output", default=None)
    _add_threads(pio)
    pio.set_defaults(func=cmd_iso)

    pv = sub.add_parser("verify", help="replay a certificate against a design")
    pv.add_argument("certificate")
    pv.add_argument("design")
    pv.set_defaults(func=cmd_verify)

    pg = sub.add_parser("graph", help="export the bipartite graph")
    pg.add_argument("design")
    pg.add_argument("--flavor", choices=("incidence", "nonincidence"), default="incidence")
    pg.add_argument("--format", choices=("json", "dimacs"), default="json")
    pg.add_argument("-o", "--output", default=None)
    pg.set_defaults(func=cmd_graph)

    pr = sub.add_parser("report", help="bound table as CSV plus figures")
    pr.add_argument("--n-max", type=int, default=60)
    pr.add_argument("-o", "--outdir", default="unitiso-report")
    pr.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ArcBudgetExceeded, WorkGuardExceeded) as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (CertificateError, AuditError, TheoremViolation) as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (DesignError, ArcError, ArcInfeasible, BoundsError, IsoGraphError,
            OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
