"""Command-line front end.

Exit codes: 0 all good; 1 a verified statement was falsified on this
instance (a finding, not a crash); 2 invalid usage; 3 internal invariant
breach (a bug in the library, with diagnostics).

Subcommands: build, verify, spectrum, components, eta-scan, distribution,
dims, export.  A key=value config file can seed any flag; explicit flags
win.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .errors import ClaimFalsified, InvariantBreach, UsageError
from .graphs import (
    IsogenyGraph,
    build_graph,
    component_split,
    graph_operator,
    quotient_graph,
    graphs_equal,
)
from .level import FAMILY_NAMES, LevelSubgroup, named_family, subgroup_from_generators
from .modular import check_dimensions
from .spectral import (
    eigenvalues,
    eta_scan,
    eta_scan_csv,
    gap_report,
    km_report,
    minimal_polynomial_squarefree,
    verify_adjointness,
)


def _parse_gens(text: str):
    """Generator list like '5,6,2,1;1,2,0,1' -> [(5,6,2,1), (1,2,0,1)]."""
    gens = []
    for chunk in text.replace("[", "").replace("]", "").split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        vals = [int(x) for x in chunk.split(",")]
        if len(vals) != 4:
            raise UsageError(f"generator {chunk!r} must have 4 entries")
        gens.append(tuple(vals))
    return gens


def _require_instance(args) -> None:
    if getattr(args, "p", None) is None or getattr(args, "ell", None) is None:
        raise UsageError("this command needs --p and --l (flags or config file)")


def _subgroup_from_args(args) -> LevelSubgroup:
    N = args.N
    if args.H_gens:
        if N is None:
            raise UsageError("--N is required with --H-gens")
        return subgroup_from_generators(N, _parse_gens(args.H_gens), name="custom")
    family = args.H or "trivial"
    if family == "trivial" and N is None:
        N = 1
    if N is None:
        raise UsageError(f"--N is required for family {family!r}")
    return named_family(family, N)


def _load_config(path: str) -> dict:
    out = {}
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, _, val = line.partition("=")
        out[key.strip()] = val.strip()
    return out


def _apply_config(args, parser):
    if not getattr(args, "config", None):
        return args
    cfg = _load_config(args.config)
    mapping = {"p": int, "l": int, "ell": int, "N": int, "seed": int, "threads": int}
    for key, val in cfg.items():
        dest = {"l": "ell"}.get(key, key)
        if getattr(args, dest, None) in (None, parser.get_default(dest)):
            setattr(args, dest, mapping.get(key, str)(val))
    return args


def _write_graph(G: IsogenyGraph, out: str, fmt: str) -> None:
    if fmt == "json":
        text = json.dumps(G.to_json_dict(), sort_keys=True, indent=1) + "\n"
    elif fmt == "dot":
        text = G.to_dot()
    elif fmt == "csv":
        text = G.to_adjacency_csv()
    else:
        raise UsageError(f"unknown format {fmt!r}")
    if out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def cmd_build(args) -> int:
    _require_instance(args)
    H = _subgroup_from_args(args)
    G = build_graph(args.p, args.ell, H, seed=args.seed)
    _write_graph(G, args.output, args.format)
    return 0


def _verify_loaded_file(path: str) -> int:
    data = json.loads(Path(path).read_text())
    A = np.array(data["adjacency"], dtype=np.int64)
    ell = data["l"]
    n = len(data["vertices"])
    if A.shape != (n, n) or (A < 0).any():
        raise InvariantBreach("adjacency matrix malformed")
    if not (A.sum(axis=0) == ell + 1).all():
        raise InvariantBreach("column sums of the stored graph are not ell+1")
    print(f"file {path}: {n} vertices, column sums ok")
    return 0


def cmd_verify(args) -> int:
    if args.input:
        return _verify_loaded_file(args.input)
    _require_instance(args)
    H = _subgroup_from_args(args)
    G = build_graph(args.p, args.ell, H, seed=args.seed)
    failures: list[str] = []
    breaches: list[str] = []

    def check(name: str, ok: bool, falsifies_claim: bool = True) -> None:
        print(f"  [{'PASS' if ok else 'FAIL'}] {name}")
        if not ok:
            (failures if falsifies_claim else breaches).append(name)

    G.check_column_sums()
    check("column sums = ell+1", True, falsifies_claim=False)
    check("mass identity", G.mass() == G.expected_mass(), falsifies_claim=False)
    rep = component_split(G)
    check("components connected", all(rep.strongly_connected))
    check("edges advance the Weil partition", rep.multipartition_ok)
    if rep.isomorphic_checked:
        check("components pairwise isomorphic", bool(rep.isomorphic_ok))
    adj = verify_adjointness(G)
    check("adjoint = <1/ell> A, commuting, equal spectra", adj.ok, falsifies_claim=True)
    if G.n_vertices <= args.exact_limit:
        check(
            "minimal polynomial squarefree (diagonalizable)",
            minimal_polynomial_squarefree(G.A),
        )
    gr = gap_report(G, rep)
    check("trivial eigenvalues have multiplicity one",
          all(c.trivial_multiplicity_one for c in gr.components))
    check("nontrivial eigenvalues below the proved bound",
          all(c.satisfies_bound for c in gr.components))
    check("Ramanujan threshold 2*sqrt(ell)", gr.ramanujan)
    check(f"eigenvalue angles on Z*pi/{gr.kprime} (tol 1e-6)", gr.angle_report.ok)
    fr = graph_operator(G, "frobenius")
    p2 = graph_operator(G, "diamond", G.p)
    check("frobenius^2 = diamond(p)", bool((fr.perm[fr.perm] == p2.perm).all()))
    check("frobenius is a graph automorphism", fr.is_automorphism(G))
    dm = graph_operator(G, "diamond", G.N - 1 if G.N > 1 else 1)
    check("diamond(-1) = identity", bool((dm.perm == np.arange(G.n_vertices)).all()))
    dims = check_dimensions(G)
    if dims.supported:
        check(f"dimension identity ({dims.family})", dims.match)
    if args.against_full:
        full = build_graph(args.p, args.ell, named_family("full", G.N), seed=args.seed)
        q = quotient_graph(full, H)
        check("quotient of full-level graph matches", graphs_equal(q, G))
    if breaches:
        raise InvariantBreach("; ".join(breaches))
    if failures:
        raise ClaimFalsified("; ".join(failures))
    print("all checks passed")
    return 0


def cmd_spectrum(args) -> int:
    _require_instance(args)
    H = _subgroup_from_args(args)
    G = build_graph(args.p, args.ell, H, seed=args.seed)
    S = eigenvalues(G.A, exact_limit=args.exact_limit)
    gr = gap_report(G)
    out = {
        "p": args.p,
        "l": args.ell,
        "N": G.N,
        "method": S.method,
        "residual": S.residual,
        "eigenvalues": [[v.real, v.imag] for v in S.values],
        "charpoly": S.charpoly,
        "gap": {
            "eta": gr.eta,
            "ramanujan": gr.ramanujan,
            "kprime": gr.kprime,
            "kprime_pm": gr.kprime_pm,
            "angle_max_residual": gr.angle_report.max_residual,
            "components": [
                {
                    "size": len(c.vertices),
                    "k": c.k,
                    "d": c.d,
                    "eta": c.eta,
                    "bound_log10": c.theorem_bound_log10,
                    "trivial_multiplicity_one": c.trivial_multiplicity_one,
                    "ramanujan": c.ramanujan,
                }
                for c in gr.components
            ],
        },
    }
    text = json.dumps(out, sort_keys=True) + "\n"
    sys.stdout.write(text) if args.output == "-" else Path(args.output).write_text(text)
    return 0


def cmd_components(args) -> int:
    _require_instance(args)
    H = _subgroup_from_args(args)
    G = build_graph(args.p, args.ell, H, seed=args.seed)
    rep = component_split(G)
    out = {
        "p": args.p,
        "l": args.ell,
        "N": G.N,
        "cayley_cycles": rep.cayley.cycles,
        "k": rep.cayley.k,
        "n_components": rep.cayley.n,
        "components": rep.components,
        "strongly_connected": rep.strongly_connected,
        "multipartition_ok": rep.multipartition_ok,
        "isomorphic_ok": rep.isomorphic_ok,
    }
    text = json.dumps(out, sort_keys=True) + "\n"
    sys.stdout.write(text) if args.output == "-" else Path(args.output).write_text(text)
    if not all(rep.strongly_connected) or not rep.multipartition_ok:
        raise ClaimFalsified("component structure check failed")
    return 0


def cmd_eta_scan(args) -> int:
    rows = eta_scan(
        args.ell,
        args.p_max,
        family=args.H or "trivial",
        N=args.N or 1,
        seed=args.seed,
        processes=args.threads,
    )
    text = eta_scan_csv(rows)
    sys.stdout.write(text) if args.output == "-" else Path(args.output).write_text(text)
    return 0


def cmd_distribution(args) -> int:
    from .level import k_and_kprime

    H = _subgroup_from_args(args)
    primes = [int(x) for x in args.p_list.split(",")]
    out_rows = []
    for p in primes:
        G = build_graph(p, args.ell, H, seed=args.seed)
        S = eigenvalues(G.A, exact_limit=0)
        _, kp, _ = k_and_kprime(G.H, args.ell)
        rep = km_report(S, args.ell, kp)
        out_rows.append({"p": p, "n_vertices": G.n_vertices, "max_ks": rep.max_ks,
                         "buckets": [[b.theta, b.count, b.ks_distance] for b in rep.buckets]})
    text = json.dumps(out_rows, sort_keys=True) + "\n"
    sys.stdout.write(text) if args.output == "-" else Path(args.output).write_text(text)
    return 0


def cmd_dims(args) -> int:
    _require_instance(args)
    H = _subgroup_from_args(args)
    G = build_graph(args.p, args.ell, H, seed=args.seed)
    rep = check_dimensions(G)
    out = {
        "p": rep.p,
        "N": rep.N,
        "family": rep.family,
        "graph_side": rep.graph_side,
        "modular_side": rep.modular_side,
        "match": rep.match,
        "supported": rep.supported,
    }
    text = json.dumps(out, sort_keys=True) + "\n"
    sys.stdout.write(text) if args.output == "-" else Path(args.output).write_text(text)
    if rep.supported and not rep.match:
        raise ClaimFalsified("dimension identity failed")
    return 0


def cmd_export(args) -> int:
    data = json.loads(Path(args.input).read_text())
    A = np.array(data["adjacency"], dtype=np.int64)
    if args.format == "csv":
        text = "\n".join(",".join(str(int(x)) for x in row) for row in A) + "\n"
    elif args.format == "dot":
        lines = ["digraph G {"]
        for v in data["vertices"]:
            lines.append(f'  v{v["index"]} [label="j={v["j"]}\\nM={v["matrix"]}\\nw={v["weil_exp"]}"];')
        for j in range(len(A)):
            for i in range(len(A)):
                lines += [f"  v{j} -> v{i};"] * int(A[i, j])
        text = "\n".join(lines + ["}"]) + "\n"
    else:
        text = json.dumps(data, sort_keys=True, indent=1) + "\n"
    sys.stdout.write(text) if args.output == "-" else Path(args.output).write_text(text)
    return 0


def _common(sub, required: bool = True):
    sub.add_argument("--config", help="key=value config file; flags win")
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--output", "-o", default="-")
    sub.add_argument("--p", type=int)
    sub.add_argument("--l", "--ell", dest="ell", type=int)
    sub.add_argument("--N", type=int)
    sub.add_argument("--H", choices=FAMILY_NAMES)
    sub.add_argument("--H-gens", dest="H_gens",
                     help="semicolon-separated a,b,c,d matrices mod N")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="isograph",
                                     description="supersingular isogeny graphs with level structure")
    subs = parser.add_subparsers(dest="command", required=True)

    s = subs.add_parser("build", help="build G(p, l, H) and write it out")
    _common(s)
    s.add_argument("--format", choices=("json", "dot", "csv"), default="json")
    s.set_defaults(func=cmd_build)

    s = subs.add_parser("verify", help="run the verification battery")
    _common(s, required=False)
    s.add_argument("--input", help="check a stored graph JSON instead of building")
    s.add_argument("--exact-limit", dest="exact_limit", type=int, default=64)
    s.add_argument("--against-full", dest="against_full", action="store_true",
                   help="also compare with the quotient of the full-level graph")
    s.set_defaults(func=cmd_verify)

    s = subs.add_parser("spectrum", help="eigenvalues (exact charpoly when small)")
    _common(s)
    s.add_argument("--exact-limit", dest="exact_limit", type=int, default=64)
    s.set_defaults(func=cmd_spectrum)

    s = subs.add_parser("components", help="Weil components and their checks")
    _common(s)
    s.set_defaults(func=cmd_components)

    s = subs.add_parser("eta-scan", help="spectral gap over a range of primes (CSV)")
    s.add_argument("--l", "--ell", dest="ell", type=int, required=True)
    s.add_argument("--p-max", dest="p_max", type=int, required=True)
    s.add_argument("--N", type=int)
    s.add_argument("--H", choices=FAMILY_NAMES)
    s.add_argument("--threads", type=int, default=1)
    s.add_argument("--config")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--output", "-o", default="-")
    s.set_defaults(func=cmd_eta_scan)

    s = subs.add_parser("distribution", help="Kesten-McKay distances for a prime list")
    s.add_argument("--l", "--ell", dest="ell", type=int, required=True)
    s.add_argument("--p", dest="p_list", required=True, help="comma-separated primes")
    s.add_argument("--N", type=int)
    s.add_argument("--H", choices=FAMILY_NAMES)
    s.add_argument("--H-gens", dest="H_gens",
                   help="semicolon-separated a,b,c,d matrices mod N")
    s.add_argument("--config")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--output", "-o", default="-")
    s.set_defaults(func=cmd_distribution)

    s = subs.add_parser("dims", help="graph-side vs modular-side dimension identity")
    _common(s)
    s.set_defaults(func=cmd_dims)

    s = subs.add_parser("export", help="convert a stored graph JSON to dot/csv")
    s.add_argument("--input", required=True)
    s.add_argument("--format", choices=("json", "dot", "csv"), default="csv")
    s.add_argument("--output", "-o", default="-")
    s.set_defaults(func=cmd_export)

    args = parser.parse_args(argv)
    args = _apply_config(args, parser)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except ClaimFalsified as exc:
        print(f"FALSIFIED: {exc}", file=sys.stderr)
        return 1
    except InvariantBreach as exc:
        print(f"INVARIANT BREACH: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
