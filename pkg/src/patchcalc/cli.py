"""Command-line front end: extremal tables, patch power densities,
topological density convergence tables, validation of serialized objects,
wall construction, and minor / topological-minor searches.

Report subcommands (extremal, topo-density) write CSV tables and render a
matplotlib figure next to them.  All rationals are printed as "p/q"; exit
codes: 0 success, 2 validation or cap failure, 1 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction
from pathlib import Path

from .decomposition import (
    PathDecomposition,
    TreeDecomposition,
    validate_path_decomposition,
    validate_tree_decomposition,
)
from .errors import CapExceeded
from .extremal import ClassSpec, detect_period, ex_table, f_values
from .gio import from_graph6, to_graph6
from .graphs import Graph, complete, complete_bipartite, fan, grid, robertson_chain
from .minors import find_minor_model, find_topo_embedding
from .patches import Patch, power_density_limit
from .patchwork import (
    embed_patchwork,
    patchwork_from_json,
    validate_embedded_patchwork,
    validate_stitched,
)
from .topodensity import build_controlled_sequence, controlled_product_graph
from .walls import build_wall


def _fmt(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def load_graph(arg: str) -> Graph:
    """A named built-in graph, or a file containing one graph6 line."""
    named = {"K3": complete(3), "K4": complete(4), "K5": complete(5),
             "K33": complete_bipartite(3, 3)}
    if arg in named:
        return named[arg]
    if ":" in arg:
        kind, *params = arg.split(":")
        builders = {"grid": grid, "rc": robertson_chain, "fan": fan}
        if kind in builders:
            return builders[kind](*(int(p) for p in params))
    p = Path(arg)
    if p.is_file():
        return from_graph6(p.read_text().strip().splitlines()[0])
    raise ValueError(f"unknown graph {arg!r} (not a name and not a file)")


def _caps(pairs: list[str]) -> dict[str, int]:
    out = {}
    for pair in pairs or []:
        name, _, value = pair.partition("=")
        if not value:
            raise ValueError(f"cap override {pair!r} is not name=value")
        out[name] = int(value)
    return out


def _figure(path: Path, xs, series: dict[str, list[float]], xlabel: str,
            hline: float | None = None) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4))
    for label, ys in series.items():
        ax.plot(xs, ys, marker="o", markersize=3, label=label)
    if hline is not None:
        ax.axhline(hline, color="gray", linestyle="--", linewidth=1)
    ax.set_xlabel(xlabel)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def cmd_extremal(args) -> int:
    caps = _caps(args.cap_override)
    spec = ClassSpec(
        tuple(load_graph(f) for f in args.forbid),
        "minor" if args.relation == "minor" else "topo",
    )
    kwargs = {"cap": caps["extremal_n"]} if "extremal_n" in caps else {}
    table = ex_table(spec, args.nmax, **kwargs)
    delta = Fraction(args.delta)
    fvals = f_values(table, delta)
    report = detect_period(fvals, delta, first_n=table.rows[0][0])

    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    with open(outdir / "extremal.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["n", "ex", "f_numerator", "f_denominator", "witness_graph6"])
        for (n, ex, witness), f in zip(table.rows, fvals):
            w.writerow([n, ex, f.numerator, f.denominator, to_graph6(witness)])
    with open(outdir / "period.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["delta", "period", "onset", "residues"])
        if report is None:
            w.writerow([_fmt(delta), "", "", "inconclusive"])
        else:
            w.writerow([
                _fmt(delta), report.period, report.onset,
                ";".join(_fmt(r) for r in report.residues),
            ])
    _figure(
        outdir / "extremal.png",
        [n for n, _, _ in table.rows],
        {"ex(n)": [ex for _, ex, _ in table.rows],
         "f(n)": [float(f) for f in fvals]},
        "n",
    )
    if report is None:
        print("period: inconclusive")
    else:
        print(
            f"period P={report.period} onset M={report.onset} "
            f"residues {','.join(_fmt(r) for r in report.residues)}"
        )
    return 0


def cmd_patch_power(args) -> int:
    caps = _caps(args.cap_override)
    patch = Patch.from_json(Path(args.infile).read_text())
    kwargs = (
        {"horizon": caps["density_horizon"]} if "density_horizon" in caps else {}
    )
    print(_fmt(power_density_limit(patch, **kwargs)))
    return 0


def cmd_topo_density(args) -> int:
    delta = Fraction(args.delta)
    seq = build_controlled_sequence(delta, args.l)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    rows = []
    nverts = 0
    nedges = 0
    for k in range(args.l):
        patch = seq.patch(k)
        nverts += patch.n - (1 if k else 0)
        nedges += patch.m
        rows.append((k + 1, nverts, nedges, seq.prefix_sums[k]))
    # the full product is rebuilt once so its exact identities get asserted
    g, n, m, _ = controlled_product_graph(seq)
    assert (n, m) == (nverts, nedges)
    with open(outdir / "topo_density.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["l", "V", "E", "d_numerator", "d_denominator", "prefix_psi"])
        for l, nv, ne, psi in rows:
            w.writerow([l, nv, ne, ne, nv, _fmt(psi)])
    _figure(
        outdir / "topo_density.png",
        [r[0] for r in rows],
        {"d": [r[2] / r[1] for r in rows]},
        "l",
        hline=float(delta),
    )
    last = rows[-1]
    print(f"l={last[0]} V={last[1]} E={last[2]} d={last[2]}/{last[1]}")
    return 0


def cmd_validate(args) -> int:
    text = Path(args.infile).read_text()
    obj = json.loads(text)
    kind = obj.get("kind")
    violations: list[str]
    if kind == "patchwork":
        pw, host, placements, stitches = patchwork_from_json(text)
        if host is None or placements is None:
            violations = ["patchwork payload lacks host or placements"]
        else:
            violations = validate_embedded_patchwork(host, pw, placements)
            if not violations and stitches is not None:
                embedded = embed_patchwork(host, pw, placements)
                violations = validate_stitched(
                    embedded, {k: tuple(v) for k, v in stitches.items()}
                )
    elif kind == "tree_decomposition":
        g = Graph.from_json(json.dumps(obj["graph"]))
        td = TreeDecomposition.from_json(json.dumps(obj["decomposition"]))
        violations = validate_tree_decomposition(g, td)
    elif kind == "path_decomposition":
        g = Graph.from_json(json.dumps(obj["graph"]))
        pd = PathDecomposition(
            tuple(frozenset(bag) for bag in obj["bags"])
        )
        violations = validate_path_decomposition(g, pd)
    else:
        raise ValueError(f"unknown payload kind {kind!r}")
    print(json.dumps({"valid": not violations, "violations": violations}))
    return 0 if not violations else 2


def cmd_wall(args) -> int:
    w = build_wall(args.wall_l, args.wall_h, args.x0, args.y0)
    payload = {
        "graph6": to_graph6(w.graph),
        "coords": list(w.coords),
        "outer_cycle": list(w.outer_cycle),
        "bottom": list(w.bottom),
        "top": list(w.top),
        "left": list(w.left),
        "right": list(w.right),
        "corners": {
            "bottom_left": w.corner_bl,
            "bottom_right": w.corner_br,
            "top_left": w.corner_tl,
            "top_right": w.corner_tr,
        },
        "pegs_left": list(w.pegs_left),
        "pegs_right": list(w.pegs_right),
    }
    text = json.dumps(payload)
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    return 0


def cmd_minor(args, topological: bool) -> int:
    host = load_graph(args.host)
    pattern = load_graph(args.pattern)
    if topological:
        emb = find_topo_embedding(host, pattern)
        if emb is None:
            print(json.dumps({"found": False}))
        else:
            print(json.dumps({
                "found": True,
                "vertex_map": {str(k): v for k, v in sorted(emb.vertex_map.items())},
                "edge_paths": {
                    f"{u},{v}": list(p)
                    for (u, v), p in sorted(emb.edge_paths.items())
                },
            }))
    else:
        model = find_minor_model(host, pattern)
        if model is None:
            print(json.dumps({"found": False}))
        else:
            print(json.dumps({
                "found": True,
                "branch_sets": {
                    str(v): sorted(bs)
                    for v, bs in sorted(model.branch_sets.items())
                },
            }))
    return 0


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # usage errors exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(1)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="patchcalc")
    p.add_argument("--threads", type=int, default=None,
                   help="accepted for compatibility; execution is sequential")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--cap-override", action="append", default=[],
                        metavar="NAME=VALUE")
        sp.add_argument("--threads", type=int, default=None)

    sp = sub.add_parser("extremal")
    sp.add_argument("--forbid", action="append", required=True)
    sp.add_argument("--relation", choices=["minor", "topo"], default="minor")
    sp.add_argument("--nmax", type=int, required=True)
    sp.add_argument("--delta", required=True)
    sp.add_argument("--out", default=".")
    common(sp)

    sp = sub.add_parser("patch-power")
    sp.add_argument("--in", dest="infile", required=True)
    common(sp)

    sp = sub.add_parser("topo-density")
    sp.add_argument("--delta", required=True)
    sp.add_argument("--l", type=int, required=True)
    sp.add_argument("--out", default=".")
    common(sp)

    sp = sub.add_parser("validate")
    sp.add_argument("--in", dest="infile", required=True)
    common(sp)

    sp = sub.add_parser("wall")
    sp.add_argument("--l", dest="wall_l", type=int, required=True)
    sp.add_argument("--h", dest="wall_h", type=int, required=True)
    sp.add_argument("--x0", type=int, default=0)
    sp.add_argument("--y0", type=int, default=0)
    sp.add_argument("--out", default=None)
    common(sp)

    for name in ("minor", "topo-minor"):
        sp = sub.add_parser(name)
        sp.add_argument("host")
        sp.add_argument("pattern")
        common(sp)

    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "extremal":
            return cmd_extremal(args)
        if args.command == "patch-power":
            return cmd_patch_power(args)
        if args.command == "topo-density":
            return cmd_topo_density(args)
        if args.command == "validate":
            return cmd_validate(args)
        if args.command == "wall":
            return cmd_wall(args)
        if args.command == "minor":
            return cmd_minor(args, topological=False)
        if args.command == "topo-minor":
            return cmd_minor(args, topological=True)
    except CapExceeded as exc:
        print(f"error: cap {exc.cap_name} exceeded "
              f"(limit {exc.limit}, requested {exc.actual})", file=sys.stderr)
        return 2
    except (ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    raise AssertionError("unreachable")


if __name__ == "__main__":
    raise SystemExit(main())
