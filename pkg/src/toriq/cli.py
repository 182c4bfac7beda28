"""Command-line front end: build, verify, distance, simulate, export, plot.

Exit codes:
    0  success
    2  usage error (bad flags)
    3  invariant or verification failure (the violated contract is named)
    4  guard violation (enumeration budget, probability range)
    5  file or format error
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from toriq import qalist
from toriq.decode import DecoderConfig
from toriq.gf import GF2m
from toriq.lift import BinaryCssPair, CssPairQ, LiftError, lift_pair, quantum_dimension
from toriq.qmatrix import (
    SparseQMatrix,
    check_graph_cycle_basis,
    graph_of,
    orthogonality_violation,
    product_over_cycle,
)
from toriq.toric import (
    ToricLayout,
    assemble_code,
    big_cycles,
    brute_force_distance,
    build_skeleton,
    minimal_cycles,
)

EXIT_OK = 0
EXIT_INVARIANT = 3
EXIT_GUARD = 4
EXIT_FORMAT = 5


# -- verification -------------------------------------------------------------


def verify_checks(pair: CssPairQ, meta: dict) -> list[tuple[str, bool, str]]:
    """Run the invariant suite; returns (name, passed, detail) per check."""
    results: list[tuple[str, bool, str]] = []

    def run(name, fn):
        try:
            detail = fn()
            results.append((name, True, detail or ""))
        except Exception as exc:
            results.append((name, False, str(exc)))

    def column_weights():
        for label, M in (("hx", pair.HXq), ("hz", pair.HZq)):
            for j in range(M.cols):
                if M.col_degree(j) != 2:
                    raise LiftError(f"{label} column {j} has weight {M.col_degree(j)}")
        return f"all {pair.HXq.cols} columns have weight 2 on both sides"

    def orthogonality():
        bad = orthogonality_violation(pair.HXq, pair.HZq)
        if bad is not None:
            raise LiftError(f"hx . hz^T != 0 at row pair {bad}")
        return "hx . hz^T = 0"

    def cycle_products():
        gx = graph_of(pair.HXq)
        basis = check_graph_cycle_basis(gx)
        for cyc in basis:
            if product_over_cycle(gx, cyc) != 1:
                raise LiftError(f"basis cycle through variables {cyc.vars} has product != 1")
        return f"{len(basis)} fundamental cycles all have product 1"

    run("column-weight-2", column_weights)
    run("orthogonality", orthogonality)
    run("cycle-basis-products", cycle_products)

    if meta.get("construction") == "extended-toric":
        n = meta["n"]
        layout = ToricLayout(n)

        def toric_shape():
            want = (n * n, 2 * n * n)
            for label, M in (("hx", pair.HXq), ("hz", pair.HZq)):
                if M.shape != want:
                    raise LiftError(f"{label} has shape {M.shape}, expected {want}")
            return f"both sides are {want[0]}x{want[1]}"

        def side_cycles(side, H):
            def check():
                g = graph_of(H)
                fams = [("minimal", minimal_cycles(layout, side)),
                        ("big", big_cycles(layout, side))]
                for fam, cycles in fams:
                    for cyc in cycles:
                        if product_over_cycle(g, cyc) != 1:
                            raise LiftError(
                                f"{fam} cycle through variables {cyc.vars} has product != 1")
                return f"all {n * n} minimal and {2 * n} big cycles have product 1"
            return check

        def ranks():
            rx, rz = pair.HXq.rank(), pair.HZq.rank()
            if rx != n * n - 1 or rz != n * n - 1:
                raise LiftError(f"ranks ({rx}, {rz}) != n^2-1 = {n * n - 1}")
            return f"rank hx = rank hz = {rx}"

        def qdim():
            k = quantum_dimension(pair)
            if k != 2:
                raise LiftError(f"q-ary quantum dimension {k} != 2")
            return "q-ary quantum dimension = 2"

        run("toric-shape", toric_shape)
        run("x-side-cycle-products", side_cycles("X", pair.HXq))
        run("z-side-cycle-products", side_cycles("Z", pair.HZq))
        run("rank-n2-minus-1", ranks)
        run("quantum-dimension-2", qdim)
    return results


# -- subcommands --------------------------------------------------------------


def cmd_build(args) -> int:
    try:
        if args.skeleton:
            skeleton = _load_skeleton(args.skeleton)
            pair = lift_pair(skeleton, args.m, args.seed)
            construction, n = "lifted-generic", None
            kq = quantum_dimension(pair)
            n_qubits = args.m * pair.n
            dim = args.m * kq
        else:
            if args.n is None:
                print("error: provide --n or --skeleton", file=sys.stderr)
                return 2
            skeleton, _ = build_skeleton(args.n)
            pair = lift_pair(skeleton, args.m, args.seed)
            assemble_code(pair, args.n)  # full logical/dimension validation
            construction, n = "extended-toric", args.n
            n_qubits = 2 * args.m * args.n * args.n
            dim = 2 * args.m
    except (LiftError, ValueError) as exc:
        print(f"build failed: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except OSError as exc:
        print(f"build failed: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    qalist.save_bundle(args.out, pair, construction, n=n)
    rate = Fraction(dim, n_qubits)
    print(f"n_qubits: {n_qubits}")
    print(f"dimension: {dim}")
    print(f"rate: {rate.numerator}/{rate.denominator}")
    print(f"bundle: {args.out}")
    return EXIT_OK


def _load_skeleton(paths: list[str]) -> BinaryCssPair:
    """Skeleton from a bundle directory or an explicit (hx, hz) file pair."""
    if len(paths) == 1 and Path(paths[0]).is_dir():
        bdir = Path(paths[0])
        hx = qalist.load_qalist(bdir / qalist.HX_NAME)
        hz = qalist.load_qalist(bdir / qalist.HZ_NAME)
    elif len(paths) == 2:
        hx = qalist.load_qalist(paths[0])
        hz = qalist.load_qalist(paths[1])
    else:
        raise LiftError(
            "--skeleton needs a bundle directory or two alist paths (hx hz)")
    if hx.field.q != 2 or hz.field.q != 2:
        raise LiftError("skeleton alist files must be over GF(2)")
    return BinaryCssPair(HX=hx, HZ=hz)


def cmd_verify(args) -> int:
    try:
        pair, meta = qalist.load_bundle(args.bundle)
    except (qalist.FormatError, OSError, LiftError) as exc:
        print(f"cannot load bundle: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    results = verify_checks(pair, meta)
    if args.json:
        payload = {"ok": all(ok for _, ok, _ in results),
                   "checks": [{"name": n, "pass": ok, "detail": d}
                              for n, ok, d in results]}
        print(json.dumps(payload, indent=2))
    else:
        for name, ok, detail in results:
            status = "PASS" if ok else "FAIL"
            print(f"{status} {name}" + (f": {detail}" if detail else ""))
    return EXIT_OK if all(ok for _, ok, _ in results) else EXIT_INVARIANT


def cmd_distance(args) -> int:
    try:
        pair, _ = qalist.load_bundle(args.bundle)
    except (qalist.FormatError, OSError, LiftError) as exc:
        print(f"cannot load bundle: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    try:
        d = brute_force_distance(pair, args.side)
    except ValueError as exc:
        print(f"distance refused: {exc}", file=sys.stderr)
        return EXIT_GUARD
    print(d)
    return EXIT_OK


def cmd_simulate(args) -> int:
    from toriq.sim import SimConfig, run_sweep, write_sweep

    try:
        pair, meta = qalist.load_bundle(args.bundle)
    except (qalist.FormatError, OSError, LiftError) as exc:
        print(f"cannot load bundle: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    if meta.get("construction") != "extended-toric":
        print("simulate requires an extended-toric bundle (logical operators "
              "come from the torus big cycles)", file=sys.stderr)
        return EXIT_GUARD
    try:
        code = assemble_code(pair, meta["n"])
        p_grid = [float(tok) for tok in args.p_grid.split(",") if tok]
        cfg = SimConfig(n=code.n, m=code.m, code_seed=code.seed, p_grid=p_grid,
                        trials=args.trials, master_seed=args.seed,
                        decoder=DecoderConfig(max_iters=args.max_iters))
    except (LiftError, ValueError) as exc:
        print(f"simulate refused: {exc}", file=sys.stderr)
        return EXIT_GUARD
    rows = run_sweep(code, cfg)
    out_csv = Path(args.out)
    out_meta = out_csv.with_suffix(".meta.json")
    write_sweep(out_csv, out_meta, code, cfg, rows)
    print(f"csv: {out_csv}")
    print(f"metadata: {out_meta}")
    if not args.no_figure:
        from toriq.plotting import render_sweep_figure

        out_fig = out_csv.with_suffix(".png")
        render_sweep_figure([out_csv], out_fig)
        print(f"figure: {out_fig}")
    return EXIT_OK


def cmd_export(args) -> int:
    from toriq.expand import expand_pair

    try:
        pair, _ = qalist.load_bundle(args.bundle)
    except (qalist.FormatError, OSError, LiftError) as exc:
        print(f"cannot load bundle: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    expanded = expand_pair(pair)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "hx_bin.alist").write_text(qalist.dump_binary_alist(expanded.HXb))
    (out / "hz_bin.alist").write_text(qalist.dump_binary_alist(expanded.HZb))
    print(f"binary pair: {out / 'hx_bin.alist'}, {out / 'hz_bin.alist'}")
    return EXIT_OK


def cmd_plot(args) -> int:
    from toriq.plotting import render_sweep_figure

    try:
        render_sweep_figure(args.csv, args.out, title=args.title)
    except (OSError, KeyError, ValueError) as exc:
        print(f"plot failed: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    print(f"figure: {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="toriq",
        description="Q-ary CSS code construction and evaluation toolkit",
        epilog="exit codes: 0 ok, 2 usage, 3 invariant failure, 4 guard violation, 5 format error",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="construct a code bundle")
    p.add_argument("--n", type=int, help="toric half-period (>= 2)")
    p.add_argument("--m", type=int, required=True, help="extension degree of GF(2^m)")
    p.add_argument("--seed", type=int, required=True, help="labeling seed")
    p.add_argument("--skeleton", nargs="+", metavar="PATH",
                   help="lift a generic GF(2) skeleton: bundle dir or two alist files (hx hz)")
    p.add_argument("--out", required=True, help="output bundle directory")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("verify", help="run the invariant suite on a bundle")
    p.add_argument("bundle")
    p.add_argument("--json", action="store_true", help="machine-readable report")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("distance", help="exact quantum distance by enumeration")
    p.add_argument("bundle")
    p.add_argument("--side", choices=("X", "Z"), required=True)
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("simulate", help="depolarizing-channel Monte Carlo sweep")
    p.add_argument("bundle")
    p.add_argument("--p-grid", required=True, help="comma-separated depolarizing probabilities")
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True, help="master seed for all trials")
    p.add_argument("--max-iters", type=int, default=100)
    p.add_argument("--out", required=True, help="output CSV path")
    p.add_argument("--no-figure", action="store_true", help="skip the PNG next to the CSV")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("export", help="binary expansion as classic alist files")
    p.add_argument("bundle")
    p.add_argument("--binary", action="store_true", default=True,
                   help="emit the GF(2) expansion (default and only mode)")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("plot", help="render figures from sweep CSVs")
    p.add_argument("csv", nargs="+", help="sweep CSV files")
    p.add_argument("--out", required=True, help="output image path")
    p.add_argument("--title", default=None)
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
