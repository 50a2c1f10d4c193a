"""Command-line interface: instance generation, encoding dumps, experiment
runs, method matrices, and landscape scans."""

from __future__ import annotations

import argparse
import json
import sys

from tspvqa import core, metrics, runner
from tspvqa.encodings import EncodingScheme, SchemeKind, build_polynomial


def _cmd_gen_instance(args) -> int:
    inst = core.generate_instance(args.n, args.seed)
    core.save_instance(inst, args.out)
    print(f"wrote n={args.n} instance (seed {args.seed}) to {args.out}")
    return 0


def _cmd_encode(args) -> int:
    inst = core.load_instance(args.instance)
    kind = SchemeKind("permutation" if args.scheme == "perm" else args.scheme)
    if kind is SchemeKind.PERMUTATION:
        print("the permutation encoding has no polynomial; nothing to dump", file=sys.stderr)
        return 2
    penalty = args.penalty if args.penalty is not None else runner.DEFAULT_PENALTIES[kind]
    scheme = EncodingScheme(kind=kind, n=inst.n, penalty=penalty)
    poly = build_polynomial(scheme, inst)
    with open(args.out, "w") as fh:
        fh.write(poly.dump())
    print(f"wrote {len(poly.terms)} terms over {poly.num_vars} variables to {args.out}")
    return 0


def _cmd_run(args) -> int:
    with open(args.config) as fh:
        config = runner.RunConfig.from_dict(json.load(fh))
    record = runner.run_experiment(config)
    agg = record["aggregate"]
    print(f"{config.tag()}: r_f={agg['r_f_mean']:.4f}+-{agg['r_f_std']:.4f} "
          f"r_ell={agg['r_ell_mean']:.4f}+-{agg['r_ell_std']:.4f} "
          f"failures={agg['failures']}")
    return 0


def _cmd_matrix(args) -> int:
    with open(args.config) as fh:
        matrix_config = json.load(fh)
    records, errors = runner.run_matrix(matrix_config)
    print(f"{len(records)} cells done, {len(errors)} failed")
    for err in errors:
        print(f"  failed: {err['scheme']}/{err['algorithm']} on {err['instance']}: {err['error']}",
              file=sys.stderr)
    return 0 if records or not errors else 1


def _cmd_landscape(args) -> int:
    with open(args.record) as fh:
        record = json.load(fh)
    axes = None
    if args.axes:
        k1, k2 = args.axes.split(",")
        axes = (int(k1), int(k2))
    axes, grid, matrix = runner.scan_landscape_from_record(
        record, restart=args.restart, axes=axes, axes_seed=args.axes_seed,
        resolution=args.resolution,
    )
    metrics.write_landscape_csv(args.out, grid, matrix)
    print(f"scanned axes {axes} at {args.resolution}x{args.resolution} into {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tspvqa",
                                     description="TSP encoding benchmarks under simulated VQE/QAOA")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-instance", help="generate a random instance file")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_gen_instance)

    p = sub.add_parser("encode", help="dump an encoding's binary polynomial")
    p.add_argument("--scheme", choices=["qubo", "hobo", "perm"], required=True)
    p.add_argument("--instance", required=True)
    p.add_argument("--penalty", type=float, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_encode)

    p = sub.add_parser("run", help="run one experiment config")
    p.add_argument("--config", required=True)
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("matrix", help="run a scheme x algorithm matrix")
    p.add_argument("--config", required=True)
    p.set_defaults(func=_cmd_matrix)

    p = sub.add_parser("landscape", help="scan a 2-parameter energy landscape of a stored run")
    p.add_argument("--record", required=True)
    p.add_argument("--restart", type=int, default=0)
    p.add_argument("--axes", default=None, help="k1,k2 (explicit parameter indices)")
    p.add_argument("--axes-seed", type=int, default=None)
    p.add_argument("--resolution", type=int, default=64)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_landscape)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
