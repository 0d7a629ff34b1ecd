"""Command line: ``qcnmf gen | factorize | bench | embed``."""

import argparse
import json
import logging
import sys

import numpy as np

from . import bench as benchmod
from .builders import BuildMode
from .chimera import ChimeraSpec, qubit_curve
from .data import make_blobs, read_csv, write_csv, write_labels
from .driver import SOLVERS, FactorizationConfig, run
from .encoding import EncodingScheme
from .errors import CapacityError, ConfigError, ParseError, QcnmfError

log = logging.getLogger("qcnmf")

EXIT_OK = 0
EXIT_PARSE = 3
EXIT_CONFIG = 4
EXIT_CAPACITY = 5
EXIT_IO = 6


def _matrix(a):
    a = np.asarray(a)
    return {"shape": list(a.shape), "data": a.ravel().tolist()}


def _solve_info(res):
    if res is None:
        return None
    return {"energy": res.energy, "evaluations": res.evaluations,
            "restarts_used": res.restarts_used, "seed": res.seed,
            "wall_time_ms": res.wall_time * 1e3}


def result_document(result, cfg, x, input_path):
    return {
        "config": dict(cfg.to_dict(), input=str(input_path)),
        "data_shape": {"dims": x.shape[0], "points": x.shape[1]},
        "w": _matrix(result.w),
        "g": _matrix(result.g),
        "labels": [int(v) for v in result.labels],
        "centroids": _matrix(result.centroids),
        "objective_trace": [{"step": s, "objective": o, "penalty_g": pg, "penalty_w": pw}
                            for s, o, pg, pw in result.objective_trace],
        "deviations": result.sum_deviations(),
        "g_solve": _solve_info(result.g_solve),
        "w_solve": _solve_info(result.w_solve),
        "timings_ms": {k: v * 1e3 for k, v in result.timings.items()},
    }


def cmd_gen(args):
    data, labels = make_blobs(args.points, args.dims, args.clusters, args.spread, args.seed,
                              args.min_separation)
    write_csv(args.out, data)
    write_labels(args.out + ".labels", labels)
    log.info("wrote %d points to %s", args.points, args.out)


def cmd_factorize(args):
    x = read_csv(args.input).T
    cfg = FactorizationConfig(
        k=args.k, scheme=EncodingScheme(args.alpha, args.bits), penalty_weight=args.lam,
        mode=BuildMode(args.mode), solver=args.solver, iterations=args.iterations,
        seed=args.seed, sweeps=args.sweeps, restarts=args.restarts)
    on_qubo = None
    if args.dump_qubo:
        def on_qubo(label, model):
            model.save(f"{args.dump_qubo}.{label}.qubo")
    result = run(x, cfg, on_qubo=on_qubo)
    doc = result_document(result, cfg, x, args.input)
    with open(args.out, "w") as fh:
        json.dump(doc, fh, indent=1)
    log.info("objective %.6g, labels %s", result.objective, doc["labels"])


def cmd_bench(args):
    records = benchmod.run_bench(sizes=args.sizes, dims=args.dims, k=args.k,
                                 repeats=args.repeats, seed=args.seed, sweeps=args.sweeps,
                                 restarts=args.restarts, max_iters=args.max_iters,
                                 max_reals=args.max_reals)
    benchmod.write_bench_csv(args.out, records)


def cmd_embed(args):
    spec = ChimeraSpec.parse(args.grid)
    rows = qubit_curve(spec, args.bits, args.reals_max)
    lines = ["reals,logical_bits,physical_qubits,feasible"]
    lines += [f"{r},{lb},{pq},{str(f).lower()}" for r, lb, pq, f in rows]
    text = "\n".join(lines) + "\n"
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w") as fh:
            fh.write(text)


def build_parser():
    p = argparse.ArgumentParser(prog="qcnmf", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write synthetic Gaussian blobs as CSV")
    g.add_argument("--points", type=int, default=20)
    g.add_argument("--dims", type=int, default=2)
    g.add_argument("--clusters", type=int, default=2)
    g.add_argument("--spread", type=float, default=0.05)
    g.add_argument("--min-separation", type=float, default=0.0)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_gen)

    f = sub.add_parser("factorize", help="alternating QUBO Convex-NMF of a CSV data set")
    f.add_argument("--input", required=True, help="CSV, one observation per row")
    f.add_argument("--k", type=int, default=2)
    f.add_argument("--bits", type=int, default=9, help="highest bit exponent B (B+1 bits/value)")
    f.add_argument("--alpha", type=float, default=0.001)
    f.add_argument("--lambda", dest="lam", type=float, default=1.0)
    f.add_argument("--solver", choices=SOLVERS, default="sa")
    f.add_argument("--iterations", type=int, default=1)
    f.add_argument("--mode", choices=[m.value for m in BuildMode], default="exact")
    f.add_argument("--sweeps", type=int, default=None)
    f.add_argument("--restarts", type=int, default=None)
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--dump-qubo", metavar="PREFIX",
                   help="write each built QUBO to PREFIX.<g0|w0|...>.qubo")
    f.add_argument("--out", required=True)
    f.set_defaults(func=cmd_factorize)

    b = sub.add_parser("bench", help="time the annealing path against the classical baseline")
    b.add_argument("--sizes", type=lambda s: [int(v) for v in s.split(",")],
                   default=list(benchmod.DEFAULT_SIZES), help="comma-separated point counts")
    b.add_argument("--dims", type=int, default=2)
    b.add_argument("--k", type=int, default=2)
    b.add_argument("--repeats", type=int, default=1)
    b.add_argument("--sweeps", type=int, default=None)
    b.add_argument("--restarts", type=int, default=None)
    b.add_argument("--max-iters", type=int, default=500)
    b.add_argument("--max-reals", type=int, default=65)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--out", required=True)
    b.set_defaults(func=cmd_bench)

    e = sub.add_parser("embed", help="Chimera clique-embedding qubit curve as CSV")
    e.add_argument("--reals-max", type=int, default=70)
    e.add_argument("--bits", type=int, default=10, help="bits per real value")
    e.add_argument("--grid", default="16x16x4", help="ROWSxCOLSxSHORE")
    e.add_argument("--seed", type=int, default=0, help="accepted for uniformity; unused")
    e.add_argument("--out", default="-")
    e.set_defaults(func=cmd_embed)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        args.func(args)
    except ParseError as exc:
        log.error("parse error: %s", exc)
        return EXIT_PARSE
    except CapacityError as exc:
        log.error("capacity error: %s", exc)
        return EXIT_CAPACITY
    except (ConfigError, QcnmfError) as exc:
        log.error("config error: %s", exc)
        return EXIT_CONFIG
    except OSError as exc:
        log.error("I/O error: %s", exc)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
