"""Command line interface.

Four subcommands: generate (sample a trace set to JSONL), likelihood (score
traces against seeds), reconstruct (run a registry algorithm on a trace
file), and bench (Monte Carlo success estimation or trace-complexity
search, directly or from a manifest).

Exit codes: 0 success, 2 bad configuration or arguments, 3 file or format
problems, 4 trace-complexity search failed to bracket the target rate.
"""

import argparse
import sys

from . import bench as bench_mod
from . import channels as ch
from . import exact
from . import io as io_mod
from . import likelihood as lk
from .core import Alphabet, ModelParams, RandomStream
from .errors import (
    BracketingError,
    ConfigError,
    FormatError,
    TracekitError,
)

_KIND_LINES = "\n".join(f"  {k}" for k in ch.KINDS)
_ALGO_LINES = "\n".join(f"  {a}" for a in bench_mod.ALGORITHM_IDS)

EPILOG = f"""model kinds:
{_KIND_LINES}

algorithms:
{_ALGO_LINES}
"""


def _add_model_args(p: argparse.ArgumentParser, required: bool = True) -> None:
    g = p.add_argument_group("model")
    g.add_argument("--kind", choices=ch.KINDS, required=required, help="channel model kind")
    g.add_argument("--alphabet", default="ACGT", help="ordered alphabet symbols (default ACGT)")
    g.add_argument("-t", "--extension-budget", dest="t", type=int, default=None,
                   help="max symbols appended per extension step")
    g.add_argument("--epsilon", type=float, default=None, help="per-symbol mutation rate")
    g.add_argument("--q", type=float, default=None, help="per-symbol deletion rate")
    g.add_argument("--multi-seed", type=int, default=None,
                   help="size of a uniform seed mixture (single-seed kinds)")


def _add_seed_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("seeds")
    g.add_argument("--seed", action="append", default=[], metavar="S",
                   help="seed string (repeat for mixtures or concatenation pairs)")
    g.add_argument("--seeds-file", default=None, metavar="FASTA",
                   help="read seeds from a FASTA file")
    g.add_argument("--seed-v", action="append", default=[], metavar="S", help="vdj: v-group seed")
    g.add_argument("--seed-d", action="append", default=[], metavar="S", help="vdj: d-group seed")
    g.add_argument("--seed-j", action="append", default=[], metavar="S", help="vdj: j-group seed")


def _build_model(args) -> ch.ModelSpec:
    params = ModelParams(t=args.t, epsilon=args.epsilon, q=args.q)
    multi = args.multi_seed
    if multi is None and args.kind not in (ch.CONCAT2, ch.VDJ):
        n_seeds = _count_plain_seeds(args)
        if n_seeds > 1:
            multi = n_seeds
    if args.kind == ch.VDJ and multi is None:
        groups = _vdj_groups(args)
        if groups is not None and any(len(g) > 1 for g in groups):
            multi = tuple(len(g) for g in groups)
    return ch.ModelSpec(
        kind=args.kind,
        params=params,
        alphabet=Alphabet(args.alphabet),
        multi_seed=multi,
    )


def _count_plain_seeds(args) -> int:
    n = len(args.seed)
    if args.seeds_file:
        n += len(io_mod.read_seeds(args.seeds_file))
    return n


def _vdj_groups(args):
    if args.seed_v or args.seed_d or args.seed_j:
        if not (args.seed_v and args.seed_d and args.seed_j):
            raise ConfigError("vdj needs at least one seed in each of --seed-v/--seed-d/--seed-j")
        return (tuple(args.seed_v), tuple(args.seed_d), tuple(args.seed_j))
    return None


def _gather_seeds(args, model: ch.ModelSpec):
    if model.kind == ch.VDJ:
        groups = _vdj_groups(args)
        if groups is None:
            raise ConfigError("vdj seeds come from --seed-v/--seed-d/--seed-j")
        return groups
    seeds = list(args.seed)
    if args.seeds_file:
        seeds.extend(seq for _, seq in io_mod.read_seeds(args.seeds_file, model.alphabet))
    if not seeds:
        raise ConfigError("no seeds given (--seed or --seeds-file)")
    if model.kind == ch.CONCAT2:
        if len(seeds) != 2:
            raise ConfigError("the concatenation kind takes exactly two --seed values, in order")
        return (seeds[0], seeds[1])
    return seeds[0] if len(seeds) == 1 else tuple(seeds)


def _infer_length(traces, model: ch.ModelSpec) -> int:
    """Best-effort seed length from trace lengths; explicit --length wins."""
    if not traces:
        raise ConfigError("cannot infer a seed length from zero traces")
    lengths = {len(tr) for tr in traces}
    if model.preserves_length:
        if len(lengths) != 1:
            raise ConfigError("traces of a length-preserving model must share one length")
        return lengths.pop()
    t = model.params.t or 0
    if model.kind in (ch.SUFFIX_EXTEND_TRIM_SUFFIX, ch.SUFFIX_EXTEND_MUTATE_TRIM_SUFFIX):
        return max(0, max(lengths) - t)
    if model.kind == ch.EXTEND_MUTATE_TRIM:
        return max(0, max(lengths) - 2 * t)
    raise ConfigError(f"seed length cannot be inferred for {model.kind}; pass --length")


def cmd_generate(args) -> int:
    if args.manifest:
        manifest = io_mod.load_manifest(args.manifest)
        if manifest.task.get("type") != "generate":
            raise ConfigError("manifest task is not a generate task")
        ts = io_mod.run_manifest(manifest)
        out = args.output or manifest.output
    else:
        if args.kind is None:
            raise ConfigError("--kind is required without a manifest")
        model = _build_model(args)
        seeds = _gather_seeds(args, model)
        rng = RandomStream(master_seed=args.master_seed)
        ts = ch.generate_trace_set(model, seeds, args.count, rng)
        out = args.output
    if out is None:
        raise ConfigError("generate needs -o/--output (or a manifest output)")
    io_mod.write_traces(out, ts)
    print(f"wrote {len(ts)} traces to {out}")
    return 0


def cmd_likelihood(args) -> int:
    if args.traces:
        tf = io_mod.read_traces(args.traces)
        model = tf.model
        traces = list(tf.traces)
        if args.kind is not None:
            print("warning: overriding the trace file's model from the command line",
                  file=sys.stderr)
            model = _build_model(args)
    else:
        if not args.trace:
            raise ConfigError("no traces given (--traces file or --trace)")
        if args.kind is None:
            raise ConfigError("--kind is required with literal --trace input")
        model = _build_model(args)
        traces = list(args.trace)
    seeds = _gather_seeds(args, model)
    if args.per_trace:
        for tr in traces:
            print(f"{lk.lp_trace(tr, seeds, model):.12g}")
    total = lk.lp_trace_set(traces, seeds, model)
    print(f"{total:.12g}")
    return 0


def cmd_reconstruct(args) -> int:
    tf = io_mod.read_traces(args.traces)
    model = tf.model
    if args.kind is not None:
        print("warning: overriding the trace file's model from the command line",
              file=sys.stderr)
        model = _build_model(args)
    traces = list(tf.traces)

    options = {}
    if args.k is not None:
        options["k"] = args.k
    if args.w is not None:
        options["w"] = args.w
    if args.M is not None:
        options["M"] = args.M
    if args.budget is not None:
        options["budget"] = args.budget
    if args.d_max is not None:
        options["d_max"] = args.d_max
    if args.inner_reconstructor is not None:
        options["reconstructor"] = args.inner_reconstructor
    if args.candidates_file is not None:
        options["candidates"] = [
            seq for _, seq in io_mod.read_seeds(args.candidates_file, model.alphabet)
        ]
    algorithm = bench_mod.make_algorithm(args.algorithm, model=model, **options)
    if args.amplify is not None:
        algorithm = bench_mod.amplify(algorithm, args.amplify)

    if args.length is not None:
        n = args.length[0] if len(args.length) == 1 else tuple(args.length)
    elif model.kind == ch.DELETION:
        raise ConfigError("the deletion kind cannot infer the seed length; pass --length")
    elif model.kind in (ch.CONCAT2, ch.VDJ):
        raise ConfigError(f"{model.kind} reconstruction needs an explicit --length")
    else:
        n = _infer_length(traces, model)

    result = algorithm.reconstruct(traces, n)
    if isinstance(result, (set, frozenset)):
        out_seeds = tuple(sorted(result, key=model.alphabet.sort_key))
        for s in out_seeds:
            print(s)
    elif isinstance(result, tuple):
        for part in result:
            print(part if isinstance(part, str) else " ".join(part))
        out_seeds = result
    else:
        print(result)
        out_seeds = result
    try:
        lp = lk.lp_trace_set(traces, out_seeds, model)
        print(f"log-likelihood {lp:.12g}")
    except TracekitError:
        pass  # set-valued output under a mismatched arity has no single score
    return 0


def cmd_bench(args) -> int:
    if args.manifest:
        manifest = io_mod.load_manifest(args.manifest)
        if manifest.task.get("type") not in ("bench", "complexity"):
            raise ConfigError("manifest task is not a bench or complexity task")
        result = io_mod.run_manifest(manifest)
        out = args.output or manifest.output
    else:
        if args.kind is None:
            raise ConfigError("--kind is required without a manifest")
        if args.algorithm is None:
            raise ConfigError("--algorithm is required without a manifest")
        model = _build_model(args)
        options = {}
        if args.k is not None:
            options["k"] = args.k
        if args.w is not None:
            options["w"] = args.w
        if args.M is not None:
            options["M"] = args.M
        if args.budget is not None:
            options["budget"] = args.budget
        if args.candidates_file is not None:
            options["candidates"] = [
                seq for _, seq in io_mod.read_seeds(args.candidates_file, model.alphabet)
            ]
        algorithm = bench_mod.make_algorithm(args.algorithm, model=model, **options)
        if args.amplify is not None:
            algorithm = bench_mod.amplify(algorithm, args.amplify)
        if args.random_length is not None:
            source = bench_mod.RandomSeeds(args.random_length, model, count=args.random_count)
        else:
            source = bench_mod.FixedSeeds(_gather_seeds(args, model), model)
        rng = RandomStream(master_seed=args.master_seed)
        n = None if not args.length else args.length[0]
        if args.complexity:
            result = bench_mod.estimate_trace_complexity(
                algorithm, source, model, rng,
                target_rate=args.target_rate, trials=args.trials, t_cap=args.t_cap, n=n,
            )
        else:
            result = bench_mod.estimate_success(
                algorithm, source, model, args.count, args.trials, rng,
                n=n, target_rate=args.target_rate if args.target_rate_set else None,
            )
        out = args.output

    if out:
        io_mod.write_report_json(out, result)
        print(f"wrote report to {out}")
    if args.csv:
        io_mod.write_report_csv(args.csv, [result])
        print(f"wrote CSV to {args.csv}")
    if not out and not args.csv:
        import json

        print(json.dumps(io_mod.report_to_dict(result), indent=2, sort_keys=True))
    if isinstance(result, bench_mod.BenchReport) and result.meets_target is False:
        print(
            f"note: wilson lower bound {result.wilson_low:.3f} is below "
            f"the target rate {result.target_rate}",
            file=sys.stderr,
        )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tracekit",
        description="Trace generation, exact likelihoods, and reconstruction benchmarks.",
        epilog=EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("generate", help="sample a trace set to a JSONL file",
                           epilog=EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    _add_model_args(p_gen, required=False)
    _add_seed_args(p_gen)
    p_gen.add_argument("-T", "--count", type=int, default=100, help="number of traces")
    p_gen.add_argument("--master-seed", type=int, default=0)
    p_gen.add_argument("-o", "--output", default=None, metavar="JSONL")
    p_gen.add_argument("--manifest", default=None, metavar="JSON",
                       help="run a generate-task manifest instead of flags")
    p_gen.set_defaults(func=cmd_generate)

    p_lik = sub.add_parser("likelihood", help="log-likelihood of traces given seeds",
                           epilog=EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    _add_model_args(p_lik, required=False)
    _add_seed_args(p_lik)
    p_lik.add_argument("--traces", default=None, metavar="JSONL",
                       help="trace file (model comes from its header unless --kind overrides)")
    p_lik.add_argument("--trace", action="append", default=[], metavar="C",
                       help="literal trace string (repeatable)")
    p_lik.add_argument("--per-trace", action="store_true",
                       help="print one log-likelihood per trace before the total")
    p_lik.set_defaults(func=cmd_likelihood)

    p_rec = sub.add_parser("reconstruct", help="run a reconstruction algorithm on a trace file",
                           epilog=EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    _add_model_args(p_rec, required=False)
    p_rec.add_argument("--traces", required=True, metavar="JSONL")
    p_rec.add_argument("-a", "--algorithm", required=True, choices=bench_mod.ALGORITHM_IDS)
    p_rec.add_argument("--length", type=int, nargs="+", default=None,
                       help="seed length (three values for vdj: nv nd nj)")
    p_rec.add_argument("--amplify", type=int, default=None, metavar="R",
                       help="majority-vote the algorithm over R trace chunks")
    p_rec.add_argument("--k", type=int, default=None, help="mining-d: k-mer length")
    p_rec.add_argument("--w", type=int, default=None, help="bma: lookahead window")
    p_rec.add_argument("--M", type=int, default=None, help="population: number of seeds")
    p_rec.add_argument("--budget", type=int, default=None, help="brute-force: candidate cap")
    p_rec.add_argument("--d-max", type=int, default=None, help="population: cluster radius")
    p_rec.add_argument("--inner-reconstructor", default=None,
                       help="population: per-cluster algorithm id (default brute-force)")
    p_rec.add_argument("--candidates-file", default=None, metavar="FASTA",
                       help="mean-select: candidate seeds")
    p_rec.set_defaults(func=cmd_reconstruct)

    p_ben = sub.add_parser("bench", help="success-rate estimation or trace-complexity search",
                           epilog=EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    _add_model_args(p_ben, required=False)
    _add_seed_args(p_ben)
    p_ben.add_argument("-a", "--algorithm", default=None, choices=bench_mod.ALGORITHM_IDS)
    p_ben.add_argument("-T", "--count", type=int, default=100, help="traces per trial")
    p_ben.add_argument("--trials", type=int, default=100)
    p_ben.add_argument("--target-rate", type=float, default=0.9)
    p_ben.add_argument("--complexity", action="store_true",
                       help="search for the smallest T meeting the target rate")
    p_ben.add_argument("--t-cap", type=int, default=4096)
    p_ben.add_argument("--length", type=int, nargs=1, default=None,
                       help="override the seed length used by the algorithm")
    p_ben.add_argument("--random-length", type=int, default=None,
                       help="draw fresh random seeds of this length each trial")
    p_ben.add_argument("--random-count", type=int, default=1)
    p_ben.add_argument("--master-seed", type=int, default=0)
    p_ben.add_argument("--amplify", type=int, default=None, metavar="R")
    p_ben.add_argument("--k", type=int, default=None, help="mining-d: k-mer length")
    p_ben.add_argument("--w", type=int, default=None, help="bma: lookahead window")
    p_ben.add_argument("--M", type=int, default=None, help="population: number of seeds")
    p_ben.add_argument("--budget", type=int, default=None, help="brute-force: candidate cap")
    p_ben.add_argument("--candidates-file", default=None, metavar="FASTA")
    p_ben.add_argument("--manifest", default=None, metavar="JSON")
    p_ben.add_argument("-o", "--output", default=None, metavar="JSON")
    p_ben.add_argument("--csv", default=None, metavar="CSV")
    p_ben.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "bench" and not args.manifest:
        # distinguish "user asked for a target" from the search default
        raw = argv if argv is not None else sys.argv[1:]
        args.target_rate_set = any(
            a == "--target-rate" or a.startswith("--target-rate=") for a in raw
        )
    try:
        return args.func(args)
    except BracketingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (TracekitError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
