"""File formats: FASTA seed lists, JSONL trace sets with a self-describing
header, JSON/CSV benchmark reports, and experiment manifests that pin every
input of a run so it can be reproduced byte for byte.
"""

import csv
import json
from dataclasses import dataclass

from . import bench as bench_mod
from . import channels as ch
from .core import Alphabet, ModelParams, RandomStream
from .errors import ConfigError, FormatError

__all__ = [
    "read_seeds",
    "write_seeds",
    "write_traces",
    "read_traces",
    "TraceFile",
    "model_to_dict",
    "model_from_dict",
    "report_to_dict",
    "write_report_json",
    "write_report_csv",
    "ExperimentManifest",
    "load_manifest",
    "save_manifest",
    "run_manifest",
]

TRACES_FORMAT = "tracekit.traces"
MANIFEST_FORMAT = "tracekit.manifest"
FORMAT_VERSION = "1.0"


# -- FASTA seeds -------------------------------------------------------------


def read_seeds(path, alphabet: Alphabet | None = None) -> list:
    """Read (name, sequence) pairs from a FASTA file.

    Sequences may be empty (a header directly followed by another header).
    When an alphabet is given every sequence is validated against it.
    """
    records = []
    name = None
    parts: list = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith(">"):
                if name is not None:
                    records.append((name, "".join(parts)))
                name = line[1:].strip()
                if not name:
                    raise FormatError(f"{path}:{lineno}: empty record name")
                parts = []
            else:
                if name is None:
                    raise FormatError(
                        f"{path}:{lineno}: sequence data before the first '>' header"
                    )
                parts.append(line)
    if name is None:
        raise FormatError(f"{path}: no FASTA records found")
    records.append((name, "".join(parts)))
    if alphabet is not None:
        for rname, seq in records:
            try:
                alphabet.validate(seq)
            except Exception as exc:
                raise FormatError(f"{path}: record {rname!r}: {exc}") from exc
    return records


def write_seeds(path, records) -> None:
    """Write (name, sequence) pairs as FASTA, wrapping sequences at 70."""
    with open(path, "w", encoding="utf-8") as fh:
        for name, seq in records:
            fh.write(f">{name}\n")
            for i in range(0, len(seq), 70):
                fh.write(seq[i : i + 70] + "\n")


# -- model (de)serialisation -------------------------------------------------


def model_to_dict(model: ch.ModelSpec) -> dict:
    params = {}
    for field in ("t", "epsilon", "q"):
        value = getattr(model.params, field)
        if value is not None:
            params[field] = value
    out = {"kind": model.kind, "alphabet": "".join(model.alphabet.symbols), "params": params}
    if model.multi_seed is not None:
        ms = model.multi_seed
        out["multi_seed"] = list(ms) if isinstance(ms, tuple) else ms
    return out


def model_from_dict(data: dict) -> ch.ModelSpec:
    try:
        kind = data["kind"]
        alphabet = Alphabet(data["alphabet"])
        params = ModelParams(**data.get("params", {}))
        multi = data.get("multi_seed")
        if isinstance(multi, list):
            multi = tuple(multi)
        return ch.ModelSpec(kind=kind, params=params, alphabet=alphabet, multi_seed=multi)
    except KeyError as exc:
        raise FormatError(f"model dict is missing {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise FormatError(f"bad model dict: {exc}") from exc


# -- traces as JSONL ----------------------------------------------------------


@dataclass(frozen=True)
class TraceFile:
    traces: tuple
    model: ch.ModelSpec
    header: dict


def write_traces(path, trace_set: ch.TraceSet) -> None:
    header = {
        "format": TRACES_FORMAT,
        "version": FORMAT_VERSION,
        "model": model_to_dict(trace_set.model),
        "count": len(trace_set),
        "master_seed": trace_set.master_seed,
        "stream": None if trace_set.stream_key is None else list(trace_set.stream_key),
    }
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(header, sort_keys=True) + "\n")
        for i, tr in enumerate(trace_set.traces):
            rec = {"seq": tr}
            if trace_set.seed_ids is not None:
                rec["seed_id"] = trace_set.seed_ids[i]
            fh.write(json.dumps(rec, sort_keys=True) + "\n")


def read_traces(path) -> TraceFile:
    with open(path, "r", encoding="utf-8") as fh:
        first = fh.readline()
        if not first.strip():
            raise FormatError(f"{path}: empty trace file")
        try:
            header = json.loads(first)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}:1: bad JSON header: {exc}") from exc
        if not isinstance(header, dict) or header.get("format") != TRACES_FORMAT:
            raise FormatError(f"{path}: not a {TRACES_FORMAT} file")
        version = str(header.get("version", ""))
        if version.split(".")[0] != FORMAT_VERSION.split(".")[0]:
            raise FormatError(f"{path}: unsupported format version {version!r}")
        model = model_from_dict(header.get("model", {}))
        traces = []
        for lineno, raw in enumerate(fh, start=2):
            if not raw.strip():
                continue
            try:
                rec = json.loads(raw)
                traces.append(rec["seq"])
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise FormatError(f"{path}:{lineno}: bad trace record: {exc}") from exc
        declared = header.get("count")
        if declared is not None and declared != len(traces):
            raise FormatError(
                f"{path}: header declares {declared} traces, file has {len(traces)}"
            )
    for tr in traces:
        model.alphabet.validate(tr)
    return TraceFile(traces=tuple(traces), model=model, header=header)


# -- benchmark reports --------------------------------------------------------


def report_to_dict(report) -> dict:
    """JSON-ready dict for a bench or trace-complexity report.

    Wall-clock time is intentionally written as null: report files are
    compared byte for byte to check reproducibility, and timing is the one
    field that legitimately differs between identical runs.
    """
    if isinstance(report, bench_mod.BenchReport):
        return {
            "report": "bench",
            "algorithm": report.algorithm,
            "model": model_to_dict(report.model),
            "n": report.n,
            "traces_per_trial": report.traces_per_trial,
            "trials": report.trials,
            "successes": report.successes,
            "success_rate": report.success_rate,
            "wilson_low": report.wilson_low,
            "wilson_high": report.wilson_high,
            "target_rate": report.target_rate,
            "meets_target": report.meets_target,
            "master_seed": report.master_seed,
            "near_misses": report.near_misses,
            "wall_time_s": None,
        }
    if isinstance(report, bench_mod.TraceComplexityResult):
        return {
            "report": "trace-complexity",
            "algorithm": report.algorithm,
            "target_rate": report.target_rate,
            "trials": report.trials,
            "t_star": report.t_star,
            "t_below": report.t_below,
            "evaluations": [[t, rate] for t, rate in report.evaluations],
            "master_seed": report.master_seed,
        }
    raise ConfigError(f"cannot serialise report of type {type(report).__name__}")


def write_report_json(path, report) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(report_to_dict(report), fh, indent=2, sort_keys=True)
        fh.write("\n")


BENCH_CSV_COLUMNS = (
    "algorithm",
    "kind",
    "n",
    "traces_per_trial",
    "trials",
    "successes",
    "success_rate",
    "wilson_low",
    "wilson_high",
    "target_rate",
    "meets_target",
    "master_seed",
    "near_misses",
)


def write_report_csv(path, reports) -> None:
    """Fixed-column CSV of bench reports (timing excluded, see report_to_dict)."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(BENCH_CSV_COLUMNS)
        for rep in reports:
            if not isinstance(rep, bench_mod.BenchReport):
                raise ConfigError("CSV reports only cover bench runs")
            writer.writerow(
                [
                    rep.algorithm,
                    rep.model.kind,
                    rep.n,
                    rep.traces_per_trial,
                    rep.trials,
                    rep.successes,
                    rep.success_rate,
                    rep.wilson_low,
                    rep.wilson_high,
                    "" if rep.target_rate is None else rep.target_rate,
                    "" if rep.meets_target is None else rep.meets_target,
                    rep.master_seed,
                    rep.near_misses,
                ]
            )


# -- experiment manifests -----------------------------------------------------


@dataclass(frozen=True)
class ExperimentManifest:
    """Everything needed to repeat a run: model, seeds (fixed or random),
    master seed, and the task description."""

    master_seed: int
    model: ch.ModelSpec
    task: dict
    seeds: object = None  # str | list | dict per the model's arity, or None
    random_seeds: dict | None = None
    output: str | None = None

    def seed_source(self):
        if (self.seeds is None) == (self.random_seeds is None):
            raise ConfigError("manifest needs exactly one of seeds / random_seeds")
        if self.seeds is not None:
            return bench_mod.FixedSeeds(_seeds_from_json(self.model, self.seeds), self.model)
        spec = dict(self.random_seeds)
        length = spec.pop("length", None)
        count = spec.pop("count", 1)
        if length is None:
            raise ConfigError("random_seeds needs a length")
        if spec:
            raise ConfigError(f"unknown random_seeds fields: {sorted(spec)}")
        return bench_mod.RandomSeeds(length, self.model, count=count)


def _seeds_from_json(model: ch.ModelSpec, seeds):
    """Map the JSON seed shapes onto what normalize_seeds expects."""
    if model.kind == ch.CONCAT2:
        if isinstance(seeds, dict):
            try:
                return (seeds["s1"], seeds["s2"])
            except KeyError as exc:
                raise ConfigError(f"concatenation seeds need s1 and s2, missing {exc}")
        return tuple(seeds)
    if model.kind == ch.VDJ:
        if isinstance(seeds, dict):
            try:
                return (tuple(seeds["v"]), tuple(seeds["d"]), tuple(seeds["j"]))
            except KeyError as exc:
                raise ConfigError(f"vdj seeds need v, d and j groups, missing {exc}")
        return tuple(tuple(g) for g in seeds)
    if isinstance(seeds, str):
        return seeds
    return tuple(seeds)


def load_manifest(path) -> ExperimentManifest:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}: bad JSON: {exc}") from exc
    if not isinstance(data, dict) or data.get("format") != MANIFEST_FORMAT:
        raise FormatError(f"{path}: not a {MANIFEST_FORMAT} file")
    version = str(data.get("version", ""))
    if version.split(".")[0] != FORMAT_VERSION.split(".")[0]:
        raise FormatError(f"{path}: unsupported manifest version {version!r}")
    try:
        return ExperimentManifest(
            master_seed=int(data["master_seed"]),
            model=model_from_dict(data["model"]),
            task=dict(data["task"]),
            seeds=data.get("seeds"),
            random_seeds=data.get("random_seeds"),
            output=data.get("output"),
        )
    except KeyError as exc:
        raise FormatError(f"{path}: manifest is missing {exc}") from exc


def save_manifest(path, manifest: ExperimentManifest) -> None:
    data = {
        "format": MANIFEST_FORMAT,
        "version": FORMAT_VERSION,
        "master_seed": manifest.master_seed,
        "model": model_to_dict(manifest.model),
        "task": manifest.task,
    }
    if manifest.seeds is not None:
        data["seeds"] = manifest.seeds
    if manifest.random_seeds is not None:
        data["random_seeds"] = manifest.random_seeds
    if manifest.output is not None:
        data["output"] = manifest.output
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(data, fh, indent=2, sort_keys=True)
        fh.write("\n")


def run_manifest(manifest: ExperimentManifest):
    """Execute a manifest task and return its result object.

    task.type "generate" returns a TraceSet; "bench" a BenchReport;
    "complexity" a TraceComplexityResult.  All randomness derives from the
    manifest's master seed, so repeated runs give identical results.
    """
    task = dict(manifest.task)
    ttype = task.pop("type", None)
    rng = RandomStream(master_seed=manifest.master_seed)

    if ttype == "generate":
        count = task.pop("T", None)
        if count is None:
            raise ConfigError("generate task needs T")
        if task:
            raise ConfigError(f"unknown generate task fields: {sorted(task)}")
        if manifest.seeds is None:
            raise ConfigError("generate task needs fixed seeds")
        seeds = _seeds_from_json(manifest.model, manifest.seeds)
        return ch.generate_trace_set(manifest.model, seeds, count, rng)

    if ttype in ("bench", "complexity"):
        algo_id = task.pop("algorithm", None)
        if algo_id is None:
            raise ConfigError(f"{ttype} task needs an algorithm")
        options = task.pop("algorithm_options", {})
        replicas = task.pop("amplify", None)
        algorithm = bench_mod.make_algorithm(algo_id, model=manifest.model, **options)
        if replicas is not None:
            algorithm = bench_mod.amplify(algorithm, replicas)
        source = manifest.seed_source()
        if ttype == "bench":
            traces_per_trial = task.pop("traces_per_trial", None)
            trials = task.pop("trials", None)
            target = task.pop("target_rate", None)
            n = task.pop("n", None)
            if traces_per_trial is None or trials is None:
                raise ConfigError("bench task needs traces_per_trial and trials")
            if task:
                raise ConfigError(f"unknown bench task fields: {sorted(task)}")
            return bench_mod.estimate_success(
                algorithm,
                source,
                manifest.model,
                traces_per_trial,
                trials,
                rng,
                n=n,
                target_rate=target,
            )
        target = task.pop("target_rate", 0.9)
        trials = task.pop("trials", 50)
        t_cap = task.pop("t_cap", 4096)
        n = task.pop("n", None)
        if task:
            raise ConfigError(f"unknown complexity task fields: {sorted(task)}")
        return bench_mod.estimate_trace_complexity(
            algorithm,
            source,
            manifest.model,
            rng,
            target_rate=target,
            trials=trials,
            t_cap=t_cap,
            n=n,
        )

    raise ConfigError(f"unknown task type {ttype!r}")
