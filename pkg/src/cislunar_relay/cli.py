"""Command-line front end for reproducible constellation experiments.

Four subcommands:

    optimize  --config F --seed S --out DIR    NSGA-II run -> pareto/history
    evaluate  --config F --genome F            score one genome, print JSON
    sweep     --structures F --seed S --out DIR  optimize every listed structure
    baseline  --n N --family F [--with-geo] --config F --out DIR

Configuration is one JSON object with sections {structure, scenario,
link_model, nsga2}; every omitted field keeps its shipped default, so `{}`
reproduces the reference setup.  CSV floats carry 17 significant digits and
all files are written atomically (temp + rename).  Exit codes: 0 success,
2 invalid input, 3 runtime failure.  The CISLUNAR_THREADS environment
variable caps evaluation worker threads (order-preserving; default 1).
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import dataclasses
import datetime
import hashlib
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .aoi import LinkModel
from .errors import ValidationError
from .frames import Epoch, GeodeticSite
from .nsga2 import EvolveParams, evolve
from .scenario import (ConstellationConfig, ScenarioParams, decode,
                       default_population_size, evaluate, evaluate_constellation,
                       join_genome, make_problem, walker_constellation)

_DEFAULT_GENERATIONS = 100
_DEFAULT_DELTA_INCLINATIONS = (30.0, 45.0, 60.0, 75.0, 90.0)

_SCENARIO_KEYS = frozenset({
    "start_date", "duration_min", "sample_interval_min", "m_points",
    "theta_c_deg", "region_lat_min_deg", "region_lat_max_deg", "egs_sites",
    "aggregation", "aoi_sources", "z_amplitude_km", "halo_period_min",
    "axis_catalog_km",
})
_LINK_KEYS = frozenset({
    "ber_lunar_to_earth_segment", "ber_other", "packet_bits", "t_rate_bps",
    "d_unit_km", "sigma", "require_geo_relay",
})
_NSGA2_KEYS = frozenset({
    "pop_size", "generations", "crossover_rate", "mutation_rate",
    "eta_c", "eta_m",
})
_BASELINE_KEYS = frozenset({"axes_km", "inclinations_deg"})


# --------------------------------------------------------------------------
# Config loading

def _load_json(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ValidationError(f"{path}: {exc.strerror or exc}")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(
            f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}")


def _require_mapping(obj, where: str) -> dict:
    if not isinstance(obj, dict):
        raise ValidationError(f"{where} must be a JSON object")
    return obj


def _check_keys(section: dict, allowed: frozenset, where: str):
    unknown = sorted(set(section) - allowed)
    if unknown:
        raise ValidationError(f"unknown {where} field {unknown[0]!r}")


def _structure_from(obj) -> ConstellationConfig:
    if isinstance(obj, dict):
        _check_keys(obj, frozenset({"n_geo", "n_l1", "n_ord", "n_l2"}), "structure")
        try:
            return ConstellationConfig(**{k: int(v) for k, v in obj.items()})
        except TypeError:
            raise ValidationError("structure must give n_geo, n_l1, n_ord, n_l2")
    if isinstance(obj, (list, tuple)) and len(obj) == 4:
        return ConstellationConfig(*(int(v) for v in obj))
    raise ValidationError(
        "structure must be {n_geo, n_l1, n_ord, n_l2} or a 4-element list")


def _epoch_from(text) -> Epoch:
    try:
        dt = datetime.datetime.fromisoformat(str(text))
    except ValueError:
        raise ValidationError(f"start_date {text!r} is not an ISO date")
    return Epoch.from_calendar(dt.year, dt.month, dt.day, dt.hour, dt.minute,
                               dt.second + dt.microsecond / 1e6)


def _sites_from(entries) -> tuple[GeodeticSite, ...]:
    if not isinstance(entries, list):
        raise ValidationError("egs_sites must be a list of site objects")
    sites = []
    for entry in entries:
        entry = _require_mapping(entry, "egs site")
        _check_keys(entry, frozenset({"name", "lat_deg", "lon_deg", "height_km"}),
                    "egs site")
        try:
            sites.append(GeodeticSite(str(entry["name"]), float(entry["lat_deg"]),
                                      float(entry["lon_deg"]),
                                      float(entry.get("height_km", 0.0))))
        except KeyError as exc:
            raise ValidationError(f"egs site missing field {exc.args[0]!r}")
    return tuple(sites)


def _scenario_from(section: dict, link_model: LinkModel) -> ScenarioParams:
    _check_keys(section, _SCENARIO_KEYS, "scenario")
    kwargs = {"link_model": link_model}
    for key, value in section.items():
        if key == "start_date":
            kwargs["start_epoch"] = _epoch_from(value)
        elif key == "egs_sites":
            kwargs["egs_sites"] = _sites_from(value)
        elif key == "axis_catalog_km":
            kwargs["axis_catalog_km"] = tuple(float(a) for a in value)
        elif key in ("m_points",):
            kwargs[key] = int(value)
        elif key in ("aggregation", "aoi_sources"):
            kwargs[key] = str(value)
        else:
            kwargs[key] = float(value)
    return ScenarioParams(**kwargs)


def _link_model_from(section: dict) -> LinkModel:
    _check_keys(section, _LINK_KEYS, "link_model")
    kwargs = {}
    for key, value in section.items():
        if key == "packet_bits":
            kwargs[key] = int(value)
        elif key == "require_geo_relay":
            kwargs[key] = bool(value)
        else:
            kwargs[key] = float(value)
    return LinkModel(**kwargs)


@dataclasses.dataclass(frozen=True)
class RunSetup:
    """A fully resolved experiment: structure, scenario, and optimizer knobs."""

    structure: ConstellationConfig | None
    params: ScenarioParams
    nsga2: dict
    baseline: dict
    config_sha256: str


def _resolve_config(raw, path: str, need_structure: bool) -> RunSetup:
    raw = _require_mapping(raw, path)
    _check_keys(raw, frozenset({"structure", "scenario", "link_model", "nsga2",
                                "baseline"}), "config")
    structure = None
    if "structure" in raw:
        structure = _structure_from(raw["structure"])
    elif need_structure:
        raise ValidationError(f"{path}: missing structure section")

    link_model = _link_model_from(_require_mapping(raw.get("link_model", {}),
                                                   "link_model"))
    params = _scenario_from(_require_mapping(raw.get("scenario", {}), "scenario"),
                            link_model)

    nsga2_section = _require_mapping(raw.get("nsga2", {}), "nsga2")
    _check_keys(nsga2_section, _NSGA2_KEYS, "nsga2")
    nsga2 = {
        "pop_size": int(nsga2_section.get(
            "pop_size", default_population_size(structure) if structure else 50)),
        "generations": int(nsga2_section.get("generations", _DEFAULT_GENERATIONS)),
    }
    for key in ("crossover_rate", "mutation_rate", "eta_c", "eta_m"):
        if key in nsga2_section:
            nsga2[key] = float(nsga2_section[key])

    baseline_section = _require_mapping(raw.get("baseline", {}), "baseline")
    _check_keys(baseline_section, _BASELINE_KEYS, "baseline")
    baseline = {
        "axes_km": tuple(float(a) for a in baseline_section.get(
            "axes_km", params.axis_catalog_km)),
        "inclinations_deg": tuple(float(i) for i in baseline_section.get(
            "inclinations_deg", _DEFAULT_DELTA_INCLINATIONS)),
    }
    if not baseline["axes_km"]:
        raise ValidationError("baseline axes_km must not be empty")
    if not baseline["inclinations_deg"]:
        raise ValidationError("baseline inclinations_deg must not be empty")

    digest = hashlib.sha256(
        json.dumps(raw, sort_keys=True, separators=(",", ":")).encode()).hexdigest()
    return RunSetup(structure=structure, params=params, nsga2=nsga2,
                    baseline=baseline, config_sha256=digest)


def _load_setup(path: str, need_structure: bool) -> RunSetup:
    return _resolve_config(_load_json(path), path, need_structure)


# --------------------------------------------------------------------------
# Output plumbing

def _fmt(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def _write_atomic(path: Path, data: str):
    tmp = path.with_name(path.name + f".tmp{os.getpid()}")
    tmp.write_text(data)
    os.replace(tmp, path)


def _write_csv(path: Path, header, rows):
    import io
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    _write_atomic(path, buf.getvalue())


def _write_json(path: Path, obj):
    _write_atomic(path, json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _gene_names(structure: ConstellationConfig) -> list[str]:
    names = ["a_index"]
    for k in range(1, structure.n_ord + 1):
        names += [f"i_{k}", f"raan_{k}", f"nu_{k}"]
    names.append("xi_1")
    return names


def _utc_stamp() -> str:
    return datetime.datetime.now(datetime.timezone.utc).isoformat()


def _thread_count() -> int:
    raw = os.environ.get("CISLUNAR_THREADS", "").strip()
    if not raw:
        return 1
    try:
        count = int(raw)
    except ValueError:
        raise ValidationError(f"CISLUNAR_THREADS must be an integer, got {raw!r}")
    if count < 1:
        raise ValidationError("CISLUNAR_THREADS must be at least 1")
    return count


@contextlib.contextmanager
def _worker_map():
    count = _thread_count()
    if count == 1:
        yield map
    else:
        with ThreadPoolExecutor(max_workers=count) as pool:
            yield pool.map


def _history_rows(history):
    return [(s.generation, s.best[0], -s.best[1], s.mean[0], -s.mean[1])
            for s in history]


def _resolved_params_dict(setup: RunSetup) -> dict:
    params = dataclasses.asdict(setup.params)
    params["start_epoch"] = setup.params.start_epoch.days_since_j2000
    params["resolved_duration_min"] = setup.params.resolved_duration_min
    params["n_samples"] = setup.params.n_samples
    out = {"scenario": params, "nsga2": dict(setup.nsga2)}
    if setup.structure is not None:
        out["structure"] = dataclasses.asdict(setup.structure)
    return out


def _front_rows(result):
    """Front individuals as (aoi, cov, genome) sorted deterministically."""
    rows = []
    for ind in result.front:
        genome = join_genome(ind.reals, ind.cats)
        aoi, neg_cov = ind.objectives
        rows.append((float(aoi), float(-neg_cov), tuple(genome)))
    rows.sort(key=lambda r: (r[0], -r[1], r[2]))
    return rows


def _run_optimization(setup: RunSetup, seed: int, out_dir: Path) -> dict:
    """One full NSGA-II run; writes pareto/history/manifest into out_dir."""
    structure = setup.structure
    problem = make_problem(structure, setup.params)
    evolve_params = EvolveParams(seed=seed, **setup.nsga2)
    started = _utc_stamp()
    t0 = time.perf_counter()
    with _worker_map() as map_fn:
        result = evolve(problem, evolve_params, map_fn=map_fn)
    wall = time.perf_counter() - t0

    out_dir.mkdir(parents=True, exist_ok=True)
    rows = _front_rows(result)
    gene_names = _gene_names(structure)
    pareto = [(i, aoi, cov) + genome
              for i, (aoi, cov, genome) in enumerate(rows)]
    _write_csv(out_dir / "pareto.csv",
               ["individual_id", "aoi", "cov"] + gene_names, pareto)
    _write_csv(out_dir / "history.csv",
               ["generation", "best_aoi", "best_cov", "mean_aoi", "mean_cov"],
               _history_rows(result.history))
    manifest = {
        "tool": "cislunar-relay",
        "tool_version": __version__,
        "command": "optimize",
        "config_sha256": setup.config_sha256,
        "seed": seed,
        "resolved": _resolved_params_dict(setup),
        "started_utc": started,
        "finished_utc": _utc_stamp(),
        "wall_seconds": wall,
        "history": [dict(zip(("generation", "best_aoi", "best_cov",
                              "mean_aoi", "mean_cov"), row))
                    for row in _history_rows(result.history)],
    }
    _write_json(out_dir / "manifest.json", manifest)
    return {"front_size": len(rows), "wall_seconds": wall}


# --------------------------------------------------------------------------
# Subcommands

def cmd_optimize(args) -> int:
    setup = _load_setup(args.config, need_structure=True)
    _run_optimization(setup, args.seed, Path(args.out))
    return 0


def cmd_evaluate(args) -> int:
    setup = _load_setup(args.config, need_structure=True)
    genome_obj = _load_json(args.genome)
    if isinstance(genome_obj, dict):
        genome_obj = genome_obj.get("genome")
    if not isinstance(genome_obj, list):
        raise ValidationError(f"{args.genome}: genome must be a JSON array")
    try:
        genome = np.asarray(genome_obj, dtype=float)
    except (TypeError, ValueError):
        raise ValidationError(f"{args.genome}: genome entries must be numbers")
    objectives = evaluate(setup.structure, genome, setup.params)
    print(json.dumps({"aoi": float(objectives[0]), "cov": float(-objectives[1])}))
    return 0


def cmd_sweep(args) -> int:
    raw = _load_json(args.structures)
    if isinstance(raw, list):
        raw = {"structures": raw}
    raw = _require_mapping(raw, args.structures)
    structures = raw.pop("structures", None)
    if not isinstance(structures, list) or not structures:
        raise ValidationError(
            f"{args.structures}: needs a non-empty 'structures' list")
    shared = _resolve_config(raw, args.structures, need_structure=False)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    started = _utc_stamp()
    combined = []
    statuses = []
    for entry in structures:
        try:
            structure = _structure_from(entry)
        except ValidationError as exc:
            statuses.append({"structure": entry, "status": "invalid",
                             "error": str(exc)})
            continue
        tag = "{}-{}-{}-{}".format(structure.n_geo, structure.n_l1,
                                   structure.n_ord, structure.n_l2)
        nsga2 = dict(shared.nsga2)
        if "pop_size" not in (raw.get("nsga2") or {}):
            nsga2["pop_size"] = default_population_size(structure)
        setup = dataclasses.replace(shared, structure=structure, nsga2=nsga2)
        sub_dir = out_dir / f"structure_{tag}"
        try:
            info = _run_optimization(setup, args.seed, sub_dir)
        except Exception as exc:  # keep sweeping; report at the end
            statuses.append({"structure": entry, "status": "failed",
                             "error": f"{type(exc).__name__}: {exc}"})
            continue
        statuses.append({"structure": entry, "status": "ok",
                         "front_size": info["front_size"],
                         "wall_seconds": info["wall_seconds"]})
        with (sub_dir / "pareto.csv").open() as f:
            for record in csv.DictReader(f):
                combined.append((tag, int(record["individual_id"]),
                                 float(record["aoi"]), float(record["cov"])))

    _write_csv(out_dir / "fronts.csv",
               ["structure", "individual_id", "aoi", "cov"], combined)
    _write_json(out_dir / "manifest.json", {
        "tool": "cislunar-relay",
        "tool_version": __version__,
        "command": "sweep",
        "config_sha256": shared.config_sha256,
        "seed": args.seed,
        "resolved": _resolved_params_dict(shared),
        "structures": statuses,
        "started_utc": started,
        "finished_utc": _utc_stamp(),
    })
    return 0 if all(s["status"] == "ok" for s in statuses) else 3


def cmd_baseline(args) -> int:
    setup = _load_setup(args.config, need_structure=False)
    if args.n < 1:
        raise ValidationError("--n must be at least 1")
    axes = setup.baseline["axes_km"]
    if args.family == "star":
        inclinations = (None,)
    else:
        inclinations = setup.baseline["inclinations_deg"]

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    started = _utc_stamp()
    t0 = time.perf_counter()
    rows = []
    for a_km in axes:
        for inc in inclinations:
            constellation = walker_constellation(args.n, args.family, a_km,
                                                 inc, with_geo=args.with_geo)
            aoi, cov = evaluate_constellation(constellation, setup.params)
            i_deg = constellation.ordinary[0].i_deg if constellation.ordinary \
                else (inc if inc is not None else 90.0)
            rows.append((args.family, args.with_geo, args.n, a_km, i_deg,
                         aoi, cov))
    _write_csv(out_dir / "baseline.csv",
               ["family", "with_geo", "n", "a_km", "inclination_deg",
                "aoi", "cov"], rows)
    _write_json(out_dir / "manifest.json", {
        "tool": "cislunar-relay",
        "tool_version": __version__,
        "command": "baseline",
        "config_sha256": setup.config_sha256,
        "family": args.family,
        "with_geo": args.with_geo,
        "n": args.n,
        "axes_km": list(axes),
        "inclinations_deg": [i for i in inclinations if i is not None] or [90.0],
        "resolved": _resolved_params_dict(setup),
        "started_utc": started,
        "finished_utc": _utc_stamp(),
        "wall_seconds": time.perf_counter() - t0,
    })
    return 0


# --------------------------------------------------------------------------
# Argument parsing

def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit int")
    return value


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cislunar-relay",
        description="Design and score hybrid Earth-Moon relay constellations.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_opt = sub.add_parser("optimize", help="run NSGA-II on one structure")
    p_opt.add_argument("--config", required=True)
    p_opt.add_argument("--seed", required=True, type=_seed)
    p_opt.add_argument("--out", required=True)
    p_opt.set_defaults(func=cmd_optimize)

    p_eval = sub.add_parser("evaluate", help="score one genome, print JSON")
    p_eval.add_argument("--config", required=True)
    p_eval.add_argument("--genome", required=True)
    p_eval.set_defaults(func=cmd_evaluate)

    p_sweep = sub.add_parser("sweep", help="optimize every structure in a list")
    p_sweep.add_argument("--structures", required=True)
    p_sweep.add_argument("--seed", required=True, type=_seed)
    p_sweep.add_argument("--out", required=True)
    p_sweep.set_defaults(func=cmd_sweep)

    p_base = sub.add_parser("baseline", help="sweep a Walker comparison grid")
    p_base.add_argument("--n", required=True, type=int)
    p_base.add_argument("--family", required=True, choices=("star", "delta"))
    p_base.add_argument("--with-geo", action="store_true", dest="with_geo")
    p_base.add_argument("--config", required=True)
    p_base.add_argument("--out", required=True)
    p_base.set_defaults(func=cmd_baseline)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - last-resort runtime diagnostics
        print(f"runtime error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
