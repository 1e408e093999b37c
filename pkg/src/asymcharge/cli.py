"""Instance generation, file formats, experiment sweeps, and the command line.

Files are JSON with floats written at 9 significant digits; serialize ->
parse -> serialize is byte-identical.  Experiment runs derive their seeds
from (master seed, node count, repeat index), so results do not depend on
worker scheduling.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import math
import struct
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from decimal import ROUND_DOWN, Context, Decimal

import numpy as np

from .errors import SchedulingError, ValidationError
from .model import (
    AsymmetryField,
    DmcParams,
    NetworkInstance,
    Node,
    build_routing_matrices,
    snap9,
)
from .pipeline import (
    MOVE,
    TRANSMIT,
    OperationSchedule,
    ScheduleItem,
    ScheduleMetrics,
    execute_schedule,
    one_to_one_schedule,
    plan_schedule,
)
from .routing import (
    cost_graph,
    expand_tour,
    greedy_tour,
    held_karp,
    lk_tour,
    metric_closure,
    to_symmetric,
    tour_cost,
)

ALGORITHMS = ("ra_dmcs", "o2o_greedy")
ATSP_SOLVERS = ("greedy", "lk", "held_karp", "transform_lk", "transform_greedy")
METRIC_FIELDS = (
    "total_energy_loss",
    "charging_energy_loss",
    "movement_energy",
    "tour_distance",
    "time_span",
    "charging_time",
    "moving_time",
    "algorithm_runtime",
    "received_total",
    "feasible",
)
_HELD_KARP_BENCH_MAX = 12


_SNAP9_DOWN = Context(prec=9, rounding=ROUND_DOWN)


def _snap9_down(x: float) -> float:
    """Snap to 9 significant digits rounding toward zero (never upward)."""
    return float(_SNAP9_DOWN.plus(Decimal(x)))


def _draw_energies(rng: np.random.Generator) -> tuple[float, float, float]:
    """Snapped (e_b, e_d, e_c) draw with the demand clamped to the headroom."""
    e_c = snap9(rng.uniform(60.0, 90.0))
    e_b = snap9(rng.uniform(6.0, 36.0))
    e_d = snap9(rng.uniform(18.0, 75.0))
    headroom = e_c - e_b
    if e_d > headroom:
        e_d = _snap9_down(headroom)
    return e_b, e_d, e_c


def derive_seed(master: int, *parts: int) -> int:
    """Stable 63-bit sub-seed from a master seed and integer labels."""
    words = [v & 0xFFFFFFFFFFFFFFFF for v in (master, *parts)]
    key = struct.pack(f"<{len(words)}Q", *words)
    digest = hashlib.blake2b(key, digest_size=8).digest()
    return int.from_bytes(digest, "little") >> 1


# ---------------------------------------------------------------------------
# instance generation


def generate_instance(
    n: int,
    seed: int,
    area: float = 200.0,
    dmc: DmcParams | None = None,
    avoid_bs_disc: bool = False,
) -> NetworkInstance:
    """Random instance: uniform nodes, centered base station, default charger.

    Capacities are drawn from [60, 90] J, initial energies from [6, 36] J,
    demands from [18, 75] J clamped to the remaining headroom.  With
    ``avoid_bs_disc`` nodes are re-drawn until none lies within charge
    distance of the base station.
    """
    if n < 1:
        raise ValidationError("need at least one node")
    dmc = dmc or DmcParams()
    rng = np.random.default_rng(seed)
    bs = (snap9(area / 2.0), snap9(area / 2.0))
    positions: list[tuple[float, float]] = []
    while len(positions) < n:
        x, y = rng.uniform(0.0, area, size=2)
        if avoid_bs_disc and math.hypot(x - bs[0], y - bs[1]) <= dmc.d_max:
            continue
        positions.append((snap9(x), snap9(y)))
    nodes = []
    for i, pos in enumerate(positions):
        e_b, e_d, e_c = _draw_energies(rng)
        nodes.append(Node(i, pos, e_b, e_d, e_c))
    asym = AsymmetryField(seed=seed)
    return NetworkInstance(tuple(nodes), bs, dmc, asym)


# ---------------------------------------------------------------------------
# file formats


def _render_json(value, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(value, dict):
        if not value:
            return "{}"
        body = ",\n".join(
            f'{pad}  "{k}": {_render_json(v, indent + 1)}' for k, v in value.items()
        )
        return "{\n" + body + "\n" + pad + "}"
    if isinstance(value, list):
        if not value:
            return "[]"
        body = ",\n".join(f"{pad}  {_render_json(v, indent + 1)}" for v in value)
        return "[\n" + body + "\n" + pad + "]"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format(value, ".9g")
    return json.dumps(value)


def instance_to_text(instance: NetworkInstance) -> str:
    doc = {
        "nodes": [
            {"x": u.pos[0], "y": u.pos[1], "e_b": u.e_b, "e_d": u.e_d, "e_c": u.e_c}
            for u in instance.nodes
        ],
        "bs": {"x": instance.bs_pos[0], "y": instance.bs_pos[1]},
        "dmc": {
            "p0": instance.dmc.p0,
            "e_b0": instance.dmc.e_b0,
            "d": instance.dmc.d_max,
            "phi": instance.dmc.phi,
            "v": instance.dmc.v_bar,
            "w0": instance.dmc.w0,
            "delta": instance.dmc.delta,
            "alpha": instance.dmc.alpha,
            "beta": instance.dmc.beta,
        },
        "asym": {
            "seed": instance.asym.seed,
            "k_dis_lo": instance.asym.k_dis_range[0],
            "k_dis_hi": instance.asym.k_dis_range[1],
            "k_egy_lo": instance.asym.k_egy_range[0],
            "k_egy_hi": instance.asym.k_egy_range[1],
            "grid": instance.asym.grid,
        },
    }
    return _render_json(doc) + "\n"


def instance_from_text(text: str) -> NetworkInstance:
    try:
        doc = json.loads(text)
        # the format carries 9 significant digits; snap so hand-edited files
        # with extra digits behave identically to their re-serialized form
        nodes = tuple(
            Node(i, (snap9(u["x"]), snap9(u["y"])), snap9(u["e_b"]), snap9(u["e_d"]), snap9(u["e_c"]))
            for i, u in enumerate(doc["nodes"])
        )
        bs = (snap9(doc["bs"]["x"]), snap9(doc["bs"]["y"]))
        d = doc["dmc"]
        dmc = DmcParams(
            p0=float(d["p0"]),
            e_b0=float(d["e_b0"]),
            v_bar=float(d["v"]),
            w0=float(d["w0"]),
            d_max=float(d["d"]),
            phi=float(d["phi"]),
            delta=float(d["delta"]),
            alpha=float(d["alpha"]),
            beta=float(d["beta"]),
        )
        a = doc["asym"]
        asym = AsymmetryField(
            seed=int(a["seed"]),
            k_dis_range=(float(a["k_dis_lo"]), float(a["k_dis_hi"])),
            k_egy_range=(float(a["k_egy_lo"]), float(a["k_egy_hi"])),
            grid=float(a["grid"]),
        )
    except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
        raise ValidationError(f"bad instance file: {exc}") from exc
    return NetworkInstance(nodes, bs, dmc, asym)


def schedule_to_text(schedule: OperationSchedule) -> str:
    doc = {
        "items": [
            {"state": item.state, "x": item.pos[0], "y": item.pos[1], "psi": item.psi, "t": item.t}
            for item in schedule.items
        ]
    }
    return _render_json(doc) + "\n"


def schedule_from_text(text: str) -> OperationSchedule:
    try:
        doc = json.loads(text)
        items = tuple(
            ScheduleItem(int(i["state"]), (snap9(i["x"]), snap9(i["y"])), snap9(i["psi"]), snap9(i["t"]))
            for i in doc["items"]
        )
    except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
        raise ValidationError(f"bad schedule file: {exc}") from exc
    for item in items:
        if item.state not in (MOVE, TRANSMIT):
            raise ValidationError(f"bad schedule file: unknown state {item.state}")
    return OperationSchedule(items)


def metrics_to_row(metrics: ScheduleMetrics) -> dict:
    row = {}
    for name in METRIC_FIELDS:
        value = getattr(metrics, name)
        row[name] = bool(value) if name == "feasible" else float(value)
    return row


def write_csv(path, rows: list[dict], fieldnames: list[str]) -> None:
    with open(path, "w", newline="", encoding="ascii") as f:
        writer = csv.DictWriter(f, fieldnames=fieldnames)
        writer.writeheader()
        for row in rows:
            out = {}
            for k in fieldnames:
                v = row.get(k, "")
                if isinstance(v, bool):
                    v = "true" if v else "false"
                elif isinstance(v, float):
                    v = format(v, ".9g")
                out[k] = v
            writer.writerow(out)


def load_metrics_csv(path, check_identities: bool = True) -> list[dict]:
    """Read a per-run metrics CSV back, re-checking the metric identities."""
    with open(path, newline="", encoding="ascii") as f:
        rows = list(csv.DictReader(f))
    if check_identities:
        for row in rows:
            if row.get("status", "ok") != "ok":
                continue
            total = float(row["total_energy_loss"])
            parts = float(row["charging_energy_loss"]) + float(row["movement_energy"])
            span = float(row["time_span"])
            tparts = float(row["charging_time"]) + float(row["moving_time"])
            scale = 1.0 + abs(total) + abs(span)
            if abs(total - parts) > 1e-6 * scale or abs(span - tparts) > 1e-6 * scale:
                raise ValidationError(f"metrics identities violated in row {row}")
    return rows


# ---------------------------------------------------------------------------
# experiment sweeps


@dataclass
class ExperimentConfig:
    n_values: list[int]
    repeats: int = 50
    area: float = 200.0
    seed: int = 0
    algorithms: tuple[str, ...] = ALGORITHMS
    atsp_solvers: tuple[str, ...] = ATSP_SOLVERS
    workers: int = 1
    restart_budget: int = 20

    def __post_init__(self):
        if not self.n_values:
            raise ValidationError("need at least one node count")
        if any(n < 1 for n in self.n_values):
            raise ValidationError("node counts must be positive")
        if self.repeats < 1:
            raise ValidationError("repeats must be at least 1")
        for a in self.algorithms:
            if a not in ALGORITHMS:
                raise ValidationError(f"unknown algorithm {a!r}")
        for s in self.atsp_solvers:
            if s not in ATSP_SOLVERS:
                raise ValidationError(f"unknown solver {s!r}")


def _experiment_job(args):
    algorithm, n, repeat, master_seed, area, budget = args
    run_seed = derive_seed(master_seed, n, repeat)
    row = {"algorithm": algorithm, "n": n, "repeat": repeat, "seed": run_seed, "status": "ok"}
    try:
        instance = generate_instance(n, run_seed, area=area)
        if algorithm == "ra_dmcs":
            _, metrics = plan_schedule(instance, seed=run_seed, restart_budget=budget)
        else:
            _, metrics = one_to_one_schedule(instance)
        row.update(metrics_to_row(metrics))
    except Exception as exc:  # noqa: BLE001 - a failed run must not kill the sweep
        row["status"] = f"error: {exc}"
    return row


def _pmap(fn, jobs, workers: int):
    if workers <= 1:
        return [fn(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, jobs))


def summarize(detail_rows: list[dict], group_keys: tuple[str, ...], value_keys: tuple[str, ...]) -> list[dict]:
    """Mean and normal-approximation 95% CI per group; single runs get CI 0."""
    groups: dict[tuple, list[dict]] = {}
    for row in detail_rows:
        if row.get("status", "ok") != "ok":
            continue
        groups.setdefault(tuple(row[k] for k in group_keys), []).append(row)
    out = []
    for key in sorted(groups):
        rows = groups[key]
        summary = dict(zip(group_keys, key))
        summary["runs"] = len(rows)
        for vk in value_keys:
            vals = np.array([float(r[vk]) for r in rows])
            mean = float(vals.mean())
            ci = float(1.96 * vals.std(ddof=1) / math.sqrt(len(vals))) if len(vals) > 1 else 0.0
            summary[f"{vk}_mean"] = mean
            summary[f"{vk}_ci95"] = ci
        out.append(summary)
    return out


def run_experiment(cfg: ExperimentConfig) -> tuple[list[dict], list[dict]]:
    """Schedule both algorithms over seeded random instances; emit summary + detail."""
    jobs = [
        (algorithm, n, repeat, cfg.seed, cfg.area, cfg.restart_budget)
        for algorithm in cfg.algorithms
        for n in cfg.n_values
        for repeat in range(cfg.repeats)
    ]
    detail = _pmap(_experiment_job, jobs, cfg.workers)
    numeric = tuple(f for f in METRIC_FIELDS if f != "feasible") + ("feasible",)
    detail_for_summary = [
        {**row, "feasible": 1.0 if row.get("feasible") else 0.0} for row in detail
    ]
    summary = summarize(detail_for_summary, ("algorithm", "n"), numeric)
    return summary, detail


def _bench_job(args):
    n, repeat, master_seed, area, solvers, budget = args
    run_seed = derive_seed(master_seed, n, repeat)
    rng = np.random.default_rng(run_seed)
    points = [(float(x), float(y)) for x, y in rng.uniform(0.0, area, size=(n, 2))]
    dmc = DmcParams()
    asym = AsymmetryField(seed=run_seed)
    mats = build_routing_matrices(points, asym, dmc)
    closed = metric_closure(cost_graph(mats.move_cost()))

    hk_cost = None
    if n <= _HELD_KARP_BENCH_MAX:
        hk_cost = held_karp(closed).cost

    rows = []
    for solver in solvers:
        row = {"solver": solver, "n": n, "repeat": repeat, "seed": run_seed, "status": "ok"}
        try:
            t0 = time.perf_counter()
            if solver == "greedy":
                tour = greedy_tour(closed)
            elif solver == "lk":
                tour = lk_tour(closed, seed=run_seed, budget=budget)
            elif solver == "held_karp":
                tour = held_karp(closed)
            elif solver in ("transform_lk", "transform_greedy"):
                sym = to_symmetric(closed)
                sym_graph = cost_graph(sym.cost)
                if solver == "transform_lk":
                    doubled = lk_tour(sym_graph, seed=run_seed, budget=budget)
                else:
                    doubled = greedy_tour(sym_graph)
                tour = sym.decode(doubled.order, closed.cost)
            else:
                raise ValidationError(f"unknown solver {solver!r}")
            runtime = time.perf_counter() - t0
            expanded = expand_tour(tour, closed)
            distance = tour_cost(expanded.order, mats.dist)
            row["tour_energy"] = tour.cost
            row["moving_time"] = distance / dmc.v_bar
            row["runtime"] = runtime
            if hk_cost is not None:
                row["held_karp_gap"] = (tour.cost - hk_cost) / hk_cost if hk_cost > 0 else 0.0
        except Exception as exc:  # noqa: BLE001
            row["status"] = f"error: {exc}"
        rows.append(row)
    return rows


def run_atsp_bench(cfg: ExperimentConfig) -> list[dict]:
    """Tour solver comparison on seeded asymmetric instances."""
    jobs = [
        (n, repeat, cfg.seed, cfg.area, tuple(cfg.atsp_solvers), cfg.restart_budget)
        for n in cfg.n_values
        for repeat in range(cfg.repeats)
    ]
    nested = _pmap(_bench_job, jobs, cfg.workers)
    return [row for rows in nested for row in rows]


# ---------------------------------------------------------------------------
# demo scenario with a published energy-rate table


_DEMO_RATE_TABLE = [
    # rows: from BS, A, B, C, D; columns: to BS, A, B, C, D
    [0.00, 1.11, 1.10, 1.14, 1.35],
    [0.89, 0.00, 1.03, 1.31, 1.43],
    [0.90, 0.97, 0.00, 1.33, 1.15],
    [0.86, 0.69, 0.67, 0.00, 1.11],
    [0.65, 0.57, 0.85, 0.89, 0.00],
]
_DEMO_BS = (50.0, 50.0)
_DEMO_CENTERS = [(20.0, 20.0), (80.0, 20.0), (20.0, 80.0), (80.0, 80.0)]


def demo_instance() -> NetworkInstance:
    """Ten nodes in four tight blobs; inter-blob travel rates come from a table.

    The blobs are placed so the clustering cover selects exactly their
    circumcenters, which makes the tabulated rates apply to the tour the
    scheduler actually drives.  Each 3-node blob keeps two members inside one
    sector window of its center, so a single direction can charge them
    together.
    """

    def ring(center, radius, degrees):
        return [
            (center[0] + radius * math.cos(math.radians(a)),
             center[1] + radius * math.sin(math.radians(a)))
            for a in degrees
        ]

    blobs = [
        ring(_DEMO_CENTERS[0], 5.0, [10.0, 30.0, 200.0]),
        ring(_DEMO_CENTERS[1], 5.0, [100.0, 120.0, 290.0]),
        ring(_DEMO_CENTERS[2], 5.0, [190.0, 210.0, 20.0]),
        [_DEMO_CENTERS[3]],
    ]
    rng = np.random.default_rng(7)
    nodes = []
    for pos in (p for blob in blobs for p in blob):
        e_b, e_d, e_c = _draw_energies(rng)
        nodes.append(Node(len(nodes), (snap9(pos[0]), snap9(pos[1])), e_b, e_d, e_c))

    specials = [_DEMO_BS] + _DEMO_CENTERS
    base = AsymmetryField(seed=7)
    overrides = {}
    for i, a in enumerate(specials):
        for j, b in enumerate(specials):
            if i != j:
                overrides[(base.quantize(a), base.quantize(b))] = (1.0, _DEMO_RATE_TABLE[i][j])
    asym = AsymmetryField(seed=7, overrides=overrides)
    return NetworkInstance(tuple(nodes), _DEMO_BS, DmcParams(), asym)


def demo_report() -> tuple[str, list[dict]]:
    instance = demo_instance()
    rows = []
    results = {}
    for algorithm in ALGORITHMS:
        if algorithm == "ra_dmcs":
            _, metrics = plan_schedule(instance, seed=7)
        else:
            _, metrics = one_to_one_schedule(instance)
        results[algorithm] = metrics
        rows.append({"algorithm": algorithm, "n": instance.n, "repeat": 0, "seed": 7,
                     "status": "ok", **metrics_to_row(metrics)})

    labels = [
        ("Energy loss (J)", "total_energy_loss"),
        ("Time span (s)", "time_span"),
        ("Charging energy loss (J)", "charging_energy_loss"),
        ("Movement energy consumption (J)", "movement_energy"),
        ("Charging time (s)", "charging_time"),
        ("Moving time (s)", "moving_time"),
    ]
    width = max(len(label) for label, _ in labels)
    lines = [f"{'Performance metric':<{width}}  {'ra_dmcs':>12}  {'o2o_greedy':>12}"]
    for label, attr in labels:
        a = getattr(results["ra_dmcs"], attr)
        b = getattr(results["o2o_greedy"], attr)
        lines.append(f"{label:<{width}}  {a:>12.2f}  {b:>12.2f}")
    return "\n".join(lines) + "\n", rows


# ---------------------------------------------------------------------------
# command line


def _parse_int_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise ValidationError(f"bad integer list {text!r}") from exc


def _resolve_repeats(args) -> int:
    if args.repeats is not None:
        return args.repeats
    return 200 if args.paper_scale else 50


def _print_metrics(metrics: ScheduleMetrics) -> None:
    for name in METRIC_FIELDS:
        value = getattr(metrics, name)
        rendered = ("true" if value else "false") if name == "feasible" else format(value, ".9g")
        print(f"{name} = {rendered}")


def _cmd_generate(args) -> int:
    instance = generate_instance(
        args.nodes, args.seed, area=args.area, avoid_bs_disc=args.avoid_bs_disc
    )
    with open(args.out, "w", encoding="ascii") as f:
        f.write(instance_to_text(instance))
    print(f"wrote {args.out} ({instance.n} nodes)")
    return 0


def _cmd_schedule(args) -> int:
    with open(args.instance, encoding="ascii") as f:
        instance = instance_from_text(f.read())
    if args.algorithm == "ra_dmcs":
        schedule, metrics = plan_schedule(instance, seed=args.seed)
    else:
        schedule, metrics = one_to_one_schedule(instance)
    if args.out:
        with open(args.out, "w", encoding="ascii") as f:
            f.write(schedule_to_text(schedule))
    if args.metrics_out:
        row = {"algorithm": args.algorithm, "n": instance.n, "repeat": 0,
               "seed": args.seed, "status": "ok", **metrics_to_row(metrics)}
        write_csv(args.metrics_out, [row], _detail_fields())
    _print_metrics(metrics)
    return 0


def _cmd_evaluate(args) -> int:
    with open(args.instance, encoding="ascii") as f:
        instance = instance_from_text(f.read())
    with open(args.schedule, encoding="ascii") as f:
        schedule = schedule_from_text(f.read())
    metrics = execute_schedule(instance, schedule)
    if args.out:
        row = {"algorithm": "evaluate", "n": instance.n, "repeat": 0,
               "seed": 0, "status": "ok", **metrics_to_row(metrics)}
        write_csv(args.out, [row], _detail_fields())
    _print_metrics(metrics)
    return 0


def _detail_fields() -> list[str]:
    return ["algorithm", "n", "repeat", "seed", "status", *METRIC_FIELDS]


def _summary_fields() -> list[str]:
    fields = ["algorithm", "n", "runs"]
    for name in METRIC_FIELDS:
        fields += [f"{name}_mean", f"{name}_ci95"]
    return fields


def _cmd_experiment(args) -> int:
    cfg = ExperimentConfig(
        n_values=_parse_int_list(args.nodes),
        repeats=_resolve_repeats(args),
        area=args.area,
        seed=args.seed,
        algorithms=tuple(args.algorithms.split(",")),
        workers=args.workers,
    )
    summary, detail = run_experiment(cfg)
    write_csv(args.out, summary, _summary_fields())
    detail_path = _sibling(args.out, "_runs")
    write_csv(detail_path, detail, _detail_fields())
    failed = sum(1 for row in detail if row["status"] != "ok")
    print(f"wrote {args.out} and {detail_path} ({len(detail)} runs, {failed} failed)")
    return 0


def _cmd_atsp_bench(args) -> int:
    cfg = ExperimentConfig(
        n_values=_parse_int_list(args.nodes),
        repeats=_resolve_repeats(args),
        area=args.area,
        seed=args.seed,
        atsp_solvers=tuple(args.solvers.split(",")),
        workers=args.workers,
    )
    rows = run_atsp_bench(cfg)
    fields = ["solver", "n", "repeat", "seed", "status",
              "tour_energy", "moving_time", "runtime", "held_karp_gap"]
    write_csv(args.out, rows, fields)
    failed = sum(1 for row in rows if row["status"] != "ok")
    print(f"wrote {args.out} ({len(rows)} rows, {failed} failed)")
    return 0


def _cmd_demo_toy(args) -> int:
    report, rows = demo_report()
    print(report, end="")
    if args.out:
        write_csv(args.out, rows, _detail_fields())
        print(f"wrote {args.out}")
    return 0


def _sibling(path: str, suffix: str) -> str:
    if path.endswith(".csv"):
        return path[: -len(".csv")] + suffix + ".csv"
    return path + suffix


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="asymcharge",
        description="Charge-tour scheduling for sector chargers under asymmetric travel costs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a random instance file")
    p.add_argument("--nodes", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--area", type=float, default=200.0)
    p.add_argument("--avoid-bs-disc", action="store_true",
                   help="keep nodes outside charge range of the base station")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_generate)

    p = sub.add_parser("schedule", help="schedule one instance with one algorithm")
    p.add_argument("--instance", required=True)
    p.add_argument("--algorithm", choices=ALGORITHMS, default="ra_dmcs")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="schedule file to write")
    p.add_argument("--metrics-out", help="metrics CSV to write")
    p.set_defaults(fn=_cmd_schedule)

    p = sub.add_parser("evaluate", help="evaluate a schedule file against an instance")
    p.add_argument("--instance", required=True)
    p.add_argument("--schedule", required=True)
    p.add_argument("--out", help="metrics CSV to write")
    p.set_defaults(fn=_cmd_evaluate)

    p = sub.add_parser("experiment", help="sweep node counts over seeded instances")
    p.add_argument("--nodes", default="50,100,150,200,250,300,350,400,450",
                   help="comma-separated node counts")
    p.add_argument("--repeats", type=int, default=None)
    p.add_argument("--paper-scale", action="store_true", help="200 repeats instead of 50")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--area", type=float, default=200.0)
    p.add_argument("--algorithms", default=",".join(ALGORITHMS))
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_experiment)

    p = sub.add_parser("atsp-bench", help="compare tour solvers on random instances")
    p.add_argument("--nodes", default="6,8,10,14,20", help="comma-separated point counts")
    p.add_argument("--repeats", type=int, default=None)
    p.add_argument("--paper-scale", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--area", type=float, default=200.0)
    p.add_argument("--solvers", default=",".join(ATSP_SOLVERS))
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_atsp_bench)

    p = sub.add_parser("demo-toy", help="run both schedulers on the tabulated demo scenario")
    p.add_argument("--out", help="metrics CSV to write")
    p.set_defaults(fn=_cmd_demo_toy)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except SchedulingError as exc:
        print(f"error:{exc.code}: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error:io: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
