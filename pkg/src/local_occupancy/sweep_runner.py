"""SweepRunner - executes sweep-*.yaml over a range of seeds."""

import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

import yaml

from local_occupancy.colouring import colour, fractional_greedy, iterated_split, random_cover
from local_occupancy.errors import LocalOccupancyError
from local_occupancy.graph import Graph, generate
from local_occupancy.observability import enrich_context, get_tracer
from local_occupancy.occupancy import fractional_budgets, params_for_setting, verify_local_occupancy
from local_occupancy.settings import SETTINGS, SWEEPS_DIR
from local_occupancy.sparsity import parse_setting

tracer = get_tracer(__name__)

State = Dict[str, Any]
Task = Callable[[State, Dict[str, Any]], Dict[str, Any]]


def _graph(state: State) -> Graph:
    g = state.get("graph")
    if g is None:
        raise LocalOccupancyError("no graph yet; run 'generate' first")
    return g


def _task_generate(state: State, params: Dict[str, Any]) -> Dict[str, Any]:
    g = generate(params.get("graph", state["spec"]), state["seed"])
    state["graph"] = g
    return {"success": True, "n": g.n, "edges": g.edge_count, "maxDegree": g.max_degree}


def _task_occupancy(state: State, params: Dict[str, Any]) -> Dict[str, Any]:
    g = _graph(state)
    certificate = params_for_setting(
        g, parse_setting(params.get("setting", "triangle-free")),
        float(params.get("lambda", SETTINGS.DEFAULT_LAMBDA)),
        local=bool(params.get("local", False)), strong=bool(params.get("strong", True)),
    )
    report = verify_local_occupancy(g, certificate)
    return {"success": report.verified, "minGap": report.min_gap}


def _task_colour(state: State, params: Dict[str, Any]) -> Dict[str, Any]:
    g = _graph(state)
    cover = random_cover(g, int(params.get("k", max(g.max_degree, 1))), state["seed"],
                         float(params.get("density", 1.0)))
    certificate = colour(
        cover, float(params.get("lambda", SETTINGS.DEFAULT_LAMBDA)), int(params.get("ell", 3)),
        max_rounds=int(params.get("rounds", SETTINGS.DEFAULT_ROUNDS)), seed=state["seed"],
        factor=params.get("factor"),
    )
    summary: Dict[str, Any] = {"success": certificate.verified,
                               "rounds": [s.rounds for s in certificate.phase_stats]}
    if certificate.failure is not None:
        summary["failedPhase"] = certificate.failure.phase
    return summary


def _task_fractional(state: State, params: Dict[str, Any]) -> Dict[str, Any]:
    g = _graph(state)
    lam = float(params.get("lambda", SETTINGS.DEFAULT_LAMBDA))
    certificate = params_for_setting(g, parse_setting(params.get("setting", "triangle-free")),
                                     lam, local=True)
    outcome = fractional_greedy(g, lam, fractional_budgets(g, certificate),
                                step=params.get("step"), seed=state["seed"])
    valid = outcome.colouring is not None and outcome.colouring.is_valid(g)
    return {"success": valid, "steps": outcome.steps}


def _task_split(state: State, params: Dict[str, Any]) -> Dict[str, Any]:
    g = _graph(state)
    result = iterated_split(g, float(params["f"]), float(params.get("delta", 0.005)),
                            float(params.get("zeta", 0.04)), seed=state["seed"])
    return {"success": True, "j": result.j, "parts": len(result.parts),
            "maxPartDegree": max(result.part_degrees, default=0)}


TASKS: Dict[str, Task] = {
    "generate": _task_generate,
    "occupancy": _task_occupancy,
    "colour": _task_colour,
    "fractional": _task_fractional,
    "split": _task_split,
}


def run_seed(sweep: Dict[str, Any], sweep_name: str, seed: int) -> Dict[str, Any]:
    """Run every step of a sweep for one seed. Errors are recorded, never raised."""
    state: State = {"seed": seed, "spec": sweep.get("graph")}
    results: List[Dict[str, Any]] = []
    for step in sweep.get("steps", []):
        task_id = step.get("run")
        if not task_id:
            continue
        task = TASKS.get(task_id)
        if task is None:
            enrich_context(event="task_not_found", sweep=sweep_name, task=task_id).error(
                f"Task '{task_id}' not found"
            )
            results.append({"task": task_id, "success": False,
                            "error": f"task '{task_id}' not found"})
            continue

        step_log = enrich_context(event="sweep_step", sweep=sweep_name, task=task_id, seed=seed)
        start = time.time()
        try:
            summary = task(state, step.get("with") or {})
            results.append({"task": task_id, **summary})
            step_log.bind(duration_ms=int((time.time() - start) * 1000)).info("Task completed")
        except (LocalOccupancyError, KeyError, ValueError) as e:
            results.append({"task": task_id, "success": False, "error": str(e)})
            step_log.bind(event="step_error", error=str(e)).error("Task failed")
    return {"seed": seed, "steps": results}


class SweepRunner:
    """Executes sweep-*.yaml files: one graph per seed, steps in order."""

    def __init__(self, config_dir: Optional[Path] = None):
        self.config_dir = config_dir or SWEEPS_DIR

    def list_sweeps(self) -> List[str]:
        log = enrich_context(event="list_sweeps")
        sweeps = sorted(f.stem.replace("sweep-", "") for f in self.config_dir.glob("sweep-*.yaml"))
        log.bind(sweeps=sweeps, count=len(sweeps)).info("Listed available sweeps")
        return sweeps

    def load_sweep(self, name: str) -> dict:
        log = enrich_context(event="load_sweep", sweep=name)
        path = self.config_dir / f"sweep-{name}.yaml"
        if not path.exists():
            log.bind(event="sweep_not_found", path=str(path)).warning("Sweep file not found")
            raise FileNotFoundError(f"Sweep not found: {name}")
        with open(path) as f:
            sweep = yaml.safe_load(f) or {}
        log.bind(steps_count=len(sweep.get("steps", []))).info("Sweep loaded successfully")
        return sweep

    def run_sweep(self, name: str, jobs: int = 1) -> dict:
        """
        Run a sweep over its seed range.

        Returns:
            {
                "sweep": str,
                "description": str,
                "runs": [{"seed": int, "steps": [{"task": str, "success": bool, ...}]}],
                "totals": {task: {"success": int, "total": int}}
            }
        """
        log = enrich_context(event="sweep_start", sweep=name)
        sweep = self.load_sweep(name)
        seeds_config = sweep.get("seeds") or {}
        start_seed = int(seeds_config.get("start", SETTINGS.DEFAULT_SEED))
        seeds = list(range(start_seed, start_seed + int(seeds_config.get("count", 1))))
        log.bind(seeds=len(seeds), jobs=jobs).info("Starting sweep")

        total_start = time.time()
        with tracer.start_as_current_span("sweep.run") as span:
            span.set_attribute("sweep.name", name)
            span.set_attribute("sweep.seeds", len(seeds))
            if jobs > 1:
                with ProcessPoolExecutor(max_workers=jobs) as pool:
                    runs = list(pool.map(run_seed, [sweep] * len(seeds), [name] * len(seeds),
                                         seeds))
            else:
                runs = [run_seed(sweep, name, seed) for seed in seeds]

        totals: Dict[str, Dict[str, int]] = {}
        for run in runs:
            for step in run["steps"]:
                entry = totals.setdefault(step["task"], {"success": 0, "total": 0})
                entry["total"] += 1
                entry["success"] += int(bool(step.get("success")))

        log.bind(event="sweep_complete", total_duration_ms=int((time.time() - total_start) * 1000),
                 totals=totals).info("Sweep completed")
        return {
            "sweep": name,
            "description": sweep.get("description", ""),
            "runs": runs,
            "totals": totals,
        }
