import argparse
import asyncio
import json
import logging
import sys
import traceback
from datetime import datetime
from typing import List, Optional

from fastapi import Depends, FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

import config
from analysis.edf_tests import FAST, TEST_MODES
from assignment import ALGORITHMS, FEDERATED, SFS
from assignment.documents import load_plan, plan_to_document, save_plan
from errors import SfsError
from generators.workload import GenConfig, count_heavy, gen_taskset
from simulation.checker import check_trace
from simulation.simulator import simulate_plan
from simulation.trace import export_trace_csv
from storage.artifact_store import ArtifactStore
from taskmodel.documents import (
    TaskSetDocument,
    load_taskset,
    save_taskset,
    taskset_from_document,
    taskset_to_document,
)
from workflow.sweep import SweepConfig, SweepRunner, heavy_statistics, max_gap, parse_util_grid

logger = logging.getLogger("sfs_toolkit")

EXIT_OK = 0
EXIT_UNSCHEDULABLE = 1
EXIT_USAGE = 2


def configure_logging(level: Optional[str] = None) -> None:
    """Log to SFS_LOG_FILE and stdout."""
    logging.basicConfig(
        level=getattr(logging, (level or config.SFS_LOG_LEVEL).upper(), logging.INFO),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=[
            logging.FileHandler(config.SFS_LOG_FILE),
            logging.StreamHandler(sys.stdout)
        ]
    )


# Create FastAPI app
app = FastAPI(
    title="SFS Schedulability Toolkit",
    description="Generate DAG task sets, compute SFS and federated plans, and validate them by simulation",
    version="1.0.0",
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

_store: Optional[ArtifactStore] = None


def get_store() -> ArtifactStore:
    """Dependency to get the artifact store instance."""
    global _store
    if _store is None:
        _store = ArtifactStore()
    return _store


# Models for API requests/responses
class GenerateRequest(BaseModel):
    m: int
    n: int
    util: float
    seed: Optional[int] = None
    set_index: int = 0


class CheckRequest(BaseModel):
    algorithm: str = SFS
    mode: str = FAST


class SimulateRequest(BaseModel):
    horizon: Optional[int] = None


class StatusResponse(BaseModel):
    status: str
    service: str
    version: str
    timestamp: str


def _fail(status_code: int, e: Exception, context: str) -> HTTPException:
    if status_code >= 500:
        logger.error(f"{context}: {e}")
        logger.error(traceback.format_exc())
    return HTTPException(status_code=status_code, detail=str(e))


@app.get("/", response_model=StatusResponse)
async def root():
    """Root endpoint providing basic API information."""
    return {
        "status": "online",
        "service": "SFS Schedulability Toolkit",
        "version": "1.0.0",
        "timestamp": datetime.now().isoformat()
    }


@app.get("/health")
async def health_check(store: ArtifactStore = Depends(get_store)):
    """Health check endpoint to verify the artifact store."""
    try:
        return {
            "status": "healthy",
            "tasksets": len(store.list_tasksets()),
            "plans": len(store.list_plans()),
            "timestamp": datetime.now().isoformat()
        }
    except Exception as e:
        logger.error(f"Health check failed: {e}")
        return {"status": "unhealthy", "error": str(e), "timestamp": datetime.now().isoformat()}


@app.post("/tasksets/generate")
async def generate_taskset(request: GenerateRequest, store: ArtifactStore = Depends(get_store)):
    """Generate a task set and store it."""
    try:
        seed = config.SFS_SEED if request.seed is None else request.seed
        cfg = GenConfig(request.m, request.n, request.util, rng_seed=seed)
        tasks = gen_taskset(cfg, request.set_index)
        taskset_id = store.store_taskset(request.m, tasks, {
            "n": request.n, "util": request.util, "seed": seed, "set_index": request.set_index})
        return {"taskset_id": taskset_id, "task_count": len(tasks), "heavy": count_heavy(tasks)}
    except SfsError as e:
        raise _fail(400, e, "Error generating task set")
    except Exception as e:
        raise _fail(500, e, "Error generating task set")


@app.post("/tasksets")
async def upload_taskset(document: TaskSetDocument, store: ArtifactStore = Depends(get_store)):
    """Store an uploaded task set document."""
    try:
        m, tasks = taskset_from_document(document)
        return {"taskset_id": store.store_taskset(m, tasks, {"source": "upload"}), "task_count": len(tasks)}
    except SfsError as e:
        raise _fail(400, e, "Error storing task set")
    except Exception as e:
        raise _fail(500, e, "Error storing task set")


@app.get("/tasksets/{taskset_id}")
async def get_taskset(taskset_id: str, store: ArtifactStore = Depends(get_store)):
    """Get a stored task set and the plans computed for it."""
    loaded = store.get_taskset(taskset_id)
    if loaded is None:
        raise HTTPException(status_code=404, detail="Task set not found")
    m, tasks = loaded
    return {
        "taskset_id": taskset_id,
        "document": json.loads(taskset_to_document(m, tasks).json()),
        "plans": store.list_plans(taskset_id),
    }


@app.post("/tasksets/{taskset_id}/check")
async def check_taskset(taskset_id: str, request: CheckRequest, store: ArtifactStore = Depends(get_store)):
    """Run an assignment algorithm on a stored task set and store the plan."""
    loaded = store.get_taskset(taskset_id)
    if loaded is None:
        raise HTTPException(status_code=404, detail="Task set not found")
    if request.algorithm not in ALGORITHMS or request.mode not in TEST_MODES:
        raise HTTPException(status_code=400, detail=f"unknown algorithm {request.algorithm!r} or mode {request.mode!r}")
    try:
        m, tasks = loaded
        plan = ALGORITHMS[request.algorithm](tasks, m, request.mode)
        plan_id = store.store_plan(taskset_id, plan, tasks)
        return {"plan_id": plan_id, "schedulable": plan.success, "outcome": str(plan.outcome)}
    except SfsError as e:
        raise _fail(400, e, f"Error checking task set {taskset_id}")
    except Exception as e:
        raise _fail(500, e, f"Error checking task set {taskset_id}")


@app.get("/plans/{plan_id}")
async def get_plan(plan_id: str, store: ArtifactStore = Depends(get_store)):
    """Get a stored plan document."""
    loaded = store.get_plan(plan_id)
    if loaded is None:
        raise HTTPException(status_code=404, detail="Plan not found")
    plan, tasks = loaded
    return json.loads(plan_to_document(plan, tasks).json())


@app.post("/plans/{plan_id}/simulate")
async def simulate_stored_plan(plan_id: str, request: SimulateRequest, store: ArtifactStore = Depends(get_store)):
    """Simulate a stored plan and report violations."""
    loaded = store.get_plan(plan_id)
    if loaded is None:
        raise HTTPException(status_code=404, detail="Plan not found")
    plan, tasks = loaded
    if not plan.success:
        raise HTTPException(status_code=400, detail=f"plan is unschedulable: {plan.outcome}")
    try:
        trace = simulate_plan(plan, tasks, request.horizon)
        violations = check_trace(trace, tasks, plan)
        return {
            "plan_id": plan_id,
            "clean": not violations,
            "jobs": len(trace.jobs),
            "violations": [{"rule": v.rule, "element": v.element, "message": v.message} for v in violations],
        }
    except Exception as e:
        raise _fail(500, e, f"Error simulating plan {plan_id}")


def start_api(port: int = config.SFS_API_PORT):
    """Start the FastAPI server with customizable port."""
    import uvicorn
    logger.info(f"Starting API server on port {port}...")
    uvicorn.run("main:app", host="0.0.0.0", port=port, log_level="info")


def _seed(value: Optional[int]) -> int:
    return config.SFS_SEED if value is None else value


def cmd_generate(args) -> int:
    cfg = GenConfig(args.m, args.n, args.util / 100, rng_seed=_seed(args.seed))
    tasks = gen_taskset(cfg, args.set_index)
    save_taskset(args.out, args.m, tasks)
    print(f"Generated {len(tasks)} tasks ({count_heavy(tasks)} heavy) for m={args.m} -> {args.out}")
    return EXIT_OK


def cmd_check(args) -> int:
    m, tasks = load_taskset(args.taskset)
    m = args.m or m
    plan = ALGORITHMS[args.algo](tasks, m, args.mode)
    save_plan(args.out, plan, tasks)
    verdict = "SCHEDULABLE" if plan.success else "UNSCHEDULABLE"
    print(f"{verdict}: {args.algo} on m={m} ({args.mode}) -> {plan.outcome}; plan written to {args.out}")
    return EXIT_OK if plan.success else EXIT_UNSCHEDULABLE


def cmd_simulate(args) -> int:
    plan, tasks = load_plan(args.plan)
    if not plan.success:
        print(f"Plan is unschedulable ({plan.outcome}); nothing to simulate")
        return EXIT_UNSCHEDULABLE
    trace = simulate_plan(plan, tasks, args.horizon)
    if args.trace_csv:
        export_trace_csv(trace, args.trace_csv)
    violations = check_trace(trace, tasks, plan)
    print(f"Simulated {len(trace.jobs)} DAG jobs up to t={trace.end_time}: {len(violations)} violations")
    for violation in violations:
        print(f"- {violation}")
    return EXIT_OK if not violations else EXIT_UNSCHEDULABLE


async def cmd_sweep(args) -> int:
    sweep = SweepConfig(
        m_list=tuple(args.m),
        n_list=tuple(args.n),
        util_grid=tuple(parse_util_grid(args.util_grid)),
        sets_per_point=args.sets,
        seed=_seed(args.seed),
        mode=args.mode,
        algorithms=tuple(args.algo),
    )
    runner = SweepRunner(sweep, args.workers, ArtifactStore() if args.store else None)
    rows = await runner.run()
    runner.write(rows, args.out)
    if SFS in sweep.algorithms and FEDERATED in sweep.algorithms:
        print(f"Max SFS-FS gap: {max_gap(rows) * 100:.1f} points")
    print(f"Wrote {len(rows)} rows to {args.out}")
    return EXIT_OK


def cmd_stats(args) -> int:
    stats = heavy_statistics(args.m, args.n, args.util / 100, args.sets, _seed(args.seed))
    print(f"m={args.m} n={args.n} U={args.util}%: {stats['mean']:.2f} heavy DAGs per set "
          f"(std {stats['std']:.2f}, {args.sets} sets)")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="SFS schedulability toolkit")
    commands = parser.add_subparsers(dest="command", required=True)

    generate = commands.add_parser("generate", help="Generate a synthetic task set")
    generate.add_argument("--m", type=int, required=True, help="Number of processors")
    generate.add_argument("--n", type=int, required=True, help="Number of DAG tasks")
    generate.add_argument("--util", type=float, required=True, help="Normalised utilisation in percent")
    generate.add_argument("--seed", type=int, help="Random seed (default: SFS_SEED)")
    generate.add_argument("--set-index", type=int, default=0, help="Index of the set within its point")
    generate.add_argument("--out", default="taskset.json", help="Output task set file")

    check = commands.add_parser("check", help="Run SFS or federated assignment on a task set")
    check.add_argument("taskset", help="Task set JSON file")
    check.add_argument("--m", type=int, help="Override the platform size of the file")
    check.add_argument("--algo", choices=sorted(ALGORITHMS), default=SFS)
    check.add_argument("--mode", choices=TEST_MODES, default=config.SFS_TEST_MODE)
    check.add_argument("--out", default="plan.json", help="Output plan file")

    simulate = commands.add_parser("simulate", help="Simulate a plan and check the trace")
    simulate.add_argument("plan", help="Plan JSON file")
    simulate.add_argument("--horizon", type=int, help="Release window (default: hyperperiod)")
    simulate.add_argument("--trace-csv", help="Also export the trace as CSV")

    sweep = commands.add_parser("sweep", help="Acceptance-ratio sweep")
    sweep.add_argument("--m", type=int, nargs="+", default=[8, 16])
    sweep.add_argument("--n", type=int, nargs="+", default=[10])
    sweep.add_argument("--util-grid", default=config.UTIL_GRID, help="Percent grid, start:stop:step or a,b,c")
    sweep.add_argument("--sets", type=int, default=config.SETS_PER_POINT, help="Task sets per grid point")
    sweep.add_argument("--seed", type=int, help="Random seed (default: SFS_SEED)")
    sweep.add_argument("--algo", nargs="+", choices=sorted(ALGORITHMS), default=[SFS, FEDERATED])
    sweep.add_argument("--mode", choices=TEST_MODES, default=config.SFS_TEST_MODE)
    sweep.add_argument("--workers", type=int, help="Worker processes (default: SFS_WORKERS)")
    sweep.add_argument("--store", action="store_true", help="Record run metadata in the artifact store")
    sweep.add_argument("--out", default="acceptance.csv", help="Output CSV file")

    stats = commands.add_parser("stats", help="Heavy-task statistics of the generator")
    stats.add_argument("--m", type=int, required=True)
    stats.add_argument("--n", type=int, required=True)
    stats.add_argument("--util", type=float, required=True, help="Normalised utilisation in percent")
    stats.add_argument("--sets", type=int, default=500)
    stats.add_argument("--seed", type=int)

    api = commands.add_parser("api", help="Start the API server")
    api.add_argument("--port", type=int, default=config.SFS_API_PORT, help="Port for the API server")
    return parser


async def run_cli(argv: Optional[List[str]] = None) -> int:
    """Run the application from command line; returns the exit code."""
    args = build_parser().parse_args(argv)
    try:
        if args.command == "generate":
            return cmd_generate(args)
        if args.command == "check":
            return cmd_check(args)
        if args.command == "simulate":
            return cmd_simulate(args)
        if args.command == "sweep":
            return await cmd_sweep(args)
        if args.command == "stats":
            return cmd_stats(args)
        start_api(args.port)
        return EXIT_OK
    except (SfsError, OSError) as e:
        logger.error(f"{args.command} failed: {e}")
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    configure_logging()
    try:
        sys.exit(asyncio.run(run_cli()))
    except KeyboardInterrupt:
        logger.info("Application stopped by user")
