import random

import pytest

from taskmodel.dag_task import DagTask


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run the long statistical studies")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


def layered(task_id, layers, period, deadline=None, full=True):
    """
    DAG from a list of layers of WCETs, nodes numbered 1.. in layer order.

    With ``full`` every node is wired to every node of the next layer,
    otherwise node i of a layer only feeds node i of the next (or the last one).
    """
    wcets = {}
    ids = []
    next_id = 1
    for layer in layers:
        ids.append(list(range(next_id, next_id + len(layer))))
        for node_id, wcet in zip(ids[-1], layer):
            wcets[node_id] = wcet
        next_id += len(layer)
    edges = []
    for upper, lower in zip(ids, ids[1:]):
        if full:
            edges += [(u, v) for u in upper for v in lower]
        else:
            edges += [(u, lower[min(i, len(lower) - 1)]) for i, u in enumerate(upper)]
    return DagTask.from_graph(task_id, wcets, edges, period, period if deadline is None else deadline)


def random_dag(rng: random.Random, task_id=1, max_nodes=12, max_wcet=20, edge_probability=0.3):
    """Random DAG with forward edges only; the period leaves room for the volume."""
    count = rng.randint(1, max_nodes)
    wcets = {i: rng.randint(1, max_wcet) for i in range(1, count + 1)}
    edges = [(u, v) for u in range(1, count + 1) for v in range(u + 1, count + 1)
             if rng.random() < edge_probability]
    period = rng.randint(1, 2 * sum(wcets.values()))
    return DagTask.from_graph(task_id, wcets, edges, period, period)


@pytest.fixture
def fork_join_dag():
    """1 and 2 start in parallel; 3 follows 1 and 4 follows 2 (W=100, L=50)."""
    return DagTask.from_graph(1, {1: 1, 2: 49, 3: 49, 4: 1}, [(1, 3), (2, 4)], period=100, deadline=75)


@pytest.fixture
def three_segment_dag():
    """Three fully connected segments {30,30,30} -> {20,20,20} -> {30}, D=T=130."""
    return layered(7, [[30, 30, 30], [20, 20, 20], [30]], period=130)


@pytest.fixture
def store(tmp_path):
    from storage.artifact_store import ArtifactStore
    return ArtifactStore(str(tmp_path / "data"))
