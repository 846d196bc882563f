"""
Task fan-out and seeded streams
"""
import numpy as np

from src.core.config import settings
from src.core.random import module_rng, task_seeds
from src.workers.pool import run_parallel, worker_count


def square(x):
    return x * x


def test_results_keep_submission_order():
    args = [(k,) for k in range(25)]
    assert run_parallel(square, args, n_jobs=1) == [k * k for k in range(25)]
    assert run_parallel(square, args, n_jobs=4, backend="threading") == [k * k for k in range(25)]


def test_worker_count_is_capped():
    assert worker_count(None) == settings.threads
    assert worker_count(10 ** 6) == settings.threads
    assert worker_count(1) == 1


def test_streams_depend_on_seed_and_label():
    a = module_rng(5, "audit").uniform(size=4)
    assert np.array_equal(a, module_rng(5, "audit").uniform(size=4))
    assert not np.array_equal(a, module_rng(5, "restart-1").uniform(size=4))
    assert not np.array_equal(a, module_rng(6, "audit").uniform(size=4))


def test_task_seeds():
    seeds = task_seeds(1, "audit", 8)
    assert seeds == task_seeds(1, "audit", 8)
    assert len(set(seeds)) == 8
