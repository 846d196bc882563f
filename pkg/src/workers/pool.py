"""
Order-preserving fan-out of independent tasks
"""
import logging
from typing import Callable, Iterable, List, Sequence

from joblib import Parallel, delayed
from tqdm.auto import tqdm

from src.core.config import settings

logger = logging.getLogger(__name__)


def worker_count(n_jobs: int = None) -> int:
    """Requested worker count capped by settings.threads"""
    if n_jobs is None or n_jobs <= 0:
        return settings.threads
    return min(n_jobs, settings.threads)


def run_parallel(
    func: Callable,
    arguments: Iterable[Sequence],
    n_jobs: int = None,
    backend: str = None,
    desc: str = None,
    progress: bool = False,
) -> List:
    """Apply func to each argument tuple; results come back in submission order"""
    arguments = list(arguments)
    jobs = worker_count(n_jobs)
    backend = backend or settings.parallel_backend
    logger.debug(f"Running {len(arguments)} tasks on {jobs} {backend} workers")

    if jobs == 1:
        return [func(*args) for args in tqdm(arguments, desc=desc, disable=not progress)]

    parallel = Parallel(n_jobs=jobs, backend=backend)
    return parallel(delayed(func)(*args) for args in tqdm(arguments, desc=desc, disable=not progress))
