import multiprocessing as mp
import os
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from typing import Any, Callable, Hashable, Iterable, Optional

from tqdm import tqdm

from lfsm_common.log_kit import logger


def single_thread_env():
    """
    Pin numerical libraries to one thread inside worker processes.

    Used as ProcessPoolExecutor(initializer=single_thread_env, ...)
    """
    os.environ["OMP_NUM_THREADS"] = "1"
    os.environ["MKL_NUM_THREADS"] = "1"
    os.environ["OPENBLAS_NUM_THREADS"] = "1"
    os.environ["NUMEXPR_NUM_THREADS"] = "1"
    os.environ["VECLIB_MAXIMUM_THREADS"] = "1"
    os.environ["POLARS_MAX_THREADS"] = "1"


def resolve_jobs(jobs: Optional[int]) -> int:
    """Worker count; None means hardware parallelism."""
    if jobs is None or jobs <= 0:
        return os.cpu_count() or 1
    return jobs


def run_parallel(
    fn: Callable[[Any], Any],
    tasks: Iterable[tuple[Hashable, Any]],
    desc: str,
    jobs: Optional[int] = None,
    show_progress: bool = True,
) -> dict[Hashable, Any]:
    """
    Evaluate fn over keyed tasks, in worker processes when jobs > 1.

    Args:
        fn: Picklable top-level function taking the task payload
        tasks: (key, payload) pairs; keys must be unique
        desc: Description for the progress bar
        jobs: Worker processes, None for hardware parallelism, 1 to run inline
        show_progress: Whether to draw the tqdm bar

    Returns:
        Mapping key -> result, independent of completion order
    """
    tasks = list(tasks)
    results: dict[Hashable, Any] = {}
    if not tasks:
        logger.warning(f"No tasks to execute for {desc}")
        return results

    n_jobs = min(resolve_jobs(jobs), len(tasks))
    t_start = time.perf_counter()

    with tqdm(total=len(tasks), desc=desc, unit="task", disable=not show_progress) as pbar:
        if n_jobs == 1:
            for key, payload in tasks:
                results[key] = fn(payload)
                pbar.update(1)
        else:
            with ProcessPoolExecutor(
                max_workers=n_jobs, mp_context=mp.get_context("spawn"), initializer=single_thread_env
            ) as executor:
                future_to_key = {executor.submit(fn, payload): key for key, payload in tasks}
                for future in as_completed(future_to_key):
                    results[future_to_key[future]] = future.result()
                    pbar.update(1)

    time_elapsed = time.perf_counter() - t_start
    time_elapsed = f"{time_elapsed:.2f}s" if time_elapsed < 60 else f"{time_elapsed / 60:.2f}mins"
    logger.debug(f"{desc}: {len(tasks)} tasks on {n_jobs} worker(s) in {time_elapsed}")

    return results
