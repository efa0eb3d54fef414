"""
Author(s): Rate Control Lab <ratectl@example.org>

Copyright: (C) 2026 Rate Control Lab
SPDX-License-Identifier: BSD-3-Clause

Run independent simulation jobs in parallel with multiprocessing.
"""

import logging
import multiprocessing
import time
from typing import Any, Callable, Iterable, List

# Max processes to create in multiprocessing pool.
MAX_PROC_COUNT = 40


class JobPool:
    """Helper class to run independent jobs in a process pool.

    Results are always returned in submission order, so outputs built from them do not depend on the
    number of processes. A single process runs jobs in the calling process without a pool.
    """

    def __init__(self, processes: int = 1) -> None:
        if processes < 1:
            raise ValueError(f"Number of processes must be positive, got {processes}")
        self._processes = int(min(processes, MAX_PROC_COUNT))
        self._pool = None
        self._entered = False

    def __enter__(self):
        if self._processes > 1:
            logging.getLogger().debug("Setting up pool with %d processes.", self._processes)
            self._pool = multiprocessing.Pool(processes=self._processes)
        self._entered = True
        return self

    def __exit__(self, *exc):
        if self._pool is not None:
            self._pool.close()
            self._pool.join()
            self._pool = None
        self._entered = False

    def map(self, func: Callable[[Any], Any], jobs: Iterable[Any]) -> List[Any]:
        """Apply function on every job.

        Parameters
        ----------
        func : callable
            Picklable function taking a single job.
        jobs : iterable
            Job descriptions.

        Returns
        -------
        list
            Results in the order of jobs.
        """

        if not self._entered:
            raise RuntimeError("Multiprocessing method called outside of with statement.")

        jobs = list(jobs)
        start = time.time()
        if self._pool is None:
            results = [func(job) for job in jobs]
        else:
            results = list(self._pool.imap(func, jobs))
        logging.getLogger().debug("%d jobs processed in %.2f seconds.", len(jobs), time.time() - start)
        return results
