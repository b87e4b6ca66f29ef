import logging
import os

import gin

from tsif.constants import THREADS_ENV


@gin.configurable("Parallel")
def threads(n_jobs: int = None) -> int:
    """Number of joblib workers: the gin binding if set, else ``TSIF_THREADS``, else 1."""
    if n_jobs is None:
        raw = os.environ.get(THREADS_ENV, "1")
        try:
            n_jobs = int(raw)
        except ValueError:
            logging.warning(f"Ignoring non-integer {THREADS_ENV}={raw!r}; running single-threaded.")
            n_jobs = 1
    return max(1, n_jobs)
