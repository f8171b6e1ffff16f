# src/utils/performance_decorator.py
import functools
import logging
import time
from typing import Callable, Dict, Optional

import psutil

from src.config.settings import MAX_TOTAL_DIM
from src.utils.errors import MemoryGuardError

logger = logging.getLogger(__name__)

BYTES_PER_ENTRY = 16  # complex128


class PerformanceTracker:
    """
    Tracks wall time and resident memory of numerical operations
    """

    def __init__(self):
        # Initialize process for memory tracking
        try:
            self.process = psutil.Process()
            self.memory_tracking_available = True
        except psutil.Error:
            self.process = None
            self.memory_tracking_available = False
            logger.debug("psutil process handle unavailable - memory tracking disabled")

    def get_current_memory_usage(self) -> float:
        """Get current memory usage in MB"""
        if not self.memory_tracking_available:
            return 0.0

        try:
            return self.process.memory_info().rss / 1024 / 1024
        except psutil.Error:
            return 0.0

    def get_system_memory_info(self) -> Dict[str, float]:
        """Get system memory information in MB"""
        try:
            memory = psutil.virtual_memory()
            return {
                "available": memory.available / 1024 / 1024,
                "total": memory.total / 1024 / 1024,
                "percent": memory.percent
            }
        except psutil.Error:
            return {"available": 8192.0, "total": 16384.0, "percent": 50.0}

    def estimate_memory_usage(self, total_dim: int, n_matrices: int = 6) -> Dict:
        """
        Estimate the dense working set for operators on a space of dimension total_dim

        Parameters:
        -----------
        total_dim : int
            Dimension of the full tensor-product space
        n_matrices : int
            Number of total_dim x total_dim complex matrices alive at once

        Returns:
        --------
        dict : estimated_memory (MB), available_memory (MB), memory_warnings
        """
        estimated_memory = BYTES_PER_ENTRY * float(total_dim) ** 2 * n_matrices / 1024 / 1024
        available_memory = self.get_system_memory_info()["available"]

        warnings = []
        if estimated_memory > available_memory * 0.8:
            warnings.append(
                f"High memory usage expected ({estimated_memory:.0f}MB of {available_memory:.0f}MB available)"
            )

        return {
            "estimated_memory": estimated_memory,
            "available_memory": available_memory,
            "memory_warnings": warnings
        }


def check_memory_budget(total_dim: int, max_total_dim: int = MAX_TOTAL_DIM,
                        tracker: Optional[PerformanceTracker] = None) -> Dict:
    """
    Refuse dense work above the dimension cap and warn when memory looks tight
    """
    if total_dim > max_total_dim:
        raise MemoryGuardError(
            f"Total dimension {total_dim} exceeds the cap of {max_total_dim}"
        )

    tracker = tracker or PerformanceTracker()
    estimate = tracker.estimate_memory_usage(total_dim)
    for warning in estimate["memory_warnings"]:
        logger.warning(warning)
    return estimate


def track_performance(operation_type: str, track_memory: bool = True):
    """
    Decorator logging elapsed time and memory delta of an operation at DEBUG level
    """

    def decorator(func: Callable) -> Callable:
        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            if not logger.isEnabledFor(logging.DEBUG):
                return func(*args, **kwargs)

            tracker = PerformanceTracker()
            operation_name = operation_type.replace("_", " ")
            initial_memory = tracker.get_current_memory_usage() if track_memory else 0.0
            start_time = time.perf_counter()

            try:
                result = func(*args, **kwargs)
            except Exception:
                execution_time = time.perf_counter() - start_time
                logger.debug("%s failed after %.3fs", operation_name, execution_time)
                raise

            execution_time = time.perf_counter() - start_time
            if track_memory:
                memory_used = tracker.get_current_memory_usage() - initial_memory
                logger.debug("%s completed in %.3fs (memory %+.1fMB)",
                             operation_name, execution_time, memory_used)
            else:
                logger.debug("%s completed in %.3fs", operation_name, execution_time)
            return result

        return wrapper
    return decorator
