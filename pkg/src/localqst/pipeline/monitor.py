"""
Resource accounting for long-running commands
"""

import os
import time
from typing import Any, Dict, Optional

import psutil


def default_workers() -> int:
    """Physical core count, 1 when psutil cannot tell"""
    return psutil.cpu_count(logical=False) or 1


class ResourceMonitor:
    """Measures wall time, process CPU time and peak RSS of a block

    Usage::

        with ResourceMonitor() as monitor:
            ...
        monitor.summary()
    """

    def __init__(self, pid: Optional[int] = None):
        self.process = psutil.Process(pid if pid is not None else os.getpid())
        self.wall_seconds = 0.0
        self.cpu_seconds = 0.0
        self.peak_rss = 0
        self._wall_start = 0.0
        self._cpu_start = 0.0

    def _cpu_time(self) -> float:
        times = self.process.cpu_times()
        total = times.user + times.system
        # pool workers count towards the command, both joined and still running
        total += getattr(times, "children_user", 0.0)
        total += getattr(times, "children_system", 0.0)
        for child in self.process.children(recursive=True):
            try:
                child_times = child.cpu_times()
                total += child_times.user + child_times.system
            except psutil.NoSuchProcess:
                continue
        return total

    def sample(self) -> None:
        """Update peak RSS from the current memory footprint"""
        try:
            rss = self.process.memory_info().rss
        except psutil.NoSuchProcess:
            return
        self.peak_rss = max(self.peak_rss, rss)

    def __enter__(self) -> "ResourceMonitor":
        self._wall_start = time.perf_counter()
        self._cpu_start = self._cpu_time()
        self.sample()
        return self

    def __exit__(self, *exc_info: Any) -> None:
        self.sample()
        self.wall_seconds = time.perf_counter() - self._wall_start
        self.cpu_seconds = max(0.0, self._cpu_time() - self._cpu_start)

    def summary(self) -> Dict[str, Any]:
        return {
            "wall_seconds": round(self.wall_seconds, 3),
            "cpu_seconds": round(self.cpu_seconds, 3),
            "peak_rss_mb": round(self.peak_rss / (1024 * 1024), 1),
        }

    def __str__(self) -> str:
        s = self.summary()
        return (
            f"wall {s['wall_seconds']:.2f}s, cpu {s['cpu_seconds']:.2f}s, "
            f"peak rss {s['peak_rss_mb']:.1f} MB"
        )
