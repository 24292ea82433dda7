"""
Run monitor for dynamo-lab
인증 횟수, 검사별 소요 시간, 프로세스 메모리 수집
"""

import os
import time
import logging
import threading
from collections import defaultdict
from contextlib import contextmanager
from dataclasses import dataclass, asdict
from datetime import datetime, timezone
from typing import Any, Dict, Iterator, Optional

import psutil

logger = logging.getLogger(__name__)


@dataclass
class ProcessSnapshot:
    """프로세스 상태 스냅샷"""

    timestamp: str
    rss_mb: float
    cpu_count: int
    pid: int


class RunMonitor:
    """스레드 안전 카운터와 타이머"""

    def __init__(self):
        self.lock = threading.RLock()
        self.counters: Dict[str, int] = defaultdict(int)
        self.durations: Dict[str, float] = {}
        self.started_at = time.perf_counter()

    def increment(self, name: str, amount: int = 1) -> None:
        with self.lock:
            self.counters[name] += amount

    def record_duration(self, name: str, seconds: float) -> None:
        with self.lock:
            self.durations[name] = round(seconds, 3)

    @contextmanager
    def timed(self, name: str) -> Iterator[None]:
        start = time.perf_counter()
        try:
            yield
        finally:
            elapsed = time.perf_counter() - start
            self.record_duration(name, elapsed)
            logger.debug(f"{name} took {elapsed:.3f}s")

    def snapshot(self) -> ProcessSnapshot:
        process = psutil.Process(os.getpid())
        return ProcessSnapshot(
            timestamp=datetime.now(timezone.utc).isoformat(timespec="seconds"),
            rss_mb=round(process.memory_info().rss / 1024 / 1024, 1),
            cpu_count=psutil.cpu_count() or 1,
            pid=process.pid,
        )

    def summary(self) -> Dict[str, Any]:
        """Everything non-deterministic about a run, for the report's environment field."""
        with self.lock:
            return {
                **asdict(self.snapshot()),
                "elapsed_s": round(time.perf_counter() - self.started_at, 3),
                "durations_s": dict(sorted(self.durations.items())),
                "counters": dict(sorted(self.counters.items())),
            }

    def reset(self) -> None:
        with self.lock:
            self.counters.clear()
            self.durations.clear()
            self.started_at = time.perf_counter()


# 전역 모니터 인스턴스
_run_monitor: Optional[RunMonitor] = None


def get_run_monitor() -> RunMonitor:
    """전역 모니터 인스턴스 반환"""
    global _run_monitor
    if _run_monitor is None:
        _run_monitor = RunMonitor()
    return _run_monitor
