import time
from typing import Callable


class Timer(object):
    _time_started_ns: int | None
    _time_last_lap_ns: int
    _laps: list[tuple[str, int]]
    _time_ns_func: Callable[[], int]

    def __init__(self, time_ns_func: Callable[[], int] = time.perf_counter_ns) -> None:
        self._time_started_ns = None
        self._time_last_lap_ns = 0
        self._laps = []
        self._time_ns_func = time_ns_func

    def start(self) -> None:
        self._time_started_ns = self._time_ns_func()
        self._time_last_lap_ns = self._time_started_ns
        self._laps = []

    def reset(self) -> None:
        self.start()

    def _started(self) -> int:
        if self._time_started_ns is None:
            raise RuntimeError("Timer.start() must be called before reading the timer")
        return self._time_started_ns

    def elapsed_time_ns(self) -> int:
        return self._time_ns_func() - self._started()

    def elapsed_time(self) -> float:
        return self.elapsed_time_ns() * 1e-9

    def lap(self, label: str) -> float:
        """Records the time since the previous lap and returns it in seconds."""
        self._started()
        now = self._time_ns_func()
        self._laps.append((label, now - self._time_last_lap_ns))
        self._time_last_lap_ns = now
        return self._laps[-1][1] * 1e-9

    @property
    def laps(self) -> list[tuple[str, float]]:
        return [(label, ns * 1e-9) for label, ns in self._laps]
