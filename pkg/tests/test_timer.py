import pytest
from fcechlib.timer import Timer


class FakeClock:
    def __init__(self, step_ns: int) -> None:
        self.now = 0
        self.step_ns = step_ns

    def __call__(self) -> int:
        self.now += self.step_ns
        return self.now


class TestTimer:
    def test_not_started(self) -> None:
        timer = Timer()
        with pytest.raises(RuntimeError) as excinfo:
            timer.elapsed_time()
        assert "must be called" in str(excinfo.value)
        with pytest.raises(RuntimeError):
            timer.lap("x")

    @pytest.mark.parametrize("step_ns", [10, 1_000, 250_000_000])
    def test_elapsed_time(self, step_ns) -> None:
        timer = Timer(FakeClock(step_ns))
        timer.start()
        assert timer.elapsed_time_ns() == step_ns
        assert timer.elapsed_time() == pytest.approx(2 * step_ns * 1e-9)

    def test_laps(self) -> None:
        clock = FakeClock(1_000_000)
        timer = Timer(clock)
        timer.start()
        assert timer.lap("a") == pytest.approx(1e-3)
        clock.step_ns = 3_000_000
        assert timer.lap("b") == pytest.approx(3e-3)
        assert [label for label, _ in timer.laps] == ["a", "b"]
        assert timer.laps[1][1] == pytest.approx(3e-3)

    def test_reset_clears_laps(self) -> None:
        timer = Timer(FakeClock(5))
        timer.start()
        timer.lap("a")
        timer.reset()
        assert timer.laps == []
        assert timer.elapsed_time_ns() == 5

    def test_real_clock(self) -> None:
        timer = Timer()
        timer.start()
        assert timer.elapsed_time_ns() >= 0
