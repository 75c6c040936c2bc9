import warnings
from collections.abc import Sequence
from pathlib import Path
from typing import Any, final

import tomli

DEFAULT_WINDOW = 2
DEFAULT_DEGREES = (0, 3)
DEFAULT_DEPTH = 3
DEFAULT_ORDERED_LIMIT = 8


def parse_degree_range(pattern: str | Sequence[int] | int) -> tuple[int, int]:
    """Degree range from "a..b", "a-b", "n", [a, b] or an int."""
    if isinstance(pattern, int):
        lo = hi = pattern
    elif isinstance(pattern, str):
        sep = ".." if ".." in pattern else "-"
        parts = pattern.split(sep)
        try:
            if len(parts) == 1:
                lo = hi = int(parts[0])
            elif len(parts) == 2:
                lo, hi = int(parts[0]), int(parts[1])
            else:
                raise ValueError
        except ValueError:
            raise ValueError(f"Invalid degree range: {pattern!r}")
    else:
        if len(pattern) != 2:
            raise ValueError(f"Degree range must have two entries: {list(pattern)}")
        lo, hi = int(pattern[0]), int(pattern[1])
    if lo < 0 or hi < lo:
        raise ValueError(f"Invalid degree range: {lo}..{hi}")
    return lo, hi


class Settings(object):
    _config_path: Path
    _config: dict[str, Any]
    _window: int
    _degrees: tuple[int, int]
    _depth: int
    _ordered_limit: int

    def __init__(self, config_path: str | Path | None = None) -> None:
        self._config = {}
        self._window = DEFAULT_WINDOW
        self._degrees = DEFAULT_DEGREES
        self._depth = DEFAULT_DEPTH
        self._ordered_limit = DEFAULT_ORDERED_LIMIT
        if config_path is not None:
            self.load_config_path(config_path)

    @property
    def config_path(self) -> Path:
        return self._config_path

    @final
    def load_config_path(self, config_path: str | Path) -> None:
        self._config_path = Path(config_path)
        with open(self._config_path, "rb") as f:
            c = tomli.load(f)
        self.load_config(c)

    @property
    def config(self) -> dict[str, Any]:
        return self._config

    def load_config(self, config_dict: dict[str, Any]) -> None:
        fcech_config = config_dict["fcech"]
        self._config = fcech_config
        self.load_limits(fcech_config)
        self.load_chain(fcech_config)
        self.load_simplicial(fcech_config)

    def load_limits(self, config: dict[str, Any]) -> None:
        try:
            limits = config["limits"]
        except KeyError:
            warnings.warn("'limits' field is not defined", UserWarning)
            return
        self.window = limits.get("window", DEFAULT_WINDOW)
        self.degrees = limits.get("degrees", DEFAULT_DEGREES)

    def load_chain(self, config: dict[str, Any]) -> None:
        try:
            self.depth = config["chain"]["depth"]
        except KeyError:
            warnings.warn("'chain' field is not defined", UserWarning)

    def load_simplicial(self, config: dict[str, Any]) -> None:
        try:
            self.ordered_limit = config["simplicial"]["ordered_limit"]
        except KeyError:
            pass

    @property
    def window(self) -> int:
        return self._window

    def set_window(self, window: int) -> None:
        if int(window) < 1:
            raise ValueError(f"window must be positive: {window}")
        self._window = int(window)

    @window.setter
    def window(self, window: int) -> None:
        self.set_window(window)

    @property
    def degrees(self) -> tuple[int, int]:
        return self._degrees

    def set_degrees(self, degrees: str | Sequence[int] | int) -> None:
        self._degrees = parse_degree_range(degrees)

    @degrees.setter
    def degrees(self, degrees: str | Sequence[int] | int) -> None:
        self.set_degrees(degrees)

    @property
    def depth(self) -> int:
        return self._depth

    def set_depth(self, depth: int) -> None:
        if int(depth) < 1:
            raise ValueError(f"depth must be positive: {depth}")
        self._depth = int(depth)

    @depth.setter
    def depth(self, depth: int) -> None:
        self.set_depth(depth)

    @property
    def ordered_limit(self) -> int:
        return self._ordered_limit

    def set_ordered_limit(self, limit: int) -> None:
        if int(limit) < 1:
            raise ValueError(f"ordered_limit must be positive: {limit}")
        self._ordered_limit = int(limit)

    @ordered_limit.setter
    def ordered_limit(self, limit: int) -> None:
        self.set_ordered_limit(limit)
