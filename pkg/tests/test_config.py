import os

import pytest
from fcechlib.config import (
    DEFAULT_DEGREES,
    DEFAULT_DEPTH,
    DEFAULT_ORDERED_LIMIT,
    DEFAULT_WINDOW,
    Settings,
    parse_degree_range,
)

CONFIG_DIR_PATH = os.path.join(os.path.dirname(__file__), "config")


class TestParseDegreeRange:
    @pytest.mark.parametrize(
        "pattern,expected",
        [
            ("0..3", (0, 3)),
            ("1-2", (1, 2)),
            ("2", (2, 2)),
            (4, (4, 4)),
            ([0, 1], (0, 1)),
            ((1, 1), (1, 1)),
        ],
    )
    def test_parse(self, pattern, expected) -> None:
        assert parse_degree_range(pattern) == expected

    @pytest.mark.parametrize("pattern", ["a..b", "0..1..2", "3..1", -1, [0], [0, 1, 2], ""])
    def test_invalid(self, pattern) -> None:
        with pytest.raises(ValueError):
            parse_degree_range(pattern)


class TestSettings:
    def test_init(self) -> None:
        settings = Settings()
        assert settings.window == DEFAULT_WINDOW
        assert settings.degrees == DEFAULT_DEGREES
        assert settings.depth == DEFAULT_DEPTH
        assert settings.ordered_limit == DEFAULT_ORDERED_LIMIT
        assert settings.config == {}

    def test_load_config_path(self) -> None:
        config = os.path.join(CONFIG_DIR_PATH, "default.toml")
        settings = Settings(config)
        assert str(settings.config_path) == config
        assert settings.config["name"] == "default"
        assert settings.window == 3
        assert settings.degrees == (0, 2)
        assert settings.depth == 4
        assert settings.ordered_limit == 6

    def test_empty_config_warns(self) -> None:
        with pytest.warns(UserWarning) as record:
            settings = Settings(os.path.join(CONFIG_DIR_PATH, "empty.toml"))
        messages = [str(w.message) for w in record]
        assert "'limits' field is not defined" in messages
        assert "'chain' field is not defined" in messages
        assert settings.window == DEFAULT_WINDOW
        assert settings.depth == DEFAULT_DEPTH

    def test_no_limits(self) -> None:
        with pytest.warns(UserWarning, match="'limits' field is not defined"):
            settings = Settings(os.path.join(CONFIG_DIR_PATH, "no_limits.toml"))
        assert settings.depth == 2
        assert settings.degrees == DEFAULT_DEGREES

    def test_invalid_window(self) -> None:
        with pytest.raises(ValueError) as excinfo:
            Settings(os.path.join(CONFIG_DIR_PATH, "invalid_window.toml"))
        assert "window must be positive" in str(excinfo.value)

    def test_missing_table(self) -> None:
        settings = Settings()
        with pytest.raises(KeyError):
            settings.load_config({"chain": {"depth": 2}})

    @pytest.mark.parametrize("window", [1, 2, 5])
    def test_window_setter(self, window) -> None:
        settings = Settings()
        settings.window = window
        assert settings.window == window

    @pytest.mark.parametrize("degrees", ["1..4", [1, 4], "1-4"])
    def test_degrees_setter(self, degrees) -> None:
        settings = Settings()
        settings.set_degrees(degrees)
        assert settings.degrees == (1, 4)

    @pytest.mark.parametrize(
        "attr,value", [("window", 0), ("depth", 0), ("ordered_limit", -1)]
    )
    def test_setters_reject(self, attr, value) -> None:
        settings = Settings()
        with pytest.raises(ValueError):
            setattr(settings, attr, value)
