from typing import Any


class FcechError(Exception):
    pass


class NonComposable(FcechError, ValueError):
    pass


class NotAChainMap(FcechError, ValueError):
    pass


class ShapeMismatch(FcechError, ValueError):
    pass


class NotSimplicial(FcechError, ValueError):
    pass


class NotPairMap(FcechError, ValueError):
    pass


class OracleViolation(FcechError, ValueError):
    pass


class InvalidRefinement(FcechError, ValueError):
    pass


class UnsupportedMap(FcechError, ValueError):
    pass


class NotACover(FcechError, ValueError):
    pass


class NotCompact(FcechError, ValueError):
    pass


class ParseError(FcechError, ValueError):
    _path: str
    _msg: str

    def __init__(self, path: str, msg: str) -> None:
        self._path = path
        self._msg = msg
        super().__init__(f"{path}: {msg}" if path else msg)

    @property
    def path(self) -> str:
        return self._path

    @property
    def msg(self) -> str:
        return self._msg


class CheckFailure(FcechError, RuntimeError):
    """Commutativity check failed; carries the offending rung and matrices."""

    _witness: dict[str, Any]

    def __init__(self, msg: str, **witness: Any) -> None:
        self._witness = witness
        super().__init__(msg)

    @property
    def witness(self) -> dict[str, Any]:
        return self._witness


class LadderBroken(CheckFailure):
    pass


class RectangleBroken(CheckFailure):
    pass
