import sys
from collections.abc import Iterable
from pathlib import Path
from threading import Lock
from typing import Any, TextIO


class Logger(object):
    _sep: str
    _eol: str
    _labels: list[str]
    _rows: list[list[Any]]
    _fpath: Path | None
    _lock: Lock

    def __init__(
        self, fname: str | Path | None = None, sep: str = ",", eol: str = "\n"
    ) -> None:
        self._sep = sep
        self._eol = eol
        self._labels = []
        self._rows = []
        self._lock = Lock()
        self._fpath = None
        self.fpath = fname

    def __len__(self) -> int:
        with self._lock:
            return len(self._rows)

    @property
    def sep(self) -> str:
        return self._sep

    @property
    def eol(self) -> str:
        return self._eol

    @property
    def labels(self) -> list[str]:
        with self._lock:
            return list(self._labels)

    @property
    def fpath(self) -> str | None:
        with self._lock:
            return None if self._fpath is None else str(self._fpath)

    @fpath.setter
    def fpath(self, fname: str | Path | None) -> None:
        with self._lock:
            self._fpath = None if fname is None else Path(fname)

    def set_labels(self, *args: str | Iterable[str]) -> None:
        listed = [[arg] if isinstance(arg, str) else arg for arg in args]
        with self._lock:
            self._labels = [x for l in listed for x in l]

    def get_header(self) -> str:
        with self._lock:
            return self._sep.join(self._labels)

    def store_data(self, data: Iterable[Any]) -> None:
        with self._lock:
            self._rows.append(list(data))

    def store(self, *args: float | int | Iterable[Any]) -> None:
        """Stores one row; iterables are spliced, so wrap strings in a list."""
        listed = [[arg] if isinstance(arg, (float, int)) else arg for arg in args]
        self.store_data(x for l in listed for x in l)

    def get_data(self) -> list[list[Any]]:
        with self._lock:
            return [list(row) for row in self._rows]

    def records(self) -> list[dict[str, Any]]:
        with self._lock:
            return [dict(zip(self._labels, row)) for row in self._rows]

    def column(self, label: str | int) -> list[Any]:
        with self._lock:
            c = self._labels.index(label) if isinstance(label, str) else label
            return [row[c] for row in self._rows]

    def erase_data(self) -> None:
        with self._lock:
            self._rows = []

    def _generate_alternative_fname(self, basefn: Path) -> Path:
        cnt = 1
        while True:
            cand = basefn.parent / f"{basefn.stem}.{cnt}{basefn.suffix}"
            if not cand.exists():
                return cand
            cnt += 1

    def _write(self, fobj: TextIO) -> None:
        header = self.get_header()
        if header:
            fobj.write(header + self._eol)
        with self._lock:
            fobj.writelines(
                self._sep.join(f"{x}" for x in row) + self._eol for row in self._rows
            )

    def dump(
        self,
        fname: str | Path | None = None,
        overwrite: bool = True,
        quiet: bool = False,
    ) -> Path | None:
        fpath = Path(fname) if fname is not None else self._fpath
        if fpath is None:
            self._write(sys.stdout)
            return None
        if not overwrite and fpath.exists():
            fpath = self._generate_alternative_fname(fpath)
        if not quiet:
            sys.stdout.write(f"Saving diagnostics in <{fpath}>... ")
            sys.stdout.flush()
        with open(fpath, mode="w") as fobj:
            self._write(fobj)
        if not quiet:
            sys.stdout.write("done.\n")
        return fpath
