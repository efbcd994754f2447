"""Consistency reports: aggregated per-check residual ledger."""
from __future__ import annotations

import json
import os
import tempfile
import time
from dataclasses import dataclass, field

from .scalar import MPQ, complex_pair, rat_str

EXACT_ZERO = "exact-zero"
WITHIN_TOL = "within-tol"
FAILED = "failed"
STATUSES = (EXACT_ZERO, WITHIN_TOL, FAILED)

MAX_COUNTEREXAMPLES = 5


def _json_value(v):
    if isinstance(v, MPQ):
        return rat_str(v)
    if isinstance(v, complex):
        return complex_pair(v)
    if isinstance(v, dict):
        return {k: _json_value(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_json_value(x) for x in v]
    if hasattr(v, "expv"):
        return {"exp": rat_str(v.expv)}
    if hasattr(v, "id") and not isinstance(v, (int, float, str)):
        return v.id
    return v


def _magnitude(residual):
    if isinstance(residual, MPQ):
        return abs(residual)
    return abs(complex(residual))


@dataclass
class Entry:
    """All observations of one check across trials."""

    id: str
    exact: bool = True
    tol: float | None = None
    count: int = 0
    failures: int = 0
    resamples: int = 0
    worst: object = None
    counterexamples: list = field(default_factory=list)

    @property
    def status(self) -> str:
        if self.failures:
            return FAILED
        return EXACT_ZERO if self.exact else WITHIN_TOL

    def observe(self, residual, ok: bool, detail=None):
        self.count += 1
        mag = _magnitude(residual)
        if self.worst is None or mag > self.worst:
            self.worst = mag
        if not ok:
            self.failures += 1
            if len(self.counterexamples) < MAX_COUNTEREXAMPLES:
                self.counterexamples.append(_json_value({"residual": residual, **(detail or {})}))

    def to_dict(self) -> dict:
        out = {
            "id": self.id,
            "status": self.status,
            "residual": _json_value(self.worst) if self.exact else (float(self.worst) if self.worst is not None else None),
            "resamples": self.resamples,
            "count": self.count,
            "failures": self.failures,
        }
        if self.tol is not None:
            out["tol"] = self.tol
        if self.counterexamples:
            out["counterexamples"] = self.counterexamples
        return out


class ConsistencyReport:
    """Per-check ledger.  Entries are keyed by check id and merge associatively."""

    def __init__(self, command: str = "", config: dict | None = None):
        self.command = command
        self.config = dict(config or {})
        self.entries: dict[str, Entry] = {}
        self.notes: dict = {}
        self.trace: list = []
        self._t0 = time.perf_counter()
        self.wall_time = None

    # recording ---------------------------------------------------------
    def _entry(self, check_id, exact, tol):
        e = self.entries.get(check_id)
        if e is None:
            e = self.entries[check_id] = Entry(check_id, exact=exact, tol=tol)
        return e

    def record_exact(self, check_id: str, residual, detail=None):
        e = self._entry(check_id, True, None)
        e.observe(residual, residual == 0, detail)
        return residual == 0

    def record_numeric(self, check_id: str, residual, tol: float, detail=None):
        e = self._entry(check_id, False, tol)
        mag = abs(complex(residual))
        ok = mag < tol
        e.observe(residual, ok, detail)
        return ok

    def record_bool(self, check_id: str, ok: bool, detail=None):
        e = self._entry(check_id, True, None)
        e.observe(MPQ(0) if ok else MPQ(1), ok, detail)
        return ok

    def record_error(self, check_id: str, message: str, detail=None):
        e = self._entry(check_id, True, None)
        e.observe(MPQ(1), False, {"error": message, **(detail or {})})

    def add_resamples(self, check_id: str, n: int):
        if n:
            self._entry(check_id, True, None).resamples += n

    def note(self, key, value):
        self.notes[key] = _json_value(value)

    def merge(self, other: "ConsistencyReport") -> "ConsistencyReport":
        for cid, e in other.entries.items():
            mine = self.entries.get(cid)
            if mine is None:
                self.entries[cid] = Entry(e.id, e.exact, e.tol, e.count, e.failures, e.resamples,
                                          e.worst, list(e.counterexamples))
                continue
            mine.count += e.count
            mine.failures += e.failures
            mine.resamples += e.resamples
            if e.worst is not None and (mine.worst is None or e.worst > mine.worst):
                mine.worst = e.worst
            room = MAX_COUNTEREXAMPLES - len(mine.counterexamples)
            mine.counterexamples.extend(e.counterexamples[:max(room, 0)])
        for k, v in other.notes.items():
            self.notes.setdefault(k, v)
        self.trace.extend(other.trace)
        return self

    # summaries ---------------------------------------------------------
    @property
    def failed(self) -> int:
        return sum(1 for e in self.entries.values() if e.status == FAILED)

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def summary(self) -> dict:
        counts = {s: 0 for s in STATUSES}
        for e in self.entries.values():
            counts[e.status] += 1
        return {"checks": len(self.entries), **counts,
                "observations": sum(e.count for e in self.entries.values())}

    def finish(self):
        if self.wall_time is None:
            self.wall_time = time.perf_counter() - self._t0
        return self

    def to_dict(self) -> dict:
        self.finish()
        return {
            "command": self.command,
            "config": _json_value(self.config),
            "summary": self.summary(),
            "entries": [e.to_dict() for e in self.entries.values()],
            "notes": self.notes,
            "trace": self.trace,
            "wall_time_s": round(self.wall_time, 6),
        }

    def to_json(self, indent=2) -> str:
        return json.dumps(self.to_dict(), indent=indent, ensure_ascii=False)

    def write(self, path: str):
        write_atomic(path, self.to_json() + "\n")

    def summary_line(self) -> str:
        s = self.summary()
        verdict = "PASS" if self.ok else "FAIL"
        return (f"{verdict} {self.command}: {s['checks']} checks, {s[EXACT_ZERO]} exact-zero, "
                f"{s[WITHIN_TOL]} within-tol, {s[FAILED]} failed ({s['observations']} observations)")


def write_atomic(path: str, text: str):
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
