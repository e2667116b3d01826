"""Check outcomes and their text / JSON-lines rendering."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Any, Callable

from ..errors import ProrankError, Undecided

PASS, FAIL, UNDECIDED, PRECONDITION = "pass", "fail", "undecided", "precondition"
VERDICTS = (PASS, FAIL, UNDECIDED, PRECONDITION)


@dataclass
class VerifyReport:
    check: str
    inputs: dict[str, Any]
    quantities: dict[str, Any] = field(default_factory=dict)
    verdict: str = PASS
    witness: dict[str, Any] | None = None
    millis: float | None = None
    message: str = ""

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"unknown verdict {self.verdict!r}")

    @property
    def ok(self) -> bool:
        return self.verdict in (PASS, PRECONDITION)

    def record(self, timing: bool = False) -> dict:
        rec = {
            "check": self.check,
            "inputs": _plain(self.inputs),
            "quantities": _plain(self.quantities),
            "verdict": self.verdict,
            "witness": _plain(self.witness),
            "message": self.message,
        }
        # wall-clock time is opt-in so that structured reports are byte-stable
        if timing and self.millis is not None:
            rec["millis"] = round(self.millis, 3)
        return rec

    def to_json(self, timing: bool = False) -> str:
        return json.dumps(self.record(timing), sort_keys=True, ensure_ascii=False)

    def to_text(self, timing: bool = False) -> str:
        target = self.inputs.get("group") or self.inputs.get("family") or ""
        qs = " ".join(f"{k}={_short(v)}" for k, v in sorted(self.quantities.items()))
        line = f"{self.verdict.upper():<12} {self.check:<12} {target}"
        if qs:
            line += f"  {qs}"
        if self.message:
            line += f"  # {self.message}"
        if timing and self.millis is not None:
            line += f"  [{self.millis:.1f} ms]"
        return line


def _plain(v):
    """JSON-safe copy: numpy scalars to int, tuples to lists, int keys to str."""
    if v is None or isinstance(v, (bool, str)):
        return v
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in sorted(v.items(), key=lambda kv: str(kv[0]))}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if hasattr(v, "tolist"):
        return _plain(v.tolist())
    if isinstance(v, int):
        return int(v)
    if isinstance(v, float):
        return v
    return str(v)


def _short(v) -> str:
    if isinstance(v, dict):
        return "{" + ",".join(f"{k}:{_short(x)}" for k, x in sorted(v.items(), key=lambda kv: str(kv[0]))) + "}"
    if isinstance(v, (list, tuple)):
        return "[" + ",".join(_short(x) for x in v) + "]"
    return str(v)


def run_check(check: str, inputs: dict, body: Callable[[VerifyReport], None]) -> VerifyReport:
    """Run ``body`` on a fresh report; caps turn into ``undecided``, never ``fail``."""
    rep = VerifyReport(check, dict(inputs))
    t0 = time.perf_counter()
    try:
        body(rep)
    except Undecided as exc:
        rep.verdict = UNDECIDED
        rep.witness = {"cap": exc.cap, "limit": exc.limit}
        rep.message = str(exc)
    except ProrankError as exc:
        rep.verdict = PRECONDITION
        rep.message = str(exc)
    rep.millis = (time.perf_counter() - t0) * 1000.0
    return rep


def exit_code(reports) -> int:
    verdicts = {r.verdict for r in reports}
    if FAIL in verdicts:
        return 1
    if UNDECIDED in verdicts:
        return 2
    return 0


def summary(reports) -> dict[str, int]:
    out = {v: 0 for v in VERDICTS}
    for r in reports:
        out[r.verdict] += 1
    return out


def render(reports, fmt: str = "text", timing: bool = False) -> str:
    if fmt == "structured":
        return "".join(r.to_json(timing) + "\n" for r in reports)
    lines = [r.to_text(timing) for r in reports]
    s = summary(reports)
    lines.append("summary: " + ", ".join(f"{k}={s[k]}" for k in VERDICTS))
    return "\n".join(lines) + "\n"
