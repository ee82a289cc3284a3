"""Bookkeeping for the acceptance suite: one PASS/FAIL line per criterion."""

import time
from contextlib import contextmanager
from dataclasses import dataclass, field

import pytest


@dataclass
class Outcome:
    label: str
    failures: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    seconds: float = 0.0
    errored: bool = False

    @property
    def passed(self) -> bool:
        return not self.failures and not self.errored

    def line(self, cid: str) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"{status} [{cid}] {self.label} ({self.seconds:.2f} s)"
        details = self.failures + self.notes
        if details:
            text += " :: " + "; ".join(details)
        return text


RESULTS: dict[str, Outcome] = {}


class Checks:
    def __init__(self, outcome: Outcome):
        self.outcome = outcome

    def __call__(self, name: str, ok: bool) -> bool:
        if not ok:
            self.outcome.failures.append(name)
        return ok

    def note(self, text: str) -> None:
        self.outcome.notes.append(text)


@contextmanager
def criterion(cid: str, label: str, limit: float | None = None):
    """Collect soft checks for one criterion and fail once at the end.

    Several tests may feed the same criterion id; their checks accumulate.
    ``limit`` is a wall-clock bound in seconds for this block.
    """
    out = RESULTS.setdefault(cid, Outcome(label))
    checks = Checks(out)
    n0 = len(out.failures)
    t0 = time.perf_counter()
    try:
        yield checks
    except pytest.skip.Exception:
        raise
    except Exception as exc:
        out.errored = True
        out.failures.append(f"error: {type(exc).__name__}: {exc}"[:300])
        raise
    finally:
        dt = time.perf_counter() - t0
        out.seconds += dt
    if limit is not None:
        checks(f"runtime {dt:.1f} s exceeds {limit:g} s", dt < limit)
    if len(out.failures) > n0:
        pytest.fail("; ".join(out.failures[n0:]), pytrace=False)


def summary_lines() -> list[str]:
    return [RESULTS[cid].line(cid) for cid in sorted(RESULTS)]
