"""Size caps for the exhaustive searches.

Every enumeration in the package is bounded.  Exceeding a cap raises
:class:`BudgetExceeded`; nothing is ever silently truncated.
"""
from __future__ import annotations

import contextlib
import contextvars
from dataclasses import dataclass, replace


class BudgetExceeded(RuntimeError):
    """Raised when a construction or search would exceed a configured cap."""

    def __init__(self, cap: str, limit: int, requested: int):
        self.cap = cap
        self.limit = limit
        self.requested = requested
        super().__init__(f"size budget exceeded: {cap} limit {limit}, needed {requested}")


@dataclass(frozen=True)
class Budget:
    max_objects: int = 64
    max_morphisms: int = 4096
    max_sections: int = 4096
    max_fiber: int = 16

    def scaled(self, factor: float) -> Budget:
        """All caps multiplied by one factor (the CLI ``--budget`` knob)."""
        return replace(
            self,
            max_objects=int(self.max_objects * factor),
            max_morphisms=int(self.max_morphisms * factor),
            max_sections=int(self.max_sections * factor),
            max_fiber=int(self.max_fiber * factor),
        )

    def check(self, cap: str, requested: int) -> None:
        limit = getattr(self, cap)
        if requested > limit:
            raise BudgetExceeded(cap, limit, requested)

    def check_groupoid(self, G) -> None:
        self.check("max_objects", len(G.objects))
        self.check("max_morphisms", len(G.morphisms))


DEFAULT_BUDGET = Budget()

_current: contextvars.ContextVar[Budget] = contextvars.ContextVar("equigpd_budget", default=DEFAULT_BUDGET)


def current_budget() -> Budget:
    return _current.get()


@contextlib.contextmanager
def use_budget(budget: Budget):
    """Temporarily replace the active budget."""
    token = _current.set(budget)
    try:
        yield budget
    finally:
        _current.reset(token)
