"""Numerical tolerances, kept in one place.

Values are read through :func:`current`, so a caller (the CLI, or a test) can
override them for a block of code with :func:`use_tolerances` without any
module-level mutation.
"""

from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass, fields, replace


@dataclass(frozen=True)
class Tolerances:
    on: float = 1e-9            # incidence: |signed residual| below this is "On"
    geodesic: float = 1e-8      # minimal separation of geodesic endpoints / defining points
    boundary: float = 1e-12     # Point invariant: |z|^2 < 1 - boundary
    vertex: float = 1e-7        # vertex merge, ideal-vertex classification, fixed-point test
    near_boundary: float = 1e-6 # user-supplied points with |z| > 1 - near_boundary are rejected
    margin: float = 1e-6        # genericity margin used by the tracer

    def __post_init__(self):
        for f in fields(self):
            if not getattr(self, f.name) > 0:
                raise ValueError(f"tolerance {f.name!r} must be positive")

    @classmethod
    def names(cls):
        return [f.name for f in fields(cls)]


_CURRENT = ContextVar("dirichlet_morse_tolerances", default=Tolerances())


def current() -> Tolerances:
    return _CURRENT.get()


@contextmanager
def use_tolerances(tol=None, **overrides):
    base = tol if tol is not None else current()
    token = _CURRENT.set(replace(base, **overrides))
    try:
        yield _CURRENT.get()
    finally:
        _CURRENT.reset(token)
