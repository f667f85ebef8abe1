"""Box-ball automaton with a capacity-limited carrier, and the tropical
bridge from the rational lattice map to it.

One sweep moves a carrier left to right over boxes of capacity ``c_box``:

    u' = min(c_box - u, v) + max(0, u + v - c_carrier)
    v_next = u + v - u'

where v is the carrier load entering the box.  The carrier starts empty and
the window is extended to the right until it empties again, so the total
ball count is conserved exactly.  With an unbounded carrier this is the
plain box-ball rule.

The rational map turns into this automaton under x = exp(-X/eps) as
eps -> 0 with parameters alpha = exp(-A/eps), beta = exp(-B/eps): the
update becomes

    X' = min(-X, B + Y) + max(X + Y + A, 0) - A

(``tropical_step``), and the shift U = X + A, V = Y + B turns that into the
carrier rule with c_box = A, c_carrier = B.  ``ud_limit_check`` measures the
gap between the rational map at finite eps and the tropical step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import IO, Sequence

import numpy as np

from .errors import (
    CapacityViolation,
    EmptyField,
    InconsistentCapacities,
    NonPositiveEpsilon,
    NonPositiveParameter,
)

Capacity = int | float  # int, or math.inf for an unbounded carrier


def _check_capacity(name: str, value: Capacity) -> Capacity:
    if value == math.inf:
        return math.inf
    if isinstance(value, bool) or not isinstance(value, int):
        raise NonPositiveParameter(f"{name} must be a positive integer or inf")
    if value < 1:
        raise NonPositiveParameter(f"{name} must be >= 1, got {value}")
    return value


@dataclass(frozen=True)
class BBSCState:
    """Box occupancies plus the two capacities."""

    u: tuple[int, ...]
    c_box: int
    c_carrier: Capacity = math.inf

    def __post_init__(self):
        object.__setattr__(self, "u", tuple(int(v) for v in self.u))
        _check_capacity("c_box", self.c_box)
        _check_capacity("c_carrier", self.c_carrier)
        for k, v in enumerate(self.u):
            if not 0 <= v <= self.c_box:
                raise CapacityViolation(
                    f"box {k} holds {v}, outside [0, {self.c_box}]")

    @property
    def balls(self) -> int:
        return sum(self.u)


def bbsc_sweep(state: BBSCState) -> tuple[BBSCState, list[int]]:
    """One carrier sweep.  Returns (new state, carrier loads).

    The load list holds the carrier content entering each box of the new
    state plus a trailing 0 (the carrier leaves empty; the window grows to
    the right as needed to guarantee that).
    """
    cb, cc = state.c_box, state.c_carrier
    out: list[int] = []
    loads: list[int] = [0]
    v = 0
    for u in state.u:
        spill = max(0, u + v - cc) if cc != math.inf else 0
        u2 = min(cb - u, v) + spill
        v = u + v - u2
        out.append(u2)
        loads.append(v)
    while v > 0:
        u2 = min(cb, v)  # an appended empty box; no spill since v <= cc
        v -= u2
        out.append(u2)
        loads.append(v)
    return BBSCState(tuple(out), cb, cc), loads


def bbsc_step(state: BBSCState) -> BBSCState:
    """One time step of the capacity-limited rule."""
    return bbsc_sweep(state)[0]


def bbs_step(state: BBSCState) -> BBSCState:
    """One time step of the plain box-ball rule.

    The carrier bound is ignored (treated as unbounded) whatever the state's
    ``c_carrier`` says; use :func:`bbsc_step` for the bounded rule.
    """
    unbounded = BBSCState(state.u, state.c_box, math.inf)
    return BBSCState(bbsc_step(unbounded).u, state.c_box, state.c_carrier)


def evolve_bbsc(state: BBSCState, steps: int) -> list[BBSCState]:
    """Apply ``steps`` sweeps; returns all ``steps + 1`` states."""
    if steps < 0:
        raise ValueError("steps must be >= 0")
    history = [state]
    for _ in range(steps):
        history.append(bbsc_step(history[-1]))
    return history


def render_ascii(history: Sequence[BBSCState]) -> str:
    """Draw occupancies as '.' for empty and digits 1-9, one line per state.

    Lines are right-padded to a common width.  Raises ValueError when any
    box capacity exceeds 9; export CSV instead for those.
    """
    if not history:
        raise EmptyField("nothing to render")
    if any(s.c_box > 9 for s in history):
        raise ValueError("occupancies above 9 cannot be drawn as single digits")
    width = max(len(s.u) for s in history)
    lines = []
    for s in history:
        row = "".join("." if v == 0 else str(v) for v in s.u)
        lines.append(row.ljust(width, "."))
    return "\n".join(lines)


def write_bbsc_csv(history: Sequence[BBSCState], stream: IO[str]) -> None:
    """Write rows ``t,n,u`` for every state in the history."""
    stream.write("t,n,u\n")
    for t, s in enumerate(history):
        for n, v in enumerate(s.u):
            stream.write(f"{t},{n},{v}\n")


# ---------------------------------------------------------------------------
# tropical bridge


@dataclass(frozen=True)
class UDField:
    """A row of (X, Y) values with tropical parameters A, B > 0."""

    X: tuple[float, ...]
    Y: tuple[float, ...]
    A: float
    B: float

    def __post_init__(self):
        object.__setattr__(self, "X", tuple(float(v) for v in self.X))
        object.__setattr__(self, "Y", tuple(float(v) for v in self.Y))
        if len(self.X) != len(self.Y):
            raise ValueError("X and Y must have the same length")
        if not self.X:
            raise EmptyField("field must contain at least one site")
        if not (self.A > 0 and self.B > 0):
            raise NonPositiveParameter("A and B must be positive")


def tropical_step(field: UDField) -> np.ndarray:
    """The piecewise-linear update X' = min(-X, B+Y) + max(X+Y+A, 0) - A."""
    x = np.asarray(field.X, dtype=float)
    y = np.asarray(field.Y, dtype=float)
    return np.minimum(-x, field.B + y) + np.maximum(x + y + field.A, 0.0) - field.A


def shift_to_uv(field: UDField) -> tuple[np.ndarray, np.ndarray]:
    """Shift to carrier coordinates: U = X + A, V = Y + B."""
    return (np.asarray(field.X) + field.A, np.asarray(field.Y) + field.B)


def field_from_state(state: BBSCState, loads: Sequence[int]) -> UDField:
    """Tropical field whose shifted coordinates are a swept automaton state.

    ``loads`` are carrier loads as returned by :func:`bbsc_sweep` (their
    leading entries align with the boxes; the trailing one is dropped).
    Requires a bounded carrier, since B = c_carrier.
    """
    if state.c_carrier == math.inf:
        raise NonPositiveParameter("need a finite carrier capacity for B")
    a, b = float(state.c_box), float(state.c_carrier)
    xs = tuple(v - a for v in state.u)
    ys = tuple(float(l) - b for l in loads[:len(state.u)])
    return UDField(X=xs, Y=ys, A=a, B=b)


def _log1mexp(z: np.ndarray) -> np.ndarray:
    """log(1 - exp(z)) for z < 0, stable over the whole range."""
    z = np.asarray(z, dtype=float)
    out = np.empty_like(z)
    small = z < -math.log(2.0)
    out[small] = np.log1p(-np.exp(z[small]))
    out[~small] = np.log(-np.expm1(z[~small]))
    return out


def ud_limit_check(field: UDField, epsilons: Sequence[float],
                   ) -> list[tuple[float, float]]:
    """Compare the rational map at finite eps against the tropical step.

    For each eps the rational update is evaluated in log coordinates
    (X = -eps log x), using stable log-sum forms so large X/eps never leave
    the double range, and the max absolute gap to :func:`tropical_step` is
    reported.  Epsilons must be positive, strictly decreasing, and no smaller
    than 1e-6.  The gap decays like eps (times log 2 at tie points).
    """
    eps_list = [float(e) for e in epsilons]
    if any(e <= 0 for e in eps_list):
        raise NonPositiveEpsilon("all epsilons must be > 0")
    if any(e < 1e-6 for e in eps_list):
        raise NonPositiveEpsilon("epsilons below 1e-6 are outside the float-validated range")
    if any(e2 >= e1 for e1, e2 in zip(eps_list, eps_list[1:])):
        raise ValueError("epsilons must be strictly decreasing")
    x = np.asarray(field.X, dtype=float)
    y = np.asarray(field.Y, dtype=float)
    a, b = field.A, field.B
    trop = tropical_step(field)
    out: list[tuple[float, float]] = []
    for eps in eps_list:
        # log((1-beta) + beta * x * y) with beta = exp(-B/eps):
        #   logaddexp(log(1 - exp(-B/eps)), -(B + X + Y)/eps)
        t_beta = np.logaddexp(_log1mexp(np.full_like(x, -b / eps)),
                              -(b + x + y) / eps)
        t_alpha = np.logaddexp(_log1mexp(np.full_like(x, -a / eps)),
                               -(a + x + y) / eps)
        x_next = y - eps * t_beta + eps * t_alpha
        gap = float(np.max(np.abs(x_next - trop)))
        out.append((eps, gap))
    return out


def param_correspondence(params) -> str:
    """Which capacity dominates in the tropical limit of given parameters.

    beta > alpha makes the box capacity exceed the carrier capacity
    (``"B_gt_C"``), beta = alpha makes them equal (``"B_eq_C"``), and
    beta < alpha the reverse (``"B_lt_C"``).
    """
    if params.beta > params.alpha:
        return "B_gt_C"
    if params.beta == params.alpha:
        return "B_eq_C"
    return "B_lt_C"
