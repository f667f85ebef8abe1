"""Determinant solitons, closed-form speed and amplitude laws, and the
bilinear identities behind them.

An N-soliton state of the two-parameter map is carried by a pair of tau
functions

    f(t, n) = det[ delta_ij + gamma_i / (p_i + p_j + D) * A_i^t * B_i^n ]
    g(t, n) = same, with an extra row factor (-D - p_i) / p_i

where D = 1 - alpha - beta and

    A_i = (-p_i + beta) / (p_i + 1 - alpha)
    B_i = (p_i + 1 - beta) / (-p_i + alpha).

The lattice fields are the cross ratios x = f * g(n+1) / (g * f(n+1)) and
y = g * f(t+1) / (f * g(t+1)).  A mode is a genuine soliton when
0 < p < alpha + beta - 1 and gamma has the sign of (p - midpoint); then all
four constants A, B, C = gamma / (2p + D), D_i are positive and the mode has

    speed      v(p) = -log A / log B          (1 at the midpoint)
    amplitude  W(p) = |(1 + 1/s)(1 + s) / ((1 + r)(1 + 1/r)) - 1|,
               s = sqrt(B * D_i), r = sqrt(D_i / B).

Both laws are exactly symmetric under p -> alpha + beta - 1 - p, which is
what makes the speed/size ordering flip with the sign of alpha - beta.

The same determinant scheme in its four-parameter form (``kp_tau``) obeys
two three-term bilinear identities and, when p_i + q_i = a1 + a2 for every
row, a two-direction periodicity; both are exposed as exact checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from random import Random
from typing import Sequence

from .errors import (
    ConstraintViolated,
    DegenerateP,
    DenominatorClash,
    DuplicateP,
    GammaSignCondition,
    InvalidInterval,
    POutOfRange,
    WindowTooSmall,
    ZeroTau,
)
from .exact import ONE, Rat, det, rat_str
from .lattice import LatticeField, SystemParams


@dataclass(frozen=True)
class SolitonConstants:
    """Closed-form constants of one validated mode.

    A grows the phase per time step, B shrinks it per site, C fixes the
    initial position, and D distinguishes the second tau function.  All four
    are positive for a valid soliton.
    """

    p: Fraction
    gamma: Fraction
    A: Fraction
    B: Fraction
    C: Fraction
    D: Fraction


def _soliton_constants(params: SystemParams, p: Fraction, gamma: Fraction) -> SolitonConstants:
    dc = params.delta_cap
    a = (-p + params.beta) / (p + ONE - params.alpha)
    b = (p + ONE - params.beta) / (-p + params.alpha)
    c = gamma / (2 * p + dc)
    d = (-dc - p) / p
    return SolitonConstants(p=p, gamma=gamma, A=a, B=b, C=c, D=d)


def validate(params: SystemParams,
             solitons: Sequence[tuple[Rat, Rat]]) -> tuple[SolitonConstants, ...]:
    """Check an N-mode parameter list and return the per-mode constants.

    Each entry is a (p, gamma) pair.  Raises InvalidInterval when no soliton
    can exist at all, and the per-mode / per-pair errors otherwise.
    """
    span = params.alpha + params.beta - ONE
    if span <= 0:
        raise InvalidInterval(
            f"alpha + beta must exceed 1 for solitons, got {params.alpha + params.beta}")
    mid = span / 2
    pairs = [(Fraction(p), Fraction(g)) for p, g in solitons]
    for i, (p, gamma) in enumerate(pairs):
        if not (0 < p < span):
            raise POutOfRange(i, f"p={p}, interval (0, {span})")
        if p == mid:
            raise DegenerateP(i)
        if gamma * (p - mid) <= 0:
            raise GammaSignCondition(i)
    for i in range(len(pairs)):
        for j in range(i + 1, len(pairs)):
            if pairs[i][0] == pairs[j][0]:
                raise DuplicateP(i, j)
            # p_i + p_j - span = 0 would blow up an off-diagonal entry
            if pairs[i][0] + pairs[j][0] == span:
                raise DenominatorClash(i, j)
    consts = tuple(_soliton_constants(params, p, g) for p, g in pairs)
    for c in consts:
        # guaranteed by the checks above; cheap to keep as a hard invariant
        assert c.A > 0 and c.B > 0 and c.C > 0 and c.D > 0
    return consts


def _abd(params: SystemParams, p: Rat) -> tuple[Fraction, Fraction, Fraction]:
    """A, B, D for one wavenumber.  Unlike the full constants this is defined
    at the midpoint too (the phase coefficient C is not, but the speed and
    amplitude laws never touch it)."""
    span = params.alpha + params.beta - ONE
    if span <= 0:
        raise InvalidInterval(
            f"alpha + beta must exceed 1, got {params.alpha + params.beta}")
    p = Fraction(p)
    if not (0 < p < span):
        raise POutOfRange(0, f"p={p}, interval (0, {span})")
    a = (-p + params.beta) / (p + ONE - params.alpha)
    b = (p + ONE - params.beta) / (-p + params.alpha)
    d = (span - p) / p
    return a, b, d


def velocity(params: SystemParams, p: Rat) -> float:
    """Closed-form speed -log A / log B; exactly 1 at the interval midpoint."""
    a, b, _ = _abd(params, p)
    if a * b == 1:
        return 1.0
    return -math.log(float(a)) / math.log(float(b))


def amplitude(params: SystemParams, p: Rat) -> float:
    """Closed-form trough amplitude |x_min - 1|; 0 at the interval midpoint."""
    _, b, d = _abd(params, p)
    if b * d == 1:
        return 0.0
    s = math.sqrt(float(b * d))
    r = math.sqrt(float(d / b))
    f = (1.0 + 1.0 / s) * (1.0 + s) / ((1.0 + r) * (1.0 + 1.0 / r))
    return abs(f - 1.0)


def _tau(consts: Sequence[SolitonConstants], dc: Fraction, t: int, n: int,
         weighted: bool) -> Fraction:
    rows = []
    for i, ci in enumerate(consts):
        w = ci.gamma * ci.A ** t * ci.B ** n
        if weighted:
            w *= ci.D
        rows.append([(ONE if i == j else 0) + w / (ci.p + cj.p + dc)
                     for j, cj in enumerate(consts)])
    return det(rows)


def tau_f(params: SystemParams, solitons: Sequence[tuple[Rat, Rat]],
          t: int, n: int) -> Fraction:
    """First tau function at (t, n)."""
    return _tau(validate(params, solitons), params.delta_cap, t, n, weighted=False)


def tau_g(params: SystemParams, solitons: Sequence[tuple[Rat, Rat]],
          t: int, n: int) -> Fraction:
    """Second tau function at (t, n), the one with the extra row weight."""
    return _tau(validate(params, solitons), params.delta_cap, t, n, weighted=True)


def sample_xy(params: SystemParams, solitons: Sequence[tuple[Rat, Rat]],
              t: int, n: int) -> tuple[Fraction, Fraction]:
    """Exact (x, y) of the N-soliton state at one lattice point."""
    field = sample_field(params, solitons, (t, t), (n, n))
    return field.xs[0][0], field.ys[0][0]


def sample_field(params: SystemParams, solitons: Sequence[tuple[Rat, Rat]],
                 t_range: tuple[int, int], n_range: tuple[int, int]) -> LatticeField:
    """Exact (x, y) window of the N-soliton state.

    Both ranges are inclusive.  The tau grid is evaluated once with shared
    power tables, so sampling a T x N window costs (T+1)(N+1) determinant
    pairs rather than six per point.
    """
    t0, t1 = t_range
    n0, n1 = n_range
    if t1 < t0 or n1 < n0:
        raise WindowTooSmall(f"empty range: t {t_range}, n {n_range}")
    consts = validate(params, solitons)
    dc = params.delta_cap
    nt = t1 - t0 + 2  # one extra row/column of tau values for the shifts
    nn = n1 - n0 + 2
    modes = len(consts)

    # per-mode geometric tables A^t, B^n over the padded grid
    at = []
    bn = []
    for c in consts:
        row = [c.A ** t0]
        for _ in range(nt - 1):
            row.append(row[-1] * c.A)
        at.append(row)
        col = [c.B ** n0]
        for _ in range(nn - 1):
            col.append(col[-1] * c.B)
        bn.append(col)
    coef = [[ONE / (ci.p + cj.p + dc) for cj in consts] for ci in consts]

    def tau_pair(j: int, k: int) -> tuple[Fraction, Fraction]:
        ws = [consts[i].gamma * at[i][j] * bn[i][k] for i in range(modes)]
        rows_f = [[(ONE if i == jj else 0) + ws[i] * coef[i][jj]
                   for jj in range(modes)] for i in range(modes)]
        rows_g = [[(ONE if i == jj else 0) + ws[i] * consts[i].D * coef[i][jj]
                   for jj in range(modes)] for i in range(modes)]
        return det(rows_f), det(rows_g)

    taus = [[tau_pair(j, k) for k in range(nn)] for j in range(nt)]

    xs: list[list[Fraction]] = []
    ys: list[list[Fraction]] = []
    for j in range(nt - 1):
        xrow: list[Fraction] = []
        yrow: list[Fraction] = []
        for k in range(nn - 1):
            f00, g00 = taus[j][k]
            fn, gn = taus[j][k + 1]
            ft, gt = taus[j + 1][k]
            if 0 in (f00, g00, fn, gn, ft, gt):
                raise ZeroTau(t0 + j, n0 + k)
            xrow.append(f00 * gn / (g00 * fn))
            yrow.append(g00 * ft / (f00 * gt))
        xs.append(xrow)
        ys.append(yrow)
    return LatticeField(n_lo=n0, t0=t0, xs=xs, ys=ys)


# ---------------------------------------------------------------------------
# four-parameter determinant tau and its bilinear identities


@dataclass(frozen=True)
class KPParams:
    """Parameters of the four-direction determinant tau.

    ``modes`` holds (p_i, q_i, gamma_i) rows.  All p_i and q_i must be
    distinct from each other and from the direction parameters a1, a2, b, c,
    so no matrix entry or phase base can blow up.
    """

    a1: Fraction
    a2: Fraction
    b: Fraction
    c: Fraction
    modes: tuple[tuple[Fraction, Fraction, Fraction], ...]

    def __post_init__(self):
        object.__setattr__(self, "a1", Fraction(self.a1))
        object.__setattr__(self, "a2", Fraction(self.a2))
        object.__setattr__(self, "b", Fraction(self.b))
        object.__setattr__(self, "c", Fraction(self.c))
        object.__setattr__(self, "modes", tuple(
            (Fraction(p), Fraction(q), Fraction(g)) for p, q, g in self.modes))
        dirs = (self.a1, self.a2, self.b, self.c)
        ps = [m[0] for m in self.modes]
        qs = [m[1] for m in self.modes]
        for i, (p, q, _) in enumerate(self.modes):
            if p in dirs or q in dirs:
                raise DegenerateP(i, "p or q collides with a direction parameter")
        for i in range(len(self.modes)):
            for j in range(len(self.modes)):
                if i < j and (ps[i] == ps[j] or qs[i] == qs[j]):
                    raise DuplicateP(i, j)
                if ps[i] == qs[j]:
                    raise DenominatorClash(i, j)


def kp_tau(kp: KPParams, l1: int, l2: int, t: int, n: int) -> Fraction:
    """The four-direction tau at integer position (l1, l2, t, n)."""
    rows = []
    for i, (p, q, gamma) in enumerate(kp.modes):
        phase = (((q - kp.a1) / (p - kp.a1)) ** l1
                 * ((q - kp.a2) / (p - kp.a2)) ** l2
                 * ((q - kp.b) / (p - kp.b)) ** t
                 * ((q - kp.c) / (p - kp.c)) ** n)
        w = gamma * phase
        rows.append([(ONE if i == j else 0) + w / (p - qj)
                     for j, (_, qj, _) in enumerate(kp.modes)])
    return det(rows)


def check_kp_bilinear(kp: KPParams, point: tuple[int, int, int, int],
                      ) -> tuple[Fraction, Fraction]:
    """Exact residuals of the two three-term bilinear identities at a point.

    Both residuals are identically zero for any valid parameter set; they are
    returned rather than asserted so callers can report them.
    """
    l1, l2, t, n = point
    cache: dict[tuple[int, int, int, int], Fraction] = {}

    def tau(dl1: int, dl2: int, dt: int, dn: int) -> Fraction:
        key = (dl1, dl2, dt, dn)
        if key not in cache:
            cache[key] = kp_tau(kp, l1 + dl1, l2 + dl2, t + dt, n + dn)
        return cache[key]

    r1 = ((kp.a1 - kp.b) * tau(1, 0, 1, 0) * tau(0, 0, 0, 1)
          + (kp.b - kp.c) * tau(1, 0, 0, 0) * tau(0, 0, 1, 1)
          + (kp.c - kp.a1) * tau(1, 0, 0, 1) * tau(0, 0, 1, 0))
    r2 = ((kp.a2 - kp.b) * tau(0, 1, 1, 0) * tau(0, 0, 0, 1)
          + (kp.b - kp.c) * tau(0, 1, 0, 0) * tau(0, 0, 1, 1)
          + (kp.c - kp.a2) * tau(0, 1, 0, 1) * tau(0, 0, 1, 0))
    return r1, r2


def check_reduction(kp: KPParams, point: tuple[int, int, int, int]) -> Fraction:
    """Exact residual tau(l1+1, l2+1, t, n) - tau(l1, l2, t, n).

    Requires the reduction constraint p_i + q_i = a1 + a2 on every mode and
    raises ConstraintViolated otherwise.  Under the constraint the residual
    is identically zero.
    """
    target = kp.a1 + kp.a2
    for i, (p, q, _) in enumerate(kp.modes):
        if p + q != target:
            raise ConstraintViolated(
                f"mode {i}: p + q = {p + q}, constraint requires {target}")
    l1, l2, t, n = point
    return kp_tau(kp, l1 + 1, l2 + 1, t, n) - kp_tau(kp, l1, l2, t, n)


def random_kp_params(rng: Random, n_modes: int, *, constrained: bool = False) -> KPParams:
    """Draw a small random valid KPParams; deterministic for a seeded rng.

    With ``constrained=True`` the modes satisfy q_i = a1 + a2 - p_i, the
    premise of :func:`check_reduction`.
    """

    def small() -> Fraction:
        return Fraction(rng.randint(-9, 9), rng.randint(1, 9))

    while True:
        a1, a2, b, c = (small() for _ in range(4))
        if len({a1, a2, b, c}) != 4:
            continue
        dirs = {a1, a2, b, c}
        ps: list[Fraction] = []
        qs: list[Fraction] = []
        gs: list[Fraction] = []
        ok = True
        for _ in range(n_modes):
            for _attempt in range(200):
                p = small()
                q = a1 + a2 - p if constrained else small()
                if p == q or p in dirs or q in dirs or p in ps or p in qs \
                        or q in qs or q in ps:
                    continue
                g = small()
                if g == 0:
                    continue
                ps.append(p)
                qs.append(q)
                gs.append(g)
                break
            else:
                ok = False
                break
        if ok:
            return KPParams(a1=a1, a2=a2, b=b, c=c,
                            modes=tuple(zip(ps, qs, gs)))


# ---------------------------------------------------------------------------
# monotonicity scan of the closed-form laws


def scan_monotonicity(params: SystemParams, grid_size: int, *, workers: int = 1) -> dict:
    """Probe v(p) and W(p) on an interior grid and report monotonicity breaks.

    The grid has ``grid_size`` points p_k = k * span / (grid_size + 1).  W
    must fall toward the midpoint and rise after it; v must be monotone on
    each half with the direction set by sign(alpha - beta), and constant when
    alpha = beta.  The returned dict is the CLI's JSON payload.
    """
    if grid_size < 3:
        raise ValueError("grid_size must be at least 3")
    span = params.alpha + params.beta - ONE
    if span <= 0:
        raise InvalidInterval(
            f"alpha + beta must exceed 1, got {params.alpha + params.beta}")
    mid = span / 2
    ps = [span * k / (grid_size + 1) for k in range(1, grid_size + 1)]
    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=workers) as ex:
            vs = list(ex.map(lambda p: velocity(params, p), ps))
            wsamp = list(ex.map(lambda p: amplitude(params, p), ps))
    else:
        vs = [velocity(params, p) for p in ps]
        wsamp = [amplitude(params, p) for p in ps]

    tol = 1e-12  # float noise floor for adjacent comparisons
    violations: list[dict] = []

    def check(kind: str, k: int, direction: int) -> None:
        # direction +1: must not decrease from k to k+1; -1: must not increase
        left = vs[k] if kind == "v" else wsamp[k]
        right = vs[k + 1] if kind == "v" else wsamp[k + 1]
        bad = right < left - tol if direction > 0 else right > left + tol
        if bad:
            violations.append({
                "quantity": kind,
                "p_left": rat_str(ps[k]),
                "p_right": rat_str(ps[k + 1]),
                "left": left,
                "right": right,
            })

    equal_ab = params.alpha == params.beta
    v_up_first = params.alpha < params.beta  # v rises toward the midpoint
    for k in range(grid_size - 1):
        if ps[k + 1] <= mid:
            half = "left"
        elif ps[k] >= mid:
            half = "right"
        else:
            continue  # straddles the midpoint; no adjacent constraint
        check("w", k, -1 if half == "left" else +1)
        if equal_ab:
            if abs(vs[k] - 1.0) > 1e-9 or abs(vs[k + 1] - 1.0) > 1e-9:
                violations.append({
                    "quantity": "v",
                    "p_left": rat_str(ps[k]),
                    "p_right": rat_str(ps[k + 1]),
                    "left": vs[k],
                    "right": vs[k + 1],
                })
        else:
            up = v_up_first if half == "left" else not v_up_first
            check("v", k, +1 if up else -1)

    if equal_ab:
        v_ext = mid  # v is constant; the branch point is the only natural marker
    elif v_up_first:
        v_ext = ps[max(range(grid_size), key=vs.__getitem__)]
    else:
        v_ext = ps[min(range(grid_size), key=vs.__getitem__)]
    w_ext = ps[min(range(grid_size), key=wsamp.__getitem__)]
    return {
        "alpha": rat_str(params.alpha),
        "beta": rat_str(params.beta),
        "grid": grid_size,
        "violations": violations,
        "v_extremum_p": rat_str(v_ext),
        "w_extremum_p": rat_str(w_ext),
    }
