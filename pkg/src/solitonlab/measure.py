"""Blind measurement of soliton tracks in simulated fields.

Troughs of the rational field (local minima of x below the background 1) are
located per row to sub-lattice precision with a parabolic fit in log x, then
linked across rows into tracks.  Linking is nearest-neighbor with a jump gate
that widens across detection gaps, plus a depth-similarity term in the match
cost so two troughs that merge during a collision and reappear later keep
their identities.

Speeds are least-squares slopes.  Samples taken while another track is within
``exclusion_radius`` lattice units are dropped, and the fit allows a separate
intercept per surviving contiguous segment: a collision shifts a soliton's
phase, so forcing one intercept across the jump would bias the slope.

Ball-count clusters of the box-ball automaton get the same treatment in
integer arithmetic; their speeds are exact rationals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import combinations, permutations
from typing import Sequence

import numpy as np

from .boxball import BBSCState
from .errors import (
    EmptyField,
    InconsistentCapacities,
    TooFewSamples,
    WrongTrackCount,
)
from .lattice import LatticeField

# How close (lattice units) another soliton may come before a sample is
# discarded as collision-contaminated.  Calibrated against the closed-form
# amplitudes of an exactly known two-soliton field: tail overlap biases the
# refined depth by more than 5e-3 out to roughly 4 units, while velocities
# stay within 1e-2 already at 3.  One radius serves both measurements.
EXCLUSION_RADIUS = 4.5


@dataclass
class TroughTrack:
    """One persistent trough: parallel lists of time, position, depth."""

    times: list[int] = dc_field(default_factory=list)
    positions: list[float] = dc_field(default_factory=list)
    depths: list[float] = dc_field(default_factory=list)

    @property
    def first_t(self) -> int:
        return self.times[0]

    @property
    def last_t(self) -> int:
        return self.times[-1]

    @property
    def depth(self) -> float:
        """Deepest |x - 1| seen along the whole track."""
        return max(self.depths)

    def position_at(self, t: int) -> float:
        """Position at time t, linearly interpolated across gaps."""
        return float(np.interp(t, self.times, self.positions))


def _row_minima(row: Sequence[float], threshold: float) -> list[tuple[float, float]]:
    """Sub-lattice minima of one row: (position, refined depth) pairs.

    A site qualifies when x < 1 - threshold and x is a strict minimum to the
    left and weak minimum to the right (ties break leftward).  The position
    and depth are refined with a parabola through log x at the site and its
    neighbors; the offset is clamped to half a cell.
    """
    out: list[tuple[float, float]] = []
    for k in range(1, len(row) - 1):
        xk = row[k]
        if not (xk < 1.0 - threshold and row[k - 1] > xk and row[k + 1] >= xk):
            continue
        if min(row[k - 1], xk, row[k + 1]) <= 0.0:
            out.append((float(k), abs(xk - 1.0)))  # no log refinement possible
            continue
        lm, l0, lp = math.log(row[k - 1]), math.log(xk), math.log(row[k + 1])
        curv = lm - 2.0 * l0 + lp
        if curv <= 0.0:
            out.append((float(k), abs(xk - 1.0)))
            continue
        off = 0.5 * (lm - lp) / curv
        off = max(-0.5, min(0.5, off))
        vertex = l0 - 0.125 * (lm - lp) ** 2 / curv
        out.append((k + off, abs(math.exp(vertex) - 1.0)))
    return out


def _match_cost(pred_pos: float, pred_depth: float, det_pos: float,
                det_depth: float, gate: float) -> float:
    # position mismatch normalized by the gate, depth mismatch in absolute
    # units; depths separate identities when positions are ambiguous
    return abs(pred_pos - det_pos) / gate + 3.0 * abs(pred_depth - det_depth)


def track_troughs(field: LatticeField, threshold: float = 1e-3, *,
                  v_max: float = 1.0, max_gap: int = 40,
                  min_samples: int = 3) -> list[TroughTrack]:
    """Link per-row trough detections into tracks.

    ``threshold`` is the minimum |x - 1| for a detection, ``v_max`` bounds
    the per-step jump gate, ``max_gap`` is how many rows a track may coast
    undetected (troughs merge during collisions), and tracks shorter than
    ``min_samples`` are discarded as noise.  Tracks are returned sorted by
    first appearance, then position.
    """
    base_gate = max(2.0, math.ceil(2.0 * v_max))
    rows = field.x_float()
    active: list[TroughTrack] = []
    done: list[TroughTrack] = []
    for j, t in enumerate(field.times):
        dets = [(field.n_lo + pos, depth)
                for pos, depth in _row_minima(rows[j], threshold)]
        # retire tracks that have coasted too long
        still = []
        for tr in active:
            (done if t - tr.last_t > max_gap else still).append(tr)
        active = still
        if active and dets:
            assignment = _assign(active, dets, t, base_gate)
        else:
            assignment = {}
        claimed = set(assignment.values())
        for ti, tr in enumerate(active):
            if ti in assignment:
                pos, depth = dets[assignment[ti]]
                tr.times.append(t)
                tr.positions.append(pos)
                tr.depths.append(depth)
        for di, (pos, depth) in enumerate(dets):
            if di not in claimed:
                active.append(TroughTrack([t], [pos], [depth]))
    done.extend(active)
    done = [tr for tr in done if len(tr.times) >= min_samples]
    done.sort(key=lambda tr: (tr.first_t, tr.positions[0]))
    return done


def _assign(active: Sequence[TroughTrack], dets: Sequence[tuple[float, float]],
            t: int, base_gate: float) -> dict[int, int]:
    """One-to-one track-to-detection assignment minimizing total cost."""
    cand: dict[int, dict[int, float]] = {}
    for ti, tr in enumerate(active):
        gap = t - tr.last_t  # >= 1
        gate = base_gate * gap
        # short linear prediction; falls back to last position for singletons
        if len(tr.times) >= 2:
            k = min(len(tr.times) - 1, 5)
            vel = (tr.positions[-1] - tr.positions[-1 - k]) / (tr.times[-1] - tr.times[-1 - k])
        else:
            vel = 0.0
        pred = tr.positions[-1] + vel * gap
        depth = float(np.median(tr.depths[-5:]))
        row = {}
        for di, (pos, dep) in enumerate(dets):
            if abs(pos - tr.positions[-1]) <= gate or abs(pos - pred) <= base_gate:
                row[di] = _match_cost(pred, depth, pos, dep, gate)
        if row:
            cand[ti] = row
    if not cand:
        return {}
    tis = sorted(cand)
    dis = sorted({di for row in cand.values() for di in row})
    if len(tis) <= 6 and len(dis) <= 6:
        # exhaustive: as many matches as possible first, lowest cost second
        for m in range(min(len(tis), len(dis)), 0, -1):
            best: dict[int, int] = {}
            best_cost = math.inf
            for chosen in combinations(tis, m):
                for perm in permutations(dis, m):
                    cost = 0.0
                    pairs = {}
                    for ti, di in zip(chosen, perm):
                        c = cand[ti].get(di)
                        if c is None:
                            break
                        cost += c
                        pairs[ti] = di
                    else:
                        if cost < best_cost:
                            best_cost = cost
                            best = pairs
            if best:
                return best
        return {}
    # many tracks: greedy by cost
    entries = sorted((c, ti, di) for ti, row in cand.items() for di, c in row.items())
    used_t: set[int] = set()
    used_d: set[int] = set()
    out: dict[int, int] = {}
    for c, ti, di in entries:
        if ti in used_t or di in used_d:
            continue
        out[ti] = di
        used_t.add(ti)
        used_d.add(di)
    return out


def _usable_samples(track: TroughTrack, others: Sequence[TroughTrack],
                    exclusion_radius: float) -> list[tuple[int, float, float]]:
    """(t, position, depth) samples not within the exclusion radius of any
    other track.

    For times inside another track's life span the radius applies to its
    interpolated position.  Outside, the other soliton was merged into some
    trough and unresolved, so its position is only known to lie within a
    cone |pos - endpoint| <= radius + v_max * dt from the nearer endpoint;
    samples inside that cone are excluded too.
    """
    v_cone = 1.0  # speed bound in the studied regime
    out = []
    for t, pos, dep in zip(track.times, track.positions, track.depths):
        clear = True
        for other in others:
            if other is track or not other.times:
                continue
            if t < other.first_t:
                near = abs(pos - other.positions[0]) \
                    <= exclusion_radius + v_cone * (other.first_t - t)
            elif t > other.last_t:
                near = abs(pos - other.positions[-1]) \
                    <= exclusion_radius + v_cone * (t - other.last_t)
            else:
                near = abs(other.position_at(t) - pos) <= exclusion_radius
            if near:
                clear = False
                break
        if clear:
            out.append((t, pos, dep))
    return out


def measure_velocity(track: TroughTrack, others: Sequence[TroughTrack] = (), *,
                     exclusion_radius: float = EXCLUSION_RADIUS) -> float:
    """Least-squares speed of a track.

    Collision samples (within ``exclusion_radius`` of another track) are
    excluded; the fit shares one slope across the remaining contiguous
    segments with a free intercept each, since collisions shift the phase.
    Raises TooFewSamples when fewer than two usable samples remain or no
    segment has two points.
    """
    usable = _usable_samples(track, others, exclusion_radius)
    if len(usable) < 2:
        raise TooFewSamples(f"{len(usable)} usable samples")
    # split into contiguous runs (gap of more than 2 rows starts a new one)
    segments: list[list[tuple[int, float]]] = [[]]
    prev_t = None
    for t, pos, _ in usable:
        if prev_t is not None and t - prev_t > 2:
            segments.append([])
        segments[-1].append((t, pos))
        prev_t = t
    num = 0.0
    den = 0.0
    for seg in segments:
        if len(seg) < 2:
            continue
        ts = np.array([s[0] for s in seg], dtype=float)
        xs = np.array([s[1] for s in seg], dtype=float)
        ts -= ts.mean()
        num += float(np.dot(ts, xs))
        den += float(np.dot(ts, ts))
    if den == 0.0:
        raise TooFewSamples("no segment with two or more samples")
    return num / den


def measure_amplitude(row: Sequence[float]) -> float:
    """Largest |x - 1| over one row."""
    arr = [abs(float(v) - 1.0) for v in row]
    if not arr:
        raise EmptyField("empty row")
    return max(arr)


def track_amplitude(track: TroughTrack, others: Sequence[TroughTrack] = (), *,
                    exclusion_radius: float = EXCLUSION_RADIUS) -> float:
    """Deepest refined trough over the track's collision-free samples.

    The refined per-sample depth oscillates slightly with the trough's
    sub-lattice phase, so the max over many samples is the right estimate of
    the true amplitude; collision samples are excluded because overlapping
    solitons distort each other's depth.
    """
    usable = _usable_samples(track, others, exclusion_radius)
    if not usable:
        raise TooFewSamples("no collision-free samples")
    return max(dep for _, _, dep in usable)


# ---------------------------------------------------------------------------
# box-ball cluster tracks


@dataclass
class ClusterTrack:
    """One persistent ball cluster: times, leftmost positions, ball count."""

    times: list[int] = dc_field(default_factory=list)
    leftmost: list[int] = dc_field(default_factory=list)
    amplitude: int = 0

    @property
    def first_t(self) -> int:
        return self.times[0]

    @property
    def last_t(self) -> int:
        return self.times[-1]

    @property
    def speed(self) -> Fraction:
        """Exact net displacement per step over the track's life."""
        if len(self.times) < 2:
            raise TooFewSamples("cluster seen only once")
        return Fraction(self.leftmost[-1] - self.leftmost[0],
                        self.times[-1] - self.times[0])

    def speed_before(self, t_cut: int) -> Fraction:
        """Exact speed restricted to samples with t < t_cut."""
        ts = [t for t in self.times if t < t_cut]
        if len(ts) < 2:
            raise TooFewSamples("fewer than two samples before the cut")
        i0, i1 = self.times.index(ts[0]), self.times.index(ts[-1])
        return Fraction(self.leftmost[i1] - self.leftmost[i0], ts[-1] - ts[0])


def _clusters(state: BBSCState) -> list[tuple[int, int, int]]:
    """(leftmost, rightmost, ball count) for each run of nonzero boxes."""
    out = []
    start = None
    total = 0
    for k, v in enumerate(state.u):
        if v > 0:
            if start is None:
                start = k
                total = 0
            total += v
        elif start is not None:
            out.append((start, k - 1, total))
            start = None
    if start is not None:
        out.append((start, len(state.u) - 1, total))
    return out


def detect_bbsc_solitons(history: Sequence[BBSCState]) -> list[ClusterTrack]:
    """Link ball clusters across a state history into tracks.

    Clusters are matched by interval overlap first, then by nearest leftmost
    position within a gate of (ball count + 2) sites.  All states must share
    both capacities.
    """
    if not history:
        return []
    caps = {(s.c_box, s.c_carrier) for s in history}
    if len(caps) > 1:
        raise InconsistentCapacities(f"mixed capacities in history: {sorted(map(str, caps))}")
    tracks: list[ClusterTrack] = []
    prev: list[tuple[int, int, int]] = []
    prev_map: list[ClusterTrack] = []
    for t, s in enumerate(history):
        cur = _clusters(s)
        new_map: list[ClusterTrack | None] = [None] * len(cur)
        used: set[int] = set()
        # pass 1: interval overlap with the previous row's clusters
        for ci, (lo, hi, cnt) in enumerate(cur):
            best = None
            best_olap = 0
            for pi, (plo, phi, _) in enumerate(prev):
                if pi in used:
                    continue
                olap = min(hi, phi) - max(lo, plo) + 1
                if olap > best_olap:
                    best_olap = olap
                    best = pi
            if best is not None:
                new_map[ci] = prev_map[best]
                used.add(best)
        # pass 2: nearest leftmost within the gate
        for ci, (lo, hi, cnt) in enumerate(cur):
            if new_map[ci] is not None:
                continue
            best = None
            best_d = None
            for pi, (plo, _, pcnt) in enumerate(prev):
                if pi in used:
                    continue
                d = abs(lo - plo)
                if d <= pcnt + 2 and (best_d is None or d < best_d):
                    best_d = d
                    best = pi
            if best is not None:
                new_map[ci] = prev_map[best]
                used.add(best)
        for ci, (lo, hi, cnt) in enumerate(cur):
            tr = new_map[ci]
            if tr is None:
                tr = ClusterTrack([], [], cnt)
                tracks.append(tr)
                new_map[ci] = tr
            tr.times.append(t)
            tr.leftmost.append(lo)
        prev = cur
        prev_map = [tr for tr in new_map if tr is not None]
    tracks.sort(key=lambda tr: (tr.first_t, tr.leftmost[0]))
    return tracks


# ---------------------------------------------------------------------------
# overtake report


def _fraction_or_float(v):
    return str(v) if isinstance(v, Fraction) else float(v)


def overtake_report(tracks: Sequence[TroughTrack | ClusterTrack]) -> dict:
    """Summarize two tracks: per-track amplitude/speed/span, whether their
    order swaps, and whether the smaller one outran the larger.

    Accepts exactly two tracks (trough or cluster kind, not mixed).  The
    amplitude of a trough track is its collision-free refined depth; of a
    cluster track, its ball count.  ``anomaly`` is ``"smaller_faster"`` when
    the smaller-amplitude track ends ahead after starting behind, or after
    emerging from an unresolved collision at the start of the common span
    with the greater measured speed; else ``"none"``.
    """
    if len(tracks) != 2:
        raise WrongTrackCount(len(tracks))
    a, b = tracks
    if isinstance(a, ClusterTrack) != isinstance(b, ClusterTrack):
        raise ValueError("cannot mix trough and cluster tracks in one report")
    rows = []
    if isinstance(a, ClusterTrack):
        amps = [a.amplitude, b.amplitude]
        speeds = [a.speed, b.speed]
        pos = [(tr.leftmost[0], tr.leftmost[-1]) for tr in (a, b)]
        start_span = (a.times[0], b.times[0])
        end_span = (a.times[-1], b.times[-1])
    else:
        amps = [track_amplitude(a, [b]), track_amplitude(b, [a])]
        speeds = [measure_velocity(a, [b]), measure_velocity(b, [a])]
        pos = [(tr.positions[0], tr.positions[-1]) for tr in (a, b)]
        start_span = (a.first_t, b.first_t)
        end_span = (a.last_t, b.last_t)
    for tr, amp, spd in zip((a, b), amps, speeds):
        rows.append({
            "amplitude": _fraction_or_float(amp),
            "speed": _fraction_or_float(spd),
            "first_t": tr.first_t,
            "last_t": tr.last_t,
        })
    # compare positions at the shared start and end of the common life span
    t_start = max(start_span)
    t_end = min(end_span)
    if isinstance(a, ClusterTrack):
        at = lambda tr, t: float(np.interp(t, tr.times, tr.leftmost))  # noqa: E731
    else:
        at = lambda tr, t: tr.position_at(t)  # noqa: E731
    if t_end <= t_start:
        # no common life span; fall back to each track's own endpoints
        d0 = pos[0][0] - pos[1][0]
        d1 = pos[0][1] - pos[1][1]
    else:
        d0 = at(a, t_start) - at(b, t_start)
        d1 = at(a, t_end) - at(b, t_end)
    crossing = d0 * d1 < 0
    anomaly = "none"
    if amps[0] != amps[1]:
        small, big = (0, 1) if amps[0] < amps[1] else (1, 0)
        ds = (d0, d1) if small == 0 else (-d0, -d1)
        started_behind = ds[0] < 0
        # if the window opens on an unresolved collision the tracks emerge
        # closer than the exclusion radius; the smaller one being measurably
        # faster then implies it entered the collision from behind
        emerged_merged = (not isinstance(a, ClusterTrack)
                          and abs(ds[0]) <= EXCLUSION_RADIUS
                          and speeds[small] > speeds[big])
        if ds[1] > 0 and (started_behind or emerged_merged):
            anomaly = "smaller_faster"
    return {"tracks": rows, "crossing": bool(crossing), "anomaly": anomaly}
