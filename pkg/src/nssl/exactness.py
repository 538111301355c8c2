"""Boundary-condition-swap test for spurious truncation eigenvalues.

Truncating a singular problem to [a, b_n] can manufacture eigenvalue
sequences that converge to points which are not eigenvalues of the
singular operator.  Such sequences are shadowed by eigenvalues of the
companion operator built from the complementary boundary condition at the
regular endpoint: the two operators share no genuine eigenvalues, so a
converged eigenvalue of one that is matched, to well below the natural
separation, by a converged eigenvalue of the other is suspect.  Limits
tracked only by the original family are certified as genuine.

Verdicts deliberately stop at "suspect-spurious": the coincidence proves
at least one of the paired sequences is inexact, not which one.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

from .locate import (ComplexBox, LocateOptions, ScaledComplex,
                     find_eigenvalues, winding_number_with_retries)
from .mfunc import compute_miss_distance
from .ode import DEFAULT_ATOL, DEFAULT_RTOL
from .problem import Problem

EXACT = "exact-certified"
SUSPECT = "suspect-spurious"
INCONCLUSIVE = "inconclusive"

#: defaults, all overridable per call
TAU_CONV = 1e-6          # convergence gap, scaled by (1 + |lam|)
TAU_PAIR_FLOOR = 1e-4    # pairing distance, scaled by (1 + |lam|)
TAU_MATCH_REL = 0.05     # matching gate, as a fraction of the box diagonal


@dataclass
class ConvergenceTrack:
    family: str                                   # "M" or "L"
    entries: list = field(default_factory=list)   # [(b_n, EigenvalueEstimate)]
    limit: complex = 0j
    converged: bool = False
    cauchy_gap: float = math.inf

    def finish(self, tau_conv: float):
        self.limit = complex(self.entries[-1][1].lam)
        if len(self.entries) >= 2:
            self.cauchy_gap = float(abs(self.entries[-1][1].lam
                                        - self.entries[-2][1].lam))
            self.converged = bool(self.cauchy_gap
                                  < tau_conv * (1.0 + abs(self.limit)))
        return self


@dataclass
class TrackVerdict:
    track: ConvergenceTrack
    verdict: str
    paired_index: int | None = None     # index into the companion track list
    pair_distance: float = math.inf


@dataclass
class InclusionWarning:
    """The winding of the search box dropped between truncation points."""

    family: str
    b_prev: float
    b_next: float
    count_prev: int
    count_next: int


@dataclass
class ExactnessReport:
    box: ComplexBox
    schedule: tuple
    m_tracks: list
    l_tracks: list
    verdicts: list                      # TrackVerdict per M-track
    l_verdicts: list                    # TrackVerdict per L-track (mirror view)
    warnings: list


def track_eigenvalues(per_bn: list, schedule, family: str = "M",
                      tau_match: float = math.inf, tau_conv: float = TAU_CONV):
    """Chain per-truncation estimate lists into convergence tracks.

    Greedy nearest-neighbour matching between consecutive truncation
    points, gated at ``tau_match``; unmatched estimates open or close
    tracks.  A track converges when it spans the whole schedule and its
    last two entries differ by under tau_conv * (1 + |lam|).
    """
    if len(per_bn) < 2:
        raise ValueError("tracking needs at least two truncation points")
    if len(per_bn) != len(schedule):
        raise ValueError("one estimate list per schedule point required")
    open_tracks = [ConvergenceTrack(family, [(schedule[0], e)]) for e in per_bn[0]]
    closed: list[ConvergenceTrack] = []
    for b_n, ests in zip(schedule[1:], per_bn[1:]):
        used = [False] * len(ests)
        still_open = []
        # closest pairs first so a straggler cannot steal a better match
        pairs = sorted(
            ((abs(t.entries[-1][1].lam - e.lam), ti, ei)
             for ti, t in enumerate(open_tracks) for ei, e in enumerate(ests)),
            key=lambda p: p[0])
        taken_tracks = [False] * len(open_tracks)
        for dist, ti, ei in pairs:
            if dist > tau_match or taken_tracks[ti] or used[ei]:
                continue
            open_tracks[ti].entries.append((b_n, ests[ei]))
            taken_tracks[ti] = used[ei] = True
        for ti, t in enumerate(open_tracks):
            if taken_tracks[ti]:
                still_open.append(t)
            else:
                closed.append(t)
        for ei, e in enumerate(ests):
            if not used[ei]:
                still_open.append(ConvergenceTrack(family, [(b_n, e)]))
        open_tracks = still_open
    closed.extend(open_tracks)
    tracks = [t.finish(tau_conv) for t in closed]
    tracks.sort(key=lambda t: (abs(t.limit), cmath.phase(t.limit) if t.limit != 0 else 0.0))
    return tracks


def classify(m_tracks, l_tracks, tau_conv: float = TAU_CONV,
             tau_pair: float | None = None):
    """Pair converged limits of the two families and attach verdicts.

    Returns one :class:`TrackVerdict` per entry of ``m_tracks``; a
    converged track whose limit is within the pairing distance of some
    converged companion limit is suspect-spurious, an unmatched converged
    track is exact-certified, anything unconverged is inconclusive.
    """
    def pair_tol(lam):
        base = tau_pair if tau_pair is not None else max(10.0 * tau_conv, TAU_PAIR_FLOOR)
        return base * (1.0 + abs(lam))

    out = []
    for t in m_tracks:
        if not t.converged:
            out.append(TrackVerdict(t, INCONCLUSIVE))
            continue
        best_i, best_d = None, math.inf
        for i, u in enumerate(l_tracks):
            if not u.converged:
                continue
            d = abs(t.limit - u.limit)
            if d < best_d:
                best_i, best_d = i, d
        if best_i is not None and best_d < pair_tol(t.limit):
            out.append(TrackVerdict(t, SUSPECT, best_i, best_d))
        else:
            out.append(TrackVerdict(t, EXACT, None, best_d))
    return out


def inclusion_monitor(problem: Problem, box: ComplexBox, schedule,
                      family: str = "M", opts: LocateOptions | None = None,
                      atol=DEFAULT_ATOL, rtol=DEFAULT_RTOL,
                      counts: list | None = None):
    """Warn when the box eigenvalue count drops along the schedule.

    A decreasing total winding means an eigenvalue left the box (or was
    lost), i.e. candidates may be escaping the search region unapproximated.
    Precomputed ``counts`` (one per schedule point) are used when given.
    """
    if counts is None:
        counts = []
        for b_n in schedule:
            def f(lam, _b=b_n):
                md = compute_miss_distance(problem, _b, lam, atol=atol, rtol=rtol)
                return ScaledComplex(md.value, md.log_scale)
            w, _ = winding_number_with_retries(f, box, opts)
            counts.append(w)
    warnings = []
    for (b1, c1), (b2, c2) in zip(zip(schedule, counts), zip(schedule[1:], counts[1:])):
        if c2 < c1:
            warnings.append(InclusionWarning(family, b1, b2, c1, c2))
    return warnings


def run_boundary_swap(problem: Problem, box: ComplexBox, schedule=None,
                      opts: LocateOptions | None = None,
                      atol=DEFAULT_ATOL, rtol=DEFAULT_RTOL,
                      tau_conv: float = TAU_CONV, tau_pair: float | None = None,
                      tau_match: float | None = None) -> ExactnessReport:
    """Full pipeline: locate, track and classify both boundary families.

    Runs the eigenvalue search for the problem and for its companion with
    the complementary left boundary condition at every schedule point,
    chains the estimates into tracks, pairs the limits, and monitors the
    per-family box counts for losses.
    """
    schedule = tuple(schedule if schedule is not None else problem.schedule)
    if len(schedule) < 2:
        raise ValueError("the swap test needs at least two truncation points")
    opts = opts or LocateOptions()
    gate = tau_match if tau_match is not None else TAU_MATCH_REL * box.diagonal

    swapped = problem.swapped()
    per_bn = {"M": [], "L": []}
    counts = {"M": [], "L": []}
    for b_n in schedule:
        for fam, prob in (("M", problem), ("L", swapped)):
            ests = find_eigenvalues(prob, b_n, box, opts, atol=atol, rtol=rtol)
            per_bn[fam].append(ests)
            counts[fam].append(sum(e.multiplicity for e in ests))

    m_tracks = track_eigenvalues(per_bn["M"], schedule, "M", gate, tau_conv)
    l_tracks = track_eigenvalues(per_bn["L"], schedule, "L", gate, tau_conv)
    verdicts = classify(m_tracks, l_tracks, tau_conv, tau_pair)
    l_verdicts = classify(l_tracks, m_tracks, tau_conv, tau_pair)
    warnings = []
    for fam in ("M", "L"):
        warnings.extend(inclusion_monitor(problem, box, schedule, fam,
                                          counts=counts[fam]))
    return ExactnessReport(box, schedule, m_tracks, l_tracks,
                           verdicts, l_verdicts, warnings)
