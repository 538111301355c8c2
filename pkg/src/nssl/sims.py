"""Numerical diagnostics for the Sims endpoint classification.

These routines sample the numerical-range set q(x)/w(x) + r p(x), hull it,
pick an admissible half-plane datum (eta, K) for a point outside the hull,
and probe the endpoint class by watching the growth of the weighted-square
and quadratic-form integrals of the solutions along the truncation
schedule.  Everything here is a finite-sample heuristic, clearly labelled
as such: it suggests a classification, it does not prove one.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import expr as ex
from .ode import DEFAULT_ATOL, DEFAULT_RTOL, SLState, gauss4_panel, propagate
from .problem import Problem, right_bc_coefficients


class SimsError(ValueError):
    pass


# ------------------------------------------------------------- convex hull


def convex_hull(points):
    """Monotone-chain hull of complex points, counterclockwise vertices."""
    pts = sorted(set((z.real, z.imag) for z in points))
    if len(pts) <= 2:
        return [complex(*p) for p in pts]

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower = []
    for p in pts:
        while len(lower) > 1 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper = []
    for p in reversed(pts):
        while len(upper) > 1 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return [complex(*p) for p in lower[:-1] + upper[:-1]]


def _point_segment_distance(z, a, b):
    ab = b - a
    denom = (ab * ab.conjugate()).real
    if denom == 0:
        return abs(z - a), a
    t = ((z - a) * ab.conjugate()).real / denom
    t = min(1.0, max(0.0, t))
    proj = a + t * ab
    return abs(z - proj), proj


def hull_contains(vertices, z, tol=0.0):
    """Point membership for a (possibly degenerate) hull."""
    if len(vertices) == 0:
        return False
    if len(vertices) == 1:
        return abs(z - vertices[0]) <= tol
    if len(vertices) == 2:
        d, _ = _point_segment_distance(z, vertices[0], vertices[1])
        return d <= tol
    n = len(vertices)
    for i in range(n):
        a, b = vertices[i], vertices[(i + 1) % n]
        crossp = ((b - a).conjugate() * (z - a)).imag
        if crossp < -tol * max(1.0, abs(b - a)):
            return False
    return True


@dataclass
class NumericalRangeHull:
    samples: np.ndarray          # complex sample cloud
    vertices: list               # ccw hull vertices
    ray_directions: tuple        # unit directions of the two extreme rays
    x_grid: np.ndarray
    r_grid: np.ndarray


def sample_hull(problem: Problem, x_points: int = 200,
                r_grid=None) -> NumericalRangeHull:
    """Sample q/w + r p over the mesh and hull the cloud.

    The true set always contains half-lines (r can grow without bound), so
    the hull of the bounded cloud is reported together with the extreme
    directions of p seen on the mesh, flagged as rays.
    """
    if x_points < 1:
        raise SimsError("empty x grid")
    if r_grid is None:
        r_grid = np.logspace(-6.0, 6.0, 40)
    r_grid = np.asarray(r_grid, dtype=float)
    if r_grid.size == 0:
        raise SimsError("empty r grid")
    hi = problem.schedule[-1]
    xs = np.linspace(problem.a, hi, x_points)
    base = np.empty(x_points, dtype=complex)
    pvals = np.empty(x_points, dtype=complex)
    for i, x in enumerate(xs):
        pv = ex.evaluate(problem.p, x, problem.params)
        qv = ex.evaluate(problem.q, x, problem.params)
        wv = ex.evaluate(problem.w, x, problem.params)
        base[i] = qv / wv
        pvals[i] = pv
    samples = (base[:, None] + pvals[:, None] * r_grid[None, :]).ravel()
    verts = convex_hull(samples)
    args = np.angle(pvals)
    lo, hi_dir = pvals[int(np.argmin(args))], pvals[int(np.argmax(args))]
    rays = (lo / abs(lo), hi_dir / abs(hi_dir))
    return NumericalRangeHull(samples, verts, rays, xs, r_grid)


# --------------------------------------------------------- admissible pairs


@dataclass
class AdmissiblePair:
    eta: float
    K: complex
    satisfied_fraction: float     # share of samples on the correct side
    separation_ok: bool           # strict inequality for the reference point


def admissible_pair(hull: NumericalRangeHull, lam0: complex) -> AdmissiblePair:
    """Half-plane datum separating lam0 from the sampled numerical range.

    K is the nearest hull point to lam0 and eta rotates lam0 - K onto the
    negative real axis, so the supporting line through K becomes the
    imaginary axis with the range on its right.
    """
    verts = hull.vertices
    if hull_contains(verts, lam0, tol=1e-12 * (1.0 + abs(lam0))):
        raise SimsError(f"lam0 = {lam0} lies inside the sampled numerical range")
    if len(verts) == 1:
        K = verts[0]
    elif len(verts) == 2:
        _, K = _point_segment_distance(lam0, verts[0], verts[1])
    else:
        best = math.inf
        K = verts[0]
        n = len(verts)
        for i in range(n):
            d, proj = _point_segment_distance(lam0, verts[i], verts[(i + 1) % n])
            if d < best:
                best, K = d, proj
    if lam0 == K:
        raise SimsError("lam0 coincides with a hull point")
    eta = -cmath.phase(K - lam0)
    rot = cmath.exp(1j * eta)
    sep = ((lam0 - K) * rot).real
    assert sep < 0.0, "separation failed for a point outside the hull"
    good = 0
    for s in hull.samples:
        if ((s - K) * rot).real >= -1e-9 * (1.0 + abs(s)):
            good += 1
    return AdmissiblePair(eta, K, good / hull.samples.size, sep < 0.0)


# ----------------------------------------------------------- growth probes

BOUNDED = "bounded"
GROWING = "growing"
UNDECIDED = "inconclusive"

CASE_I = "I"
CASE_II_III = "II-or-III"


class _LogSigned:
    """Real accumulator in log space, sign-aware, overflow-tolerant."""

    __slots__ = ("log", "sign")

    def __init__(self):
        self.log = -math.inf
        self.sign = 1.0

    def add(self, value_log: float, sign: float):
        if value_log == -math.inf:
            return
        if self.log == -math.inf:
            self.log, self.sign = value_log, sign
            return
        big, small = max(self.log, value_log), min(self.log, value_log)
        if big - small > 745.0:
            if value_log > self.log:
                self.log, self.sign = value_log, sign
            return
        s = self.sign * math.exp(self.log - big) + sign * math.exp(value_log - big)
        if s == 0.0:
            self.log, self.sign = -math.inf, 1.0
        else:
            self.log = big + math.log(abs(s))
            self.sign = math.copysign(1.0, s)

    def value_log(self):
        return self.log, self.sign


def _growth_verdict(logs):
    """Classify a positive sequence from its last two relative increments."""
    if any(v == math.inf for v in logs[-2:]):
        return GROWING
    incs = []
    for prev, cur in zip(logs[-3:-1], logs[-2:]):
        if prev == -math.inf:
            incs.append(math.inf if cur > -math.inf else 0.0)
            continue
        ratio = math.exp(min(cur - prev, 700.0))
        incs.append(ratio - 1.0)
    if len(incs) < 2:
        return UNDECIDED
    if all(i < 0.05 for i in incs):
        return BOUNDED
    if all(i > 0.5 for i in incs):
        return GROWING
    return UNDECIDED


@dataclass
class SolutionProbe:
    label: str
    l2_logs: list          # log of the cumulative weighted-square integral
    form_logs: list        # log-magnitude of the cumulative quadratic form
    form_signs: list
    l2_verdict: str = UNDECIDED
    form_verdict: str = UNDECIDED


@dataclass
class CaseDiagnostic:
    solutions: list                  # two SolutionProbe records
    suggested_case: str
    eta: float
    K: complex
    lam_test: complex
    alpha_condition_ok: bool         # Re[e^{i eta} cos(alpha) conj(sin(alpha))] <= 0


def _probe_integrals(problem, trajs, schedule, probe, rot, K):
    """Accumulate the weighted-square and quadratic-form integrals of one
    solution, cumulatively at every schedule point.  ``trajs`` covers
    [a, max schedule] as one or more recorded pieces."""
    acc_l2 = _LogSigned()
    acc_form = _LogSigned()
    panels = []
    for traj in trajs:
        for lo, hi in zip(traj.xs, traj.xs[1:]):
            if hi > lo:
                panels.append((float(lo), float(hi), traj))
    panels.sort(key=lambda t: t[0])
    idx = 0
    for b_n in schedule:
        while idx < len(panels) and panels[idx][0] < b_n - 1e-14:
            lo, hi, traj = panels[idx]
            sub_hi = min(hi, b_n)
            gx, gw = gauss4_panel(lo, sub_hi)
            for xx, wt in zip(gx, gw):
                vals, ls = traj.evaluate(xx)
                pv = problem.eval_p(xx)
                qv = problem.eval_q(xx)
                wv = problem.eval_w(xx)
                two_ls = 2.0 * ls
                y, py = vals[0], vals[1]
                yp = py / pv
                dens = wv.real * abs(y) ** 2
                if dens > 0.0:
                    acc_l2.add(math.log(wt * dens) + two_ls, 1.0)
                form = (rot * (pv * abs(yp) ** 2
                               + (qv - K * wv) * abs(y) ** 2)).real
                form += dens
                if form != 0.0:
                    acc_form.add(math.log(wt * abs(form)) + two_ls,
                                 math.copysign(1.0, form))
            if hi > b_n + 1e-14:
                panels[idx] = (sub_hi, hi, traj)  # remainder belongs to later b_n
                break
            idx += 1
        probe.l2_logs.append(acc_l2.log)
        flog, fsign = acc_form.value_log()
        probe.form_logs.append(flog)
        probe.form_signs.append(fsign)
    probe.l2_verdict = _growth_verdict(probe.l2_logs)
    probe.form_verdict = _growth_verdict(probe.form_logs)
    return probe


def case_diagnostic(problem: Problem, lam_test: complex, pair: AdmissiblePair,
                    atol=DEFAULT_ATOL, rtol=DEFAULT_RTOL) -> CaseDiagnostic:
    """Heuristic endpoint classification at a test point.

    Two independent solutions are probed: the generic one satisfying the
    left boundary condition (integrated outward), and the recessive
    candidate pinned by the far boundary condition (integrated backward
    from the last schedule point, the direction in which it dominates and
    is computable).  For each, the weighted-square integral and the
    rotated quadratic-form integral are accumulated up to every schedule
    point.  Exactly one bounded weighted-square indicator suggests the
    limit-point-like case I; both bounded suggests II or III.  Thresholds
    (5% / 50% tail increments) are engineering choices; the verdict is a
    diagnostic, not a proof.
    """
    if len(problem.schedule) < 3:
        raise SimsError("the growth probe needs at least three schedule points")
    rot = cmath.exp(1j * pair.eta)
    if ((lam_test - pair.K) * rot).real > 1e-9 * (1.0 + abs(lam_test)):
        raise SimsError(f"lam_test = {lam_test} is not inside the admissible half-plane")

    b_top = problem.schedule[-1]
    _, phi0 = problem.left_init()
    forward = []
    start, state = problem.a, phi0
    for b_n in problem.schedule:
        traj = propagate(problem, lam_test, start, b_n, state,
                         atol=atol, rtol=rtol, record=True)
        forward.append(traj)
        state = traj.states(-1)[0]
        start = b_n
    c_top, s_top = right_bc_coefficients(problem, b_top)
    far_state = SLState(-s_top, c_top, 0.0, b_top)
    backward = propagate(problem, lam_test, b_top, problem.a, far_state,
                         atol=atol, rtol=rtol, record=True)

    probes = {
        "phi": _probe_integrals(problem, forward, problem.schedule,
                                SolutionProbe("phi", [], [], []), rot, pair.K),
        "recessive": _probe_integrals(problem, [backward], problem.schedule,
                                      SolutionProbe("recessive", [], [], []),
                                      rot, pair.K),
    }

    bounded = [p for p in probes.values() if p.l2_verdict == BOUNDED]
    growing = [p for p in probes.values() if p.l2_verdict == GROWING]
    if len(bounded) == 2:
        suggestion = CASE_II_III
    elif len(bounded) == 1 and len(growing) == 1:
        suggestion = CASE_I
    else:
        suggestion = UNDECIDED

    ca, sa = cmath.cos(problem.alpha), cmath.sin(problem.alpha)
    alpha_ok = (rot * ca * sa.conjugate()).real <= 1e-12
    return CaseDiagnostic([probes["phi"], probes["recessive"]], suggestion,
                          pair.eta, pair.K, lam_test, alpha_ok)
