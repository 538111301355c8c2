"""Eigenvalue location inside complex boxes.

The count of enclosed eigenvalues is the winding number of the scaled
miss-distance D around the box boundary, obtained by derivative-free phase
tracking: boundary samples are refined until adjacent values rotate by
less than pi/2 and change magnitude by less than a factor of 8, after
which the accumulated argument is an exact multiple of 2 pi.  The real
scale exponent carried by D never enters the phase, so renormalization is
invisible here.  Boxes with more than one root are split into four tiles
(winding is checked to be additive across every split); isolated simple
roots are polished by Muller's method, which needs no derivative of D.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

from .mfunc import compute_miss_distance
from .ode import DEFAULT_ATOL, DEFAULT_RTOL


class ScaledComplex(NamedTuple):
    """A complex value with its scale split off: true value * exp(log_scale)."""

    value: complex
    log_scale: float


class LocateError(RuntimeError):
    pass


class NearZeroOnContour(LocateError):
    """The function is (numerically) zero on the contour at ``lam``."""

    def __init__(self, lam: complex):
        super().__init__(f"near-zero contour value at lam = {lam}")
        self.lam = lam


@dataclass(frozen=True)
class ComplexBox:
    re_min: float
    re_max: float
    im_min: float
    im_max: float

    def __post_init__(self):
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise ValueError("degenerate box")

    @property
    def diagonal(self) -> float:
        return math.hypot(self.re_max - self.re_min, self.im_max - self.im_min)

    @property
    def center(self) -> complex:
        return complex(0.5 * (self.re_min + self.re_max),
                       0.5 * (self.im_min + self.im_max))

    def corners(self):
        """Counterclockwise from the lower-left corner."""
        return (complex(self.re_min, self.im_min), complex(self.re_max, self.im_min),
                complex(self.re_max, self.im_max), complex(self.re_min, self.im_max))

    def contains(self, z: complex) -> bool:
        return (self.re_min <= z.real <= self.re_max
                and self.im_min <= z.imag <= self.im_max)

    def dilated(self, margin: float) -> "ComplexBox":
        return ComplexBox(self.re_min - margin, self.re_max + margin,
                          self.im_min - margin, self.im_max + margin)

    def split(self, fx: float = 0.5, fy: float = 0.5):
        """Four exactly tiling children, cut at the given fractions."""
        xm = self.re_min + fx * (self.re_max - self.re_min)
        ym = self.im_min + fy * (self.im_max - self.im_min)
        return (ComplexBox(self.re_min, xm, self.im_min, ym),
                ComplexBox(xm, self.re_max, self.im_min, ym),
                ComplexBox(self.re_min, xm, ym, self.im_max),
                ComplexBox(xm, self.re_max, ym, self.im_max))


@dataclass
class EigenvalueEstimate:
    lam: complex
    multiplicity: int
    residual: float
    b_n: float
    refined: bool


@dataclass
class LocateOptions:
    max_per_box: int = 1
    isolation_rel: float = 1e-3      # of the original box diagonal
    refine_rel: float = 1e-10        # Muller stop: |dlam| < refine_rel |lam|
    refine_floor: float = 1e-12
    initial_samples: int = 16        # per box side
    max_initial_samples: int = 8192  # cap for the stability-doubling escalation
    max_side_samples: int = 1 << 16
    max_depth: int = 40
    muller_max_iter: int = 60
    split_fractions: tuple = ((0.5, 0.5), (0.53, 0.47), (0.47, 0.53),
                              (0.555, 0.555))


_PHASE_LIMIT = math.pi / 2
_RATIO_LIMIT = math.log(8.0)

# Subdivision fraction for contour refinement.  Halving is blind to a
# near-linear phase that completes an even number of turns per segment
# (the aliasing reproduces itself at every dyadic level); an irrational
# split always leaves one part with a measurable wrapped phase.
_CUT = 0.3819660112501051

# A local magnitude notch this deep whose converged sample spacing is below
# the relative floor marks a zero essentially on the contour: phase wraps
# across such a notch are not trustworthy at any finite sampling.
_NOTCH_DEPTH = 0.15
_NOTCH_SPACING_REL = 3e-4


class _SideResult(NamedTuple):
    phase_total: float
    log_mags: list


def _refine_side(f, za: complex, zb: complex, opts: LocateOptions,
                 n0: int | None = None) -> _SideResult:
    """Sample one contour side adaptively; returns the argument increment.

    A pair of adjacent samples is accepted only when the phase step is
    below pi/2, the magnitude ratio is within a factor of 8, and an
    interior probe confirms both (with all three wrapped steps below pi,
    the probe phase sum can differ from the pair's phase step only by an
    exact multiple of 2 pi, so hidden turns surface).
    """
    def sample(z):
        v, ls = f(z)
        if v == 0:
            raise NearZeroOnContour(z)
        return (z, cmath.phase(v), math.log(abs(v)) + ls)

    if n0 is None:
        n0 = opts.initial_samples
    pts = [sample(za + (zb - za) * (idx / n0)) for idx in range(n0 + 1)]
    i = 0
    while i < len(pts) - 1:
        if len(pts) > opts.max_side_samples:
            worst = min(pts, key=lambda t: t[2])
            raise NearZeroOnContour(worst[0])
        (z1, ph1, lm1), (z2, ph2, lm2) = pts[i], pts[i + 1]
        dph = math.remainder(ph2 - ph1, 2 * math.pi)
        zm = z1 + _CUT * (z2 - z1)
        exhausted = zm == z1 or zm == z2  # float resolution floor
        if abs(dph) >= _PHASE_LIMIT or abs(lm2 - lm1) >= _RATIO_LIMIT:
            if exhausted:
                # an unresolvable jump: a zero sits (sub-ulp) on the contour
                raise NearZeroOnContour(z1)
            pts.insert(i + 1, sample(zm))
            continue
        if exhausted:
            i += 1
            continue
        _, phm, lmm = mid = sample(zm)
        d1 = math.remainder(phm - ph1, 2 * math.pi)
        d2 = math.remainder(ph2 - phm, 2 * math.pi)
        if (abs(d1) >= _PHASE_LIMIT or abs(d2) >= _PHASE_LIMIT
                or abs(lmm - lm1) >= _RATIO_LIMIT or abs(lm2 - lmm) >= _RATIO_LIMIT
                or abs(d1 + d2 - dph) > 3.0):
            pts.insert(i + 1, mid)
            continue
        i += 1

    # deep, sharply resolved magnitude notches mean a zero hugs the contour
    floor = _NOTCH_SPACING_REL * abs(zb - za)
    for k in range(len(pts)):
        zk, _, lmk = pts[k]
        left_gap = abs(zk - pts[k - 1][0]) if k > 0 else math.inf
        right_gap = abs(pts[k + 1][0] - zk) if k + 1 < len(pts) else math.inf
        if min(left_gap, right_gap) > floor:
            continue
        left_up = k == 0 or pts[k - 1][2] > lmk + _NOTCH_DEPTH
        right_up = k + 1 == len(pts) or pts[k + 1][2] > lmk + _NOTCH_DEPTH
        if left_up and right_up:
            raise NearZeroOnContour(zk)

    total = 0.0
    for (z1, ph1, lm1), (z2, ph2, lm2) in zip(pts, pts[1:]):
        total += math.remainder(ph2 - ph1, 2 * math.pi)
    return _SideResult(total, [t[2] for t in pts])


class _WindingDetail(NamedTuple):
    winding: int
    median_log_mag: float
    min_log_mag: float


def _winding_detail(f, box: ComplexBox, opts: LocateOptions,
                    n0: int | None = None) -> _WindingDetail:
    c0, c1, c2, c3 = box.corners()
    total = 0.0
    log_mags = []
    for za, zb in ((c0, c1), (c1, c2), (c2, c3), (c3, c0)):
        side = _refine_side(f, za, zb, opts, n0)
        total += side.phase_total
        log_mags.extend(side.log_mags)
    turns = total / (2 * math.pi)
    w = round(turns)
    if abs(turns - w) > 0.2:
        # phase tracking lost coherence, almost always a boundary zero
        raise NearZeroOnContour(box.center)
    log_mags.sort()
    return _WindingDetail(int(w), log_mags[len(log_mags) // 2], log_mags[0])


def _stable_winding_detail(f, box: ComplexBox, opts: LocateOptions) -> _WindingDetail:
    """Winding verified by agreement of two successive sampling densities.

    The initial grids are nested, so doubling cannot hide the same count
    twice except under a sustained exactly-linear phase conspiracy; a
    count that never stabilizes is treated as a contour-coherence failure
    (almost always a zero hugging the boundary).
    """
    n0 = opts.initial_samples
    prev = _winding_detail(f, box, opts, n0)
    while 2 * n0 <= opts.max_initial_samples:
        cur = _winding_detail(f, box, opts, 2 * n0)
        if cur.winding == prev.winding:
            return cur
        prev = cur
        n0 *= 2
    raise NearZeroOnContour(box.center)


def _split_consistently(f, tile: ComplexBox, w: int, opts: LocateOptions):
    """Split into four children; verify the windings sum to the parent's.

    A sum mismatch means a root sits in the blind proximity band of a
    split line (where a turn can leak through the shared edge), so the
    next candidate fraction moves the lines and retries, exactly like the
    near-zero case.  Returns the (child box, detail) list; None when every
    candidate split hits a near-zero; raises when no candidate balances.
    """
    mismatches = []
    for fx, fy in opts.split_fractions:
        cand = tile.split(fx, fy)
        try:
            dets = [_stable_winding_detail(f, cb, opts) for cb in cand]
        except NearZeroOnContour:
            continue
        if sum(d.winding for d in dets) != w:
            mismatches.append([d.winding for d in dets])
            continue
        return list(zip(cand, dets))
    if mismatches:
        raise LocateError(
            f"winding additivity violated splitting {tile}: "
            f"{w} != any of {mismatches}")
    return None


def winding_number(f: Callable[[complex], ScaledComplex], box: ComplexBox,
                   opts: LocateOptions | None = None) -> int:
    """Winding of f around the box boundary = enclosed zero count.

    ``f`` maps a complex point to a :class:`ScaledComplex`.  Raises
    :class:`NearZeroOnContour` (with the offending point) when a zero sits
    on or hugs the contour; callers retry with a perturbed box.
    """
    return _stable_winding_detail(f, box, opts or LocateOptions()).winding


def winding_number_with_retries(f, box: ComplexBox, opts: LocateOptions | None = None,
                                retries: int = 3):
    """Winding with the deterministic 1%-of-diagonal outward dilation retry.

    Returns (winding, box actually used).
    """
    opts = opts or LocateOptions()
    current = box
    for attempt in range(retries + 1):
        try:
            return _stable_winding_detail(f, current, opts).winding, current
        except NearZeroOnContour:
            if attempt == retries:
                raise
            current = current.dilated(0.01 * current.diagonal)
    raise AssertionError("unreachable")


# ------------------------------------------------------------------- muller


def _muller(g, z0: complex, z1: complex, z2: complex, tol_for, max_iter: int,
            center: complex, bound: float):
    """Derivative-free root polish; returns (z, converged)."""
    f0, f1, f2 = g(z0), g(z1), g(z2)
    z = z2
    for _ in range(max_iter):
        if z1 == z0 or z2 == z1 or z2 == z0:
            return z, False
        q = (z2 - z1) / (z1 - z0)
        a = q * f2 - q * (1 + q) * f1 + q * q * f0
        b = (2 * q + 1) * f2 - (1 + q) ** 2 * f1 + q * q * f0
        c = (1 + q) * f2
        disc = cmath.sqrt(b * b - 4 * a * c)
        d1, d2 = b + disc, b - disc
        den = d1 if abs(d1) >= abs(d2) else d2
        if den == 0:
            return z, False
        step = -(z2 - z1) * (2 * c) / den
        z = z2 + step
        if abs(z - center) > bound:
            return z2, False
        if abs(step) < tol_for(z):
            return z, True
        z0, z1, z2 = z1, z2, z
        f0, f1 = f1, f2
        f2 = g(z)
    return z, False


def _log_mag(sc: ScaledComplex) -> float:
    if sc.value == 0:
        return -math.inf
    return math.log(abs(sc.value)) + sc.log_scale


def _refine_simple(f, box: ComplexBox, opts: LocateOptions, log_ref: float):
    def g(z):
        v, ls = f(z)
        return v * math.exp(max(min(ls - log_ref, 600.0), -600.0))

    def tol_for(z):
        return max(opts.refine_rel * abs(z), opts.refine_floor)

    c = box.center
    dx = 0.25 * (box.re_max - box.re_min)
    dy = 0.25 * (box.im_max - box.im_min)
    z, ok = _muller(g, c + dx, c + 1j * dy, c, tol_for, opts.muller_max_iter,
                    c, 4.0 * box.diagonal)
    return z, ok


def _polish_root(f, tile: ComplexBox, det: _WindingDetail, opts: LocateOptions):
    """Polish the single root of a winding-1 tile.

    Muller's quadratic model is useless while the tile spans many orders
    of magnitude of the function, so on failure the tile is shrunk around
    the root (winding-guided quadrisection) and the iteration retried.
    """
    current, cdet = tile, det
    for _ in range(opts.max_depth):
        lam, ok = _refine_simple(f, current, opts, cdet.median_log_mag)
        # the root is strictly interior (winding 1): an iterate that left
        # the tile converged to a neighbour's root and must be discarded
        if ok and current.contains(lam):
            return lam, True
        if current.diagonal <= max(opts.refine_rel * abs(current.center),
                                   opts.refine_floor):
            return current.center, True  # bisection alone met the tolerance
        children = _split_consistently(f, current, 1, opts)
        if children is None:
            return current.center, False
        for cb, d in children:
            if d.winding == 1:
                current, cdet = cb, d
    return current.center, False


def find_eigenvalues(problem, b_n: float, box: ComplexBox,
                     opts: LocateOptions | None = None,
                     atol=DEFAULT_ATOL, rtol=DEFAULT_RTOL,
                     f: Callable[[complex], ScaledComplex] | None = None):
    """All eigenvalues of the truncated operator inside the box.

    Subdivides until every tile holds at most ``max_per_box`` roots (counted
    with multiplicity) or is smaller than the isolation diameter, then
    polishes simple roots by Muller iteration on the miss-distance.  The sum
    of reported multiplicities equals the winding of the (possibly dilated)
    outer box.  Pass ``f`` to locate zeros of an arbitrary scaled function
    instead of the problem's miss-distance.
    """
    opts = opts or LocateOptions()
    if f is None:
        cache: dict[complex, ScaledComplex] = {}

        def f(lam: complex) -> ScaledComplex:
            hit = cache.get(lam)
            if hit is None:
                md = compute_miss_distance(problem, b_n, lam, atol=atol, rtol=rtol)
                hit = ScaledComplex(md.value, md.log_scale)
                cache[lam] = hit
            return hit

    outer = box
    detail = None
    for attempt in range(4):
        try:
            detail = _stable_winding_detail(f, outer, opts)
            break
        except NearZeroOnContour:
            if attempt == 3:
                raise
            outer = outer.dilated(0.01 * outer.diagonal)
    isolation = opts.isolation_rel * outer.diagonal

    results: list[EigenvalueEstimate] = []
    stack = [(outer, detail, 0)]
    while stack:
        tile, det, depth = stack.pop()
        w = det.winding
        if w == 0:
            continue
        small = tile.diagonal < isolation
        if w > opts.max_per_box and not small and depth < opts.max_depth:
            children = _split_consistently(f, tile, w, opts)
            if children is None:
                raise NearZeroOnContour(tile.center)
            for cbox, cdet in children:
                stack.append((cbox, cdet, depth + 1))
            continue
        # isolated root or terminal cluster
        if w == 1:
            lam, ok = _polish_root(f, tile, det, opts)
        else:
            lam, ok = tile.center, False
        res = math.exp(max(min(_log_mag(f(lam)) - det.median_log_mag, 600.0), -600.0))
        results.append(EigenvalueEstimate(lam, w, res, b_n, ok))

    total = sum(e.multiplicity for e in results)
    if total != detail.winding:
        raise LocateError(f"multiplicity bookkeeping lost roots: "
                          f"{total} != {detail.winding}")
    results.sort(key=lambda e: (abs(e.lam), cmath.phase(e.lam)))
    return results
