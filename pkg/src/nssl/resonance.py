"""Complex-scaling front end for resonance computation.

Rotating the variable x -> x e^{i theta} turns resonances of the
selfadjoint half-line problem -y'' + V(x) y = lam y into genuine
eigenvalues mu of a non-selfadjoint problem with potential
e^{2 i theta} V(x e^{i theta}); candidates map back via
lam = e^{-2 i theta} mu.  Two independent filters are reported for every
candidate: the boundary-swap exactness verdict (truncation artifacts) and
invariance of lam under a change of theta (scaling artifacts).  Neither
filter subsumes the other.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, replace

from . import expr as ex
from .exactness import EXACT, run_boundary_swap
from .locate import ComplexBox, LocateOptions
from .ode import DEFAULT_ATOL, DEFAULT_RTOL
from .problem import Problem


class ResonanceError(ValueError):
    pass


#: slack for the lower-half-plane test: a genuine resonance whose width is
#: below the attainable accuracy can surface with Im(lam) barely positive
LOWER_HALF_TOL = 1e-8


@dataclass
class ResonanceCandidate:
    lam: complex               # unrotated plane, lam = e^{-2 i theta} mu
    mu: complex                # rotated plane
    theta: float
    verdict: str               # exactness verdict of the mu-plane track
    pair_distance: float
    lower_half: bool           # Im(lam) <= 0 (to noise), necessary for a resonance
    theta_invariant: bool | None = None   # set by the multi-angle filter

    @property
    def genuine(self) -> bool:
        return (self.lower_half and self.verdict == EXACT
                and bool(self.theta_invariant))


def scale_problem(V: ex.Expr, theta: float, base: Problem) -> Problem:
    """The rotated problem with q(x) = e^{2 i theta} V(x e^{i theta}).

    p and w are set to one; endpoint data, left boundary angle, right
    scheme and schedule are taken from ``base``.  theta = 0 reproduces the
    unrotated potential and is allowed for pipeline reality checks.
    """
    if not (0.0 <= theta < cmath.pi / 2):
        raise ResonanceError(f"rotation angle theta = {theta} outside [0, pi/2)")
    rotated_arg = ex.Mul(ex.Var(), ex.Const(cmath.exp(1j * theta)))
    q_theta = ex.Mul(ex.Const(cmath.exp(2j * theta)), ex.substitute_var(V, rotated_arg))
    one = ex.Const(1 + 0j)
    return replace(base, p=one, q=q_theta, w=one)


def find_resonances(V: ex.Expr, theta: float, box_mu: ComplexBox, base: Problem,
                    opts: LocateOptions | None = None,
                    atol=DEFAULT_ATOL, rtol=DEFAULT_RTOL,
                    tau_conv=None, tau_pair=None, tau_match=None):
    """Resonance candidates of the rotated problem inside a mu-plane box.

    Runs the boundary-swap pipeline (base left condition against its
    complement) on the scaled problem over the base schedule, then maps
    every tracked limit back to the lam plane.  Returns (candidates,
    exactness report); candidates carry the per-limit verdicts, the
    lower-half-plane flag, and an unset theta-invariance slot.
    """
    scaled = scale_problem(V, theta, base)
    kwargs = {}
    if tau_conv is not None:
        kwargs["tau_conv"] = tau_conv
    report = run_boundary_swap(scaled, box_mu, scaled.schedule, opts,
                               atol=atol, rtol=rtol,
                               tau_pair=tau_pair, tau_match=tau_match, **kwargs)
    back = cmath.exp(-2j * theta)
    candidates = []
    for tv in report.verdicts:
        mu = tv.track.limit
        lam = back * mu
        candidates.append(ResonanceCandidate(
            lam, mu, theta, tv.verdict, tv.pair_distance,
            lower_half=lam.imag <= LOWER_HALF_TOL * (1.0 + abs(lam))))
    return candidates, report


def theta_invariance_filter(runs, tau_theta_rel: float = 1e-3):
    """Keep candidates present (in the lam plane) in every rotation run.

    ``runs`` is a list of (theta, candidates); at least two distinct
    angles are required.  A candidate of the smallest-theta run passes
    when every other run has a candidate within
    tau_theta_rel * (1 + |lam|); passing and failing candidates are both
    returned, with ``theta_invariant`` set accordingly.
    """
    thetas = sorted({th for th, _ in runs})
    if len(thetas) < 2:
        raise ResonanceError("theta invariance needs at least two distinct angles")
    base_theta = thetas[0]
    base_run = next(cands for th, cands in runs if th == base_theta)
    others = [cands for th, cands in runs if th != base_theta]
    out = []
    for cand in base_run:
        tol = tau_theta_rel * (1.0 + abs(cand.lam))
        ok = all(any(abs(cand.lam - c.lam) < tol for c in cands) for cands in others)
        out.append(replace(cand, theta_invariant=ok))
    return out
