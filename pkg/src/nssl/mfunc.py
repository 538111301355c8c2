"""Truncated Titchmarsh-Weyl functions and the shooting miss-distance.

For a truncation point b_n and the boundary pair (c, s) at b_n, the Weyl
coefficient of the truncated operator is

    m_n(lam) = -(c theta + s p theta') / (c phi + s p phi')   at b_n,

where (theta, phi) is the fundamental pair fixed at the regular endpoint.
The denominator D(lam) = c phi + s p phi', tracked with its scale, is the
miss-distance: an entire function of lam whose zeros (with multiplicity)
are the eigenvalues of the truncated operator and the poles of m_n.
Working with the homogeneous pair (c, s) avoids the cot singularity of
the angle form at Dirichlet conditions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ode import (DEFAULT_ATOL, DEFAULT_RTOL, gauss4_panel, propagate,
                  propagate_pair)
from .problem import Problem, right_bc_coefficients

#: denominator threshold, relative to the propagated solution magnitude
POLE_REL_THRESHOLD = 1e-12


class PoleError(ArithmeticError):
    """A Weyl-coefficient value was requested at (or next to) a pole."""


@dataclass
class MValue:
    value: complex
    at_pole: bool
    b_n: float
    lam: complex


@dataclass
class MissDistance:
    """Scaled shooting determinant: true D = value * exp(log_scale).

    ``value`` is kept at unit order by dividing out the propagated solution
    magnitude, so smallness of ``value`` is smallness of D relative to the
    solution scale (the meaningful notion near eigenvalues).
    """

    value: complex
    log_scale: float
    lam: complex
    b_n: float


def _endpoint_pair(problem: Problem, b_n: float, lam: complex, atol, rtol):
    theta0, phi0 = problem.left_init()
    return propagate_pair(problem, lam, problem.a, b_n, (theta0, phi0),
                          atol=atol, rtol=rtol)


def compute_mn(problem: Problem, b_n: float, lam: complex,
               atol=DEFAULT_ATOL, rtol=DEFAULT_RTOL) -> MValue:
    """Weyl coefficient of the truncated operator at lam.

    ``at_pole`` is set when the denominator falls below
    ``POLE_REL_THRESHOLD`` times the solution magnitude at b_n; the value
    field must not be consumed in that case.
    """
    th, ph = _endpoint_pair(problem, b_n, lam, atol, rtol)
    c, s = right_bc_coefficients(problem, b_n)
    num = c * th.y + s * th.py
    den = c * ph.y + s * ph.py
    scale = max(abs(th.y), abs(th.py), abs(ph.y), abs(ph.py))
    at_pole = abs(den) < POLE_REL_THRESHOLD * scale
    if den == 0:
        value = complex(math.inf, math.inf)
    else:
        value = -num / den
    return MValue(value, at_pole, b_n, lam)


def compute_miss_distance(problem: Problem, b_n: float, lam: complex,
                          atol=DEFAULT_ATOL, rtol=DEFAULT_RTOL) -> MissDistance:
    """Shooting determinant D(lam) with scale tracking.

    Only the boundary-condition solution phi is propagated.  D is analytic
    in lam (the propagated values are entire in lam), so its winding along
    closed contours counts enclosed truncated-operator eigenvalues.
    """
    _, phi0 = problem.left_init()
    ph = propagate(problem, lam, problem.a, b_n, phi0, atol=atol, rtol=rtol)
    c, s = right_bc_coefficients(problem, b_n)
    det = c * ph.y + s * ph.py
    mag = max(abs(ph.y), abs(ph.py))
    if mag == 0.0:
        mag = 1.0
    return MissDistance(det / mag, ph.log_scale + math.log(mag), lam, b_n)


# ------------------------------------------------------- continuation check


class _ScaledSum:
    """Accumulates sum of v_i * exp(l_i) without leaving floating range."""

    def __init__(self):
        self.value = 0j
        self.log = 0.0

    def add(self, v: complex, l: float):
        if v == 0:
            return
        if self.value == 0:
            self.value, self.log = v, l
            return
        if l > self.log:
            self.value = self.value * math.exp(self.log - l) + v
            self.log = l
        else:
            self.value += v * math.exp(l - self.log)
        av = abs(self.value)
        if av > 1e30 or (0.0 < av < 1e-30):
            self.log += math.log(av)
            self.value /= av


@dataclass
class ContinuationCheck:
    direct: complex
    via_formula: complex
    discrepancy: float


def _union_mesh(xa, xb, lo, hi):
    xs = np.unique(np.concatenate([xa, xb]))
    return xs[(xs >= lo) & (xs <= hi)]


def continuation_check(problem: Problem, b_n: float, lam_ref: complex,
                       lam: complex, atol=DEFAULT_ATOL, rtol=DEFAULT_RTOL
                       ) -> ContinuationCheck:
    """Cross-check m_n(lam) against its analytic continuation from lam_ref.

    The continuation formula moves the Weyl coefficient from lam_ref to lam
    through the two weighted integrals of theta(., lam) psi(., lam_ref) and
    phi(., lam) psi(., lam_ref), where psi = theta + m_n(lam_ref) phi.  The
    integrals are evaluated by a composite 4-point Gauss rule on the union
    of the two recorded meshes, using dense trajectory output.  Raises
    :class:`PoleError` when either argument sits on a pole of m_n.
    """
    m_ref = compute_mn(problem, b_n, lam_ref, atol, rtol)
    if m_ref.at_pole:
        raise PoleError(f"lam_ref = {lam_ref} is an eigenvalue of the truncated operator")
    direct = compute_mn(problem, b_n, lam, atol, rtol)
    if direct.at_pole:
        raise PoleError(f"lam = {lam} is an eigenvalue of the truncated operator")

    theta0, phi0 = problem.left_init()
    traj = propagate_pair(problem, lam, problem.a, b_n, (theta0, phi0),
                          atol=atol, rtol=rtol, record=True)
    traj_ref = propagate_pair(problem, lam_ref, problem.a, b_n, (theta0, phi0),
                              atol=atol, rtol=rtol, record=True)

    mref = m_ref.value
    i_theta = _ScaledSum()
    i_phi = _ScaledSum()
    mesh = _union_mesh(traj.xs, traj_ref.xs, problem.a, b_n)
    for lo, hi in zip(mesh, mesh[1:]):
        if hi <= lo:
            continue
        xs, ws = gauss4_panel(lo, hi)
        for xx, wt in zip(xs, ws):
            va, la = traj.evaluate(xx)
            vr, lr = traj_ref.evaluate(xx)
            wv = problem.eval_w(xx)
            psi = vr[0] + mref * vr[2]
            i_theta.add(wt * wv * va[0] * psi, la + lr)
            i_phi.add(wt * wv * va[2] * psi, la + lr)

    dl = lam - lam_ref
    big = max(i_theta.log, i_phi.log, 0.0)
    num = mref * math.exp(-big) - dl * i_theta.value * math.exp(i_theta.log - big)
    den = math.exp(-big) + dl * i_phi.value * math.exp(i_phi.log - big)
    if den == 0:
        raise PoleError("continuation denominator vanished")
    via = num / den
    disc = abs(direct.value - via) / max(abs(direct.value), 1e-300)
    return ContinuationCheck(direct.value, via, disc)
