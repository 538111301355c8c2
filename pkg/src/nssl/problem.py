"""Problem definitions: coefficients, endpoints, boundary data, truncations.

A :class:`Problem` holds the differential expression -(p y')' + q y = lam w y
on [a, b) together with the boundary angle at the regular endpoint a, the
scheme used to close the truncated interval at each schedule point b_n, and
the truncation schedule itself.  Problems are immutable in practice: build
once, share freely.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace
from typing import Union

from . import expr as ex
from . import _kernels
from .ode import SLState


class ProblemError(ValueError):
    pass


@dataclass(frozen=True)
class Dirichlet:
    """y(b_n) = 0."""


@dataclass(frozen=True)
class Angle:
    """y(b_n) cos(beta) + p y'(b_n) sin(beta) = 0."""

    beta: complex


@dataclass(frozen=True)
class ReferenceSolution:
    """Wronskian condition p (y v' - y' v) = 0 at b_n for a supplied v(x)."""

    v: ex.Expr


RightBC = Union[Dirichlet, Angle, ReferenceSolution]


def swap_alpha(alpha: complex) -> complex:
    """Angle of the complementary boundary condition at the left endpoint.

    cos(alpha - pi/2) = sin(alpha) and sin(alpha - pi/2) = -cos(alpha), so
    the returned angle encodes sin(alpha) y(a) - cos(alpha) p y'(a) = 0.
    Applying the swap twice negates both coefficients, which is the same
    condition again.
    """
    return alpha - math.pi / 2


def left_init(alpha: complex, a: float = 0.0):
    """The canonical fundamental pair at x = a for boundary angle alpha.

    Returns (theta, phi) with theta = (cos a, sin a), phi = (sin a, -cos a)
    in (y, py) coordinates; phi satisfies the boundary condition, theta the
    swapped one.  Both start with log_scale 0.
    """
    ca = cmath.cos(alpha)
    sa = cmath.sin(alpha)
    theta = SLState(ca, sa, 0.0, a)
    phi = SLState(sa, -ca, 0.0, a)
    return theta, phi


@dataclass
class Problem:
    p: ex.Expr
    q: ex.Expr
    w: ex.Expr
    a: float
    b: float  # math.inf for an infinite singular endpoint
    alpha: complex
    right_bc: RightBC
    schedule: tuple[float, ...]
    params: dict[str, complex] = field(default_factory=dict)

    def __post_init__(self):
        self.schedule = tuple(float(t) for t in self.schedule)
        if not self.schedule:
            raise ProblemError("truncation schedule is empty")
        if any(t2 <= t1 for t1, t2 in zip(self.schedule, self.schedule[1:])):
            raise ProblemError("truncation schedule must be strictly increasing")
        if self.schedule[0] <= self.a:
            raise ProblemError("schedule points must lie to the right of a")
        if self.schedule[-1] >= self.b:
            raise ProblemError("schedule points must lie strictly below b")
        self._check_coefficients()

    def _check_coefficients(self):
        """Sample w > 0 and p != 0 on a 1000-point mesh of [a, max b_n].

        For essentially real p a sign change between mesh points is also
        rejected: an interior zero of p is outside this solver's scope even
        when no sample lands on it.
        """
        hi = self.schedule[-1]
        n = 1000
        pvals = []
        for i in range(n):
            x = self.a + (hi - self.a) * i / (n - 1)
            try:
                pv = ex.evaluate(self.p, x, self.params)
                wv = ex.evaluate(self.w, x, self.params)
            except ex.ExprEvalError as e:
                raise ProblemError(f"coefficient evaluation failed at x = {x}: {e}")
            pvals.append((x, pv))
            if abs(wv.imag) > 1e-12 * abs(wv) or wv.real <= 0.0:
                raise ProblemError(f"w is not positive at x = {x} (w = {wv})")
        scale = max(abs(pv) for _, pv in pvals)
        for (x, pv) in pvals:
            if abs(pv) <= 1e-9 * scale:
                raise ProblemError(f"p vanishes at x = {x}")
        if all(abs(pv.imag) <= 1e-12 * abs(pv) for _, pv in pvals):
            for (x1, p1), (x2, p2) in zip(pvals, pvals[1:]):
                if p1.real * p2.real < 0.0:
                    raise ProblemError(
                        f"p changes sign between x = {x1} and x = {x2}")

    # -- derived accessors ---------------------------------------------

    def coefficient_fns(self) -> _kernels.CoeffFns:
        return _kernels.compile_coeffs(
            ex.to_python_source(self.p, self.params),
            ex.to_python_source(self.q, self.params),
            ex.to_python_source(self.w, self.params),
        )

    def left_init(self):
        return left_init(self.alpha, self.a)

    def with_alpha(self, alpha: complex) -> "Problem":
        return replace(self, alpha=alpha)

    def swapped(self) -> "Problem":
        """The companion problem with the complementary left condition."""
        return self.with_alpha(swap_alpha(self.alpha))

    def eval_p(self, x: float) -> complex:
        return ex.evaluate(self.p, x, self.params)

    def eval_q(self, x: float) -> complex:
        return ex.evaluate(self.q, x, self.params)

    def eval_w(self, x: float) -> complex:
        return ex.evaluate(self.w, x, self.params)


def right_bc_coefficients(problem: Problem, b_n: float):
    """Homogeneous boundary pair (c, s) encoding y c + py' s = 0 at b_n.

    Dirichlet gives (1, 0); Angle(beta) gives (cos beta, sin beta); a
    reference solution v gives (p(b_n) v'(b_n), -v(b_n)), i.e. the
    Wronskian condition p (y v' - y' v) = 0.  The pair is normalized to
    unit maximum modulus, so rescaling v leaves it unchanged up to one
    overall complex factor of modulus one times a constant; its zero
    structure is what matters downstream.
    """
    rbc = problem.right_bc
    if isinstance(rbc, Dirichlet):
        return (1.0 + 0j, 0j)
    if isinstance(rbc, Angle):
        return (cmath.cos(rbc.beta), cmath.sin(rbc.beta))
    if isinstance(rbc, ReferenceSolution):
        v = ex.evaluate(rbc.v, b_n, problem.params)
        vp = ex.evaluate(ex.differentiate(rbc.v), b_n, problem.params)
        pv = ex.evaluate(problem.p, b_n, problem.params)
        c, s = pv * vp, -v
        scale = max(abs(c), abs(s))
        if scale < 1e-300:
            raise ProblemError(
                f"reference solution degenerates at b_n = {b_n}: v and v' both vanish")
        return (c / scale, s / scale)
    raise TypeError(f"unsupported right boundary scheme: {rbc!r}")


def default_schedule(b: float, count: int, a: float = 0.0, b0: float = 5.0):
    """Canonical truncation schedule approaching the singular endpoint.

    Infinite b: the arithmetic sequence b0, 2 b0, ..., count * b0.
    Finite b: b - (b - a) 2^-n for n = 1..count.
    """
    if count < 2:
        raise ProblemError("schedule needs at least two truncation points")
    if math.isinf(b):
        return tuple(b0 * n for n in range(1, count + 1))
    return tuple(b - (b - a) * 2.0 ** -n for n in range(1, count + 1))
