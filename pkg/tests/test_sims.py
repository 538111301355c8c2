import cmath
import math

import numpy as np
import pytest

from nssl import sims
from nssl.expr import parse
from nssl.problem import Dirichlet, Problem, ReferenceSolution


def constant_q_problem(c=1 + 0.5j):
    return Problem(parse("1"), parse("c^2", ["c"]), parse("1"), 0.0, math.inf,
                   0.0, Dirichlet(), (5.0, 10.0, 15.0), {"c": c})


def example1_problem(c=1 + 0.5j):
    return Problem(parse("1"), parse("c^2", ["c"]), parse("exp(-3*x)"),
                   0.0, math.inf, 0.0, ReferenceSolution(parse("exp(-x)")),
                   (5.0, 10.0, 15.0, 20.0), {"c": c})


def oscillator_problem():
    return Problem(parse("1"), parse("c^2*x^2", ["c"]), parse("1"),
                   0.0, math.inf, 0.0, Dirichlet(), (5.0, 10.0, 15.0, 20.0),
                   {"c": cmath.sqrt(1 + 3j)})


def free_problem():
    return Problem(parse("1"), parse("0"), parse("1"), 0.0, math.inf, 0.0,
                   Dirichlet(), (5.0, 10.0, 15.0), {})


def test_constant_q_hull_degenerates_to_segment():
    hull = sims.sample_hull(constant_q_problem())
    # samples c^2 + r lie on a horizontal line: the hull is its two ends
    assert len(hull.vertices) == 2
    c2 = (1 + 0.5j) ** 2
    assert abs(hull.vertices[0] - (c2 + 1e-6)) < 1e-9
    assert abs(hull.vertices[1] - (c2 + 1e6)) < 1.0
    assert all(abs(v.imag - c2.imag) < 1e-12 for v in hull.vertices)


def test_oscillator_hull_is_cone_between_rays():
    hull = sims.sample_hull(oscillator_problem())
    c2 = 1 + 3j
    top = cmath.phase(c2)
    for s in hull.samples[::37]:
        assert -1e-12 <= cmath.phase(s) <= top + 1e-12
    assert sims.hull_contains(hull.vertices, 10.0 + 0j, tol=1e-6)
    mid = 10 * cmath.exp(0.5j * top)
    assert sims.hull_contains(hull.vertices, mid, tol=1e-6)


def test_hull_contains_all_samples():
    for prob in (constant_q_problem(), oscillator_problem(), example1_problem()):
        hull = sims.sample_hull(prob)
        tol = 1e-12 * max(1.0, max(abs(s) for s in hull.samples))
        for s in hull.samples[::53]:
            assert sims.hull_contains(hull.vertices, s, tol=tol)


def test_denser_grids_never_shrink_hull():
    prob = oscillator_problem()
    coarse = sims.sample_hull(prob, x_points=100, r_grid=np.logspace(-6, 6, 20))
    fine = sims.sample_hull(prob, x_points=200, r_grid=np.logspace(-6, 6, 40))
    for v in coarse.vertices:
        assert sims.hull_contains(fine.vertices, v, tol=1e-10 * max(1.0, abs(v)))


def test_empty_r_grid_rejected():
    with pytest.raises(sims.SimsError):
        sims.sample_hull(constant_q_problem(), r_grid=np.array([]))


def test_admissible_pair_collinear():
    # hull on the positive real half-line from 0, reference point at -1
    prob = free_problem()
    hull = sims.sample_hull(prob)
    pair = sims.admissible_pair(hull, -1 + 0j)
    assert abs(pair.K) < 1e-5
    assert abs(pair.eta) < 1e-5
    assert pair.separation_ok
    assert pair.satisfied_fraction == 1.0


def test_admissible_pair_orthogonal_direction():
    prob = free_problem()
    hull = sims.sample_hull(prob)
    pair = sims.admissible_pair(hull, 1j)
    assert abs(pair.K) < 1e-5
    # whatever the sign convention, the half-plane separation must hold
    assert ((1j - pair.K) * cmath.exp(1j * pair.eta)).real < 0
    assert pair.satisfied_fraction > 0.999


def test_admissible_pair_rejects_interior_points():
    hull = sims.sample_hull(oscillator_problem())
    with pytest.raises(sims.SimsError):
        sims.admissible_pair(hull, 10 + 5j)


def test_admissible_pair_rejects_hull_points():
    hull = sims.sample_hull(free_problem())
    with pytest.raises(sims.SimsError):
        sims.admissible_pair(hull, hull.vertices[0])


def test_case_diagnostic_free_equation():
    prob = free_problem()
    pair = sims.admissible_pair(sims.sample_hull(prob), -1 + 0j)
    diag = sims.case_diagnostic(prob, -1 + 0j, pair)
    assert diag.suggested_case == sims.CASE_I
    verdicts = {s.label: s.l2_verdict for s in diag.solutions}
    assert verdicts == {"phi": sims.GROWING, "recessive": sims.BOUNDED}


def test_case_diagnostic_example1_family():
    prob = example1_problem()
    pair = sims.admissible_pair(sims.sample_hull(prob), -5 + 0j)
    diag = sims.case_diagnostic(prob, -5 + 0j, pair, atol=1e-8, rtol=1e-8)
    assert diag.suggested_case == sims.CASE_II_III


def test_case_diagnostic_oscillator_family():
    prob = oscillator_problem()
    pair = sims.admissible_pair(sims.sample_hull(prob), -5 + 0j)
    diag = sims.case_diagnostic(prob, -5 + 0j, pair, atol=1e-8, rtol=1e-8)
    assert diag.suggested_case == sims.CASE_I


def test_case_diagnostic_requires_admissible_test_point():
    prob = free_problem()
    pair = sims.admissible_pair(sims.sample_hull(prob), -1 + 0j)
    with pytest.raises(sims.SimsError):
        sims.case_diagnostic(prob, 5 + 0j, pair)


def test_case_diagnostic_requires_three_schedule_points():
    prob = Problem(parse("1"), parse("0"), parse("1"), 0.0, math.inf, 0.0,
                   Dirichlet(), (5.0, 10.0), {})
    pair = sims.admissible_pair(sims.sample_hull(prob), -1 + 0j)
    with pytest.raises(sims.SimsError):
        sims.case_diagnostic(prob, -1 + 0j, pair)


def test_alpha_condition_reported():
    prob = free_problem()
    pair = sims.admissible_pair(sims.sample_hull(prob), -1 + 0j)
    diag = sims.case_diagnostic(prob, -1 + 0j, pair)
    # Dirichlet angle: cos * conj(sin) = 0, condition holds as equality
    assert diag.alpha_condition_ok
