import math

import pytest

from nssl import exactness as xa
from nssl.expr import parse
from nssl.locate import ComplexBox, EigenvalueEstimate
from nssl.problem import Dirichlet, Problem


def est(lam, b_n, mult=1):
    return EigenvalueEstimate(lam, mult, 1e-12, b_n, True)


SCHEDULE = (5.0, 10.0, 15.0, 20.0)
# a converging truncation sequence, one eigenvalue tracked over four points
CONVERGING = [24.21311 + 14.10915j, 24.21334 + 14.11103j,
              24.21333 + 14.11106j, 24.21335 + 14.11108j]


def test_tracking_converging_sequence():
    per_bn = [[est(v, b)] for v, b in zip(CONVERGING, SCHEDULE)]
    tracks = xa.track_eigenvalues(per_bn, SCHEDULE, "M", tau_match=1.0,
                                  tau_conv=1e-6)
    assert len(tracks) == 1
    t = tracks[0]
    assert t.converged
    assert t.limit == CONVERGING[-1]
    assert t.cauchy_gap == abs(CONVERGING[-1] - CONVERGING[-2])


def test_tracking_requires_two_schedule_points():
    with pytest.raises(ValueError):
        xa.track_eigenvalues([[est(1 + 1j, 5.0)]], (5.0,))


def test_tracking_gate_splits_distant_estimates():
    per_bn = [[est(1 + 1j, 5.0)], [est(40 + 3j, 10.0)]]
    tracks = xa.track_eigenvalues(per_bn, (5.0, 10.0), tau_match=0.5)
    assert len(tracks) == 2
    assert not any(t.converged for t in tracks)


def test_tracking_matches_nearest():
    per_bn = [
        [est(10 + 1j, 5.0), est(20 + 1j, 5.0)],
        [est(10.001 + 1j, 10.0), est(20.002 + 1j, 10.0)],
    ]
    tracks = xa.track_eigenvalues(per_bn, (5.0, 10.0), tau_match=1.0,
                                  tau_conv=1e-2)
    assert len(tracks) == 2
    assert all(len(t.entries) == 2 and t.converged for t in tracks)


def make_track(values, family="M", tau_conv=1e-6):
    per_bn = [[est(v, b)] for v, b in zip(values, SCHEDULE)]
    return xa.track_eigenvalues(per_bn, SCHEDULE, family, tau_match=10.0,
                                tau_conv=tau_conv)[0]


def test_classify_flags_coincident_limits():
    # a matched pair agreeing far below the natural separation is suspect
    m = make_track([73.80976 + 74.92149j] * 3 + [73.809759 + 74.921450j])
    l = make_track([73.80976 + 74.92148j] * 3 + [73.809759 + 74.921449j], "L")
    (v,) = xa.classify([m], [l])
    assert v.verdict == xa.SUSPECT
    assert v.pair_distance < 1e-5
    assert v.paired_index == 0


def test_classify_certifies_isolated_limits():
    m = make_track([4.3278454 + 3.1193175j] * 4)
    l = make_track([1.4426265 + 1.0397661j] * 4, "L")
    (v,) = xa.classify([m], [l])
    assert v.verdict == xa.EXACT
    assert v.pair_distance == pytest.approx(
        abs((4.3278454 + 3.1193175j) - (1.4426265 + 1.0397661j)))


def test_classify_with_no_companions():
    m = make_track([5 + 1j] * 4)
    (v,) = xa.classify([m], [])
    assert v.verdict == xa.EXACT


def test_classify_unconverged_is_inconclusive():
    values = [5 + 1j, 9 + 1j, 5 + 1j, 9 + 1j]
    m = make_track(values)
    assert not m.converged
    (v,) = xa.classify([m], [])
    assert v.verdict == xa.INCONCLUSIVE


def test_classify_symmetry():
    m = make_track([7 + 2j] * 4)
    l_near = make_track([7.000005 + 2j] * 4, "L")
    l_far = make_track([9 + 2j] * 4, "L")
    mv = xa.classify([m], [l_near, l_far])
    lv = xa.classify([l_near, l_far], [m])
    assert mv[0].verdict == xa.SUSPECT
    assert lv[0].verdict == xa.SUSPECT
    assert lv[1].verdict == xa.EXACT


def test_verdicts_stable_under_tighter_convergence_gate():
    vals = [CONVERGING[-1]] * 4  # fully settled track
    m = make_track(vals, tau_conv=1e-6)
    m10 = make_track(vals, tau_conv=1e-7)
    v1 = xa.classify([m], [], tau_conv=1e-6)[0].verdict
    v2 = xa.classify([m10], [], tau_conv=1e-7)[0].verdict
    assert v1 == v2 == xa.EXACT


def test_inclusion_monitor_warns_on_drop():
    warnings = xa.inclusion_monitor(None, None, (5.0, 10.0, 15.0),
                                    counts=[4, 4, 3])
    assert len(warnings) == 1
    w = warnings[0]
    assert (w.b_prev, w.b_next, w.count_prev, w.count_next) == (10.0, 15.0, 4, 3)


def test_inclusion_monitor_quiet_when_counts_stable():
    assert xa.inclusion_monitor(None, None, (5.0, 10.0), counts=[3, 3]) == []
    assert xa.inclusion_monitor(None, None, (5.0, 10.0), counts=[0, 0]) == []


def test_boundary_swap_pipeline_on_analytic_spectrum():
    # truncations approaching the right endpoint of a regular problem:
    # eigenvalue families n^2 pi^2 (kept condition) and (n - 1/2)^2 pi^2
    # (swapped condition) are disjoint, so everything is certified
    prob = Problem(parse("1"), parse("0"), parse("1"), 0.0, 1.0, 0.0,
                   Dirichlet(), (1.0 - 1e-7, 1.0 - 1e-8))
    box = ComplexBox(5.0, 45.0, -1.0, 1.0)
    report = xa.run_boundary_swap(prob, box, prob.schedule,
                                  atol=1e-11, rtol=1e-11, tau_conv=1e-5)
    assert len(report.verdicts) == 2
    for v, n in zip(report.verdicts, (1, 2)):
        assert v.verdict == xa.EXACT
        assert abs(v.track.limit - (n * math.pi) ** 2) < 1e-6 * (n * math.pi) ** 2
    # swapped family inside the box: (3 pi / 2)^2 only
    assert len(report.l_tracks) == 1
    assert abs(report.l_tracks[0].limit - (1.5 * math.pi) ** 2) < 1e-4
    assert report.l_verdicts[0].verdict == xa.EXACT
    assert report.warnings == []


def test_boundary_swap_needs_two_truncations():
    prob = Problem(parse("1"), parse("0"), parse("1"), 0.0, 1.0, 0.0,
                   Dirichlet(), (0.99,))
    with pytest.raises(ValueError):
        xa.run_boundary_swap(prob, ComplexBox(5, 45, -1, 1), prob.schedule)


def test_inclusion_monitor_computes_windings():
    prob = Problem(parse("1"), parse("0"), parse("1"), 0.0, 1.0, 0.0,
                   Dirichlet(), (1.0 - 1e-6, 1.0 - 1e-7))
    box = ComplexBox(5.0, 45.0, -1.0, 1.0)
    # two modes at both truncations: constant counts, no warnings
    assert xa.inclusion_monitor(prob, box, prob.schedule) == []
