import cmath
import math

import numpy as np
import pytest

from nssl import locate as lc
from nssl.expr import parse
from nssl.problem import Dirichlet, Problem


def poly(*roots):
    def f(z):
        v = 1 + 0j
        for r in roots:
            v *= z - r
        return lc.ScaledComplex(v, 0.0)
    return f


def laplacian():
    return Problem(parse("1"), parse("0"), parse("1"), 0.0, 2.0, 0.0,
                   Dirichlet(), (1.0,))


def test_winding_simple_zero():
    assert lc.winding_number(poly(1 + 1j), lc.ComplexBox(0, 2, 0, 2)) == 1


def test_winding_with_orders():
    f = poly(1, 1, -1)  # (z-1)^2 (z+1)
    assert lc.winding_number(f, lc.ComplexBox(0, 2, -1, 1)) == 2
    assert lc.winding_number(f, lc.ComplexBox(-2, 2, -1, 1)) == 3
    assert lc.winding_number(f, lc.ComplexBox(3, 4, 3, 4)) == 0


def test_winding_of_miss_distance():
    prob = laplacian()
    from nssl.mfunc import compute_miss_distance

    def f(lam):
        md = compute_miss_distance(prob, 1.0, lam)
        return lc.ScaledComplex(md.value, md.log_scale)

    assert lc.winding_number(f, lc.ComplexBox(5, 45, -1, 1)) == 2


def test_winding_invariant_under_constant_rescale():
    rng = np.random.default_rng(2)
    box = lc.ComplexBox(-1, 3, -2, 2)
    f = poly(1 + 1j, -0.5 - 0.5j, 2 - 1j)
    w0 = lc.winding_number(f, box)
    for _ in range(5):
        c = complex(rng.normal(), rng.normal()) * 10.0 ** float(rng.integers(-3, 4))
        if c == 0:
            continue
        g = lambda z: lc.ScaledComplex(c * f(z).value, 0.0)
        assert lc.winding_number(g, box) == w0


def test_winding_detects_boundary_zero():
    with pytest.raises(lc.NearZeroOnContour):
        lc.winding_number(poly(1.0), lc.ComplexBox(0, 1, -1, 1))


def test_winding_randomized_polynomial_oracle():
    rng = np.random.default_rng(42)
    box = lc.ComplexBox(-2, 2, -2, 2)
    for _ in range(100):
        z1 = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
        z2 = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
        m1, m2 = rng.integers(1, 4), rng.integers(1, 4)
        if min(abs(z1.real - 2), abs(z1.real + 2), abs(z1.imag - 2),
               abs(z1.imag + 2)) < 1e-3 or \
           min(abs(z2.real - 2), abs(z2.real + 2), abs(z2.imag - 2),
               abs(z2.imag + 2)) < 1e-3:
            continue
        expect = m1 * box.contains(z1) + m2 * box.contains(z2)
        f = poly(*([z1] * m1 + [z2] * m2))
        assert lc.winding_number(f, box) == expect


def test_find_eigenvalues_dirichlet_laplacian():
    ests = lc.find_eigenvalues(laplacian(), 1.0, lc.ComplexBox(5, 45, -1, 1))
    assert [e.multiplicity for e in ests] == [1, 1]
    for e, n in zip(ests, (1, 2)):
        assert e.refined
        assert abs(e.lam - (n * math.pi) ** 2) < 1e-8 * (n * math.pi) ** 2


def test_find_eigenvalues_first_five_modes():
    ests = lc.find_eigenvalues(laplacian(), 1.0, lc.ComplexBox(5, 260, -1, 1))
    assert len(ests) == 5
    for e, n in zip(ests, range(1, 6)):
        assert abs(e.lam - (n * math.pi) ** 2) < 1e-8 * (n * math.pi) ** 2


def test_find_eigenvalues_empty_box():
    assert lc.find_eigenvalues(laplacian(), 1.0, lc.ComplexBox(50, 70, 2, 9)) == []


def test_multiplicity_oracle():
    z1, z2 = 0.5 + 0.5j, -0.75 - 0.25j
    f = poly(z1, z1, z2)
    box = lc.ComplexBox(-2, 2, -2, 2)
    ests = lc.find_eigenvalues(None, 0.0, box, f=f)
    assert sorted(e.multiplicity for e in ests) == [1, 2]
    for e in ests:
        target = z1 if e.multiplicity == 2 else z2
        tol = 1e-8 if e.refined else lc.LocateOptions().isolation_rel * box.diagonal
        assert abs(e.lam - target) <= tol
    simple = [e for e in ests if e.multiplicity == 1][0]
    assert simple.refined
    assert abs(simple.lam - z2) < 1e-10


def test_find_handles_zero_on_original_contour():
    # a root exactly on the box edge: deterministic outward dilation retries
    f = poly(1.0, 3 + 1j)
    ests = lc.find_eigenvalues(None, 0.0, lc.ComplexBox(0, 1, -1, 1), f=f)
    assert len(ests) == 1
    assert abs(ests[0].lam - 1.0) < 1e-10


def test_estimates_sorted_by_modulus_then_phase():
    f = poly(2 + 0.1j, -1 + 0.5j, 0.3 - 0.4j)
    ests = lc.find_eigenvalues(None, 0.0, lc.ComplexBox(-3, 3, -3, 3), f=f)
    keys = [(abs(e.lam), cmath.phase(e.lam)) for e in ests]
    assert keys == sorted(keys)


def test_box_validation():
    with pytest.raises(ValueError):
        lc.ComplexBox(1, 1, 0, 2)


def test_unresolvable_close_pair_reported_as_cluster():
    # two simple roots closer than the isolation diameter come back as one
    # multiplicity-2 cluster estimate, unrefined, near the true location
    z = 0.3 + 0.2j
    f = poly(z, z + 1e-5)
    box = lc.ComplexBox(-2, 2, -2, 2)
    ests = lc.find_eigenvalues(None, 0.0, box, f=f)
    assert len(ests) == 1
    e = ests[0]
    assert e.multiplicity == 2
    assert not e.refined
    assert abs(e.lam - z) < lc.LocateOptions().isolation_rel * box.diagonal
