"""Hot propagation kernel, jitted with numba when available.

The integrator advances k simultaneous solutions of the first-order system

    y' = py / p(x),    (py)' = (q(x) - lam * w(x)) * y

as one flat complex state vector with a shared adaptive mesh and a shared
renormalization scale, using a Dormand-Prince 5(4) embedded pair.

Two bytecode-identical builds of the kernel exist: a numba ``@njit`` build
and a plain-Python fallback.  The active build is chosen at import time;
set ``NSSL_DISABLE_NUMBA=1`` to force the fallback (the fallback is also
selected automatically when numba is not importable).  Both builds stay
accessible for side-by-side timing, see ``benchmarks/bench_kernel.py``.
"""

from __future__ import annotations

import cmath
import math
import os
from typing import Callable, NamedTuple

import numpy as np

_FLAG = os.environ.get("NSSL_DISABLE_NUMBA", "").strip()
if _FLAG not in ("", "0"):
    _nb = None
else:
    try:
        import numba as _nb
    except ImportError:  # pragma: no cover - exercised only without numba
        _nb = None

NUMBA_ENABLED = _nb is not None

# status codes returned by the kernel
OK = 0
STEP_UNDERFLOW = 1
RECORD_FULL = 2
TOO_MANY_STEPS = 3

_MAX_STEPS = 20_000_000
_RENORM_HI = 1e100
_RENORM_LO = 1e-100

# Dormand-Prince 5(4) tableau
_C2, _C3, _C4, _C5 = 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0
_A21 = 1.0 / 5.0
_A31, _A32 = 3.0 / 40.0, 9.0 / 40.0
_A41, _A42, _A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
_A51, _A52, _A53, _A54 = 19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0
_A61, _A62, _A63, _A64, _A65 = (9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0,
                                49.0 / 176.0, -5103.0 / 18656.0)
_B1, _B3, _B4, _B5, _B6 = 35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0
# b - bhat, for the embedded 4th-order error estimate
_E1, _E3, _E4, _E5, _E6, _E7 = (71.0 / 57600.0, -71.0 / 16695.0, 71.0 / 1920.0,
                                -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0)

_EPS = 2.220446049250313e-16


def _propagate_impl(cf, lam, x0, x1, y0, ls0, atol, rtol, record, xs, ys, lss):
    """Advance the state from x0 to x1.  Returns (status, x, y, ls, nrec).

    ``y0`` has an even number of entries (y, py) per solution.  When
    ``record`` is nonzero every accepted step is appended to ``xs``,
    ``ys``, ``lss`` (the initial state included); RECORD_FULL is returned
    when capacity runs out.
    """
    m = y0.shape[0]
    k = m // 2
    y = y0.copy()
    ynew = np.empty(m, np.complex128)
    ytmp = np.empty(m, np.complex128)
    k1 = np.empty(m, np.complex128)
    k2 = np.empty(m, np.complex128)
    k3 = np.empty(m, np.complex128)
    k4 = np.empty(m, np.complex128)
    k5 = np.empty(m, np.complex128)
    k6 = np.empty(m, np.complex128)
    k7 = np.empty(m, np.complex128)

    x = x0
    ls = ls0
    nrec = 0
    if record != 0:
        if nrec >= xs.shape[0]:
            return RECORD_FULL, x, y, ls, nrec
        xs[nrec] = x
        for j in range(m):
            ys[nrec, j] = y[j]
        lss[nrec] = ls
        nrec += 1

    span = abs(x1 - x0)
    if span == 0.0:
        return OK, x, y, ls, nrec
    direction = 1.0 if x1 >= x0 else -1.0

    p, q, w = cf(x)
    c = q - lam * w
    for j in range(k):
        k1[2 * j] = y[2 * j + 1] / p
        k1[2 * j + 1] = c * y[2 * j]

    ymax = 0.0
    fmax = 0.0
    for j in range(m):
        ay = abs(y[j])
        af = abs(k1[j])
        if ay > ymax:
            ymax = ay
        if af > fmax:
            fmax = af
    if fmax > 0.0 and ymax > 0.0:
        h = 0.01 * ymax / fmax
    else:
        h = span / 100.0
    if h > span:
        h = span
    h *= direction

    nsteps = 0
    while (x - x1) * direction < 0.0:
        nsteps += 1
        if nsteps > _MAX_STEPS:
            return TOO_MANY_STEPS, x, y, ls, nrec
        hmin = 16.0 * _EPS * max(abs(x), abs(x1))
        if abs(h) < hmin:
            return STEP_UNDERFLOW, x, y, ls, nrec
        if (x + h - x1) * direction > 0.0:
            h = x1 - x

        # stage 2
        xx = x + _C2 * h
        p, q, w = cf(xx)
        c = q - lam * w
        for j in range(m):
            ytmp[j] = y[j] + h * (_A21 * k1[j])
        for j in range(k):
            k2[2 * j] = ytmp[2 * j + 1] / p
            k2[2 * j + 1] = c * ytmp[2 * j]
        # stage 3
        xx = x + _C3 * h
        p, q, w = cf(xx)
        c = q - lam * w
        for j in range(m):
            ytmp[j] = y[j] + h * (_A31 * k1[j] + _A32 * k2[j])
        for j in range(k):
            k3[2 * j] = ytmp[2 * j + 1] / p
            k3[2 * j + 1] = c * ytmp[2 * j]
        # stage 4
        xx = x + _C4 * h
        p, q, w = cf(xx)
        c = q - lam * w
        for j in range(m):
            ytmp[j] = y[j] + h * (_A41 * k1[j] + _A42 * k2[j] + _A43 * k3[j])
        for j in range(k):
            k4[2 * j] = ytmp[2 * j + 1] / p
            k4[2 * j + 1] = c * ytmp[2 * j]
        # stage 5
        xx = x + _C5 * h
        p, q, w = cf(xx)
        c = q - lam * w
        for j in range(m):
            ytmp[j] = y[j] + h * (_A51 * k1[j] + _A52 * k2[j] + _A53 * k3[j] + _A54 * k4[j])
        for j in range(k):
            k5[2 * j] = ytmp[2 * j + 1] / p
            k5[2 * j + 1] = c * ytmp[2 * j]
        # stage 6
        xx = x + h
        p, q, w = cf(xx)
        c = q - lam * w
        for j in range(m):
            ytmp[j] = y[j] + h * (_A61 * k1[j] + _A62 * k2[j] + _A63 * k3[j]
                                  + _A64 * k4[j] + _A65 * k5[j])
        for j in range(k):
            k6[2 * j] = ytmp[2 * j + 1] / p
            k6[2 * j + 1] = c * ytmp[2 * j]
        # 5th-order solution; stage 7 is FSAL
        for j in range(m):
            ynew[j] = y[j] + h * (_B1 * k1[j] + _B3 * k3[j] + _B4 * k4[j]
                                  + _B5 * k5[j] + _B6 * k6[j])
        for j in range(k):
            k7[2 * j] = ynew[2 * j + 1] / p
            k7[2 * j + 1] = c * ynew[2 * j]

        ymax = 0.0
        for j in range(m):
            ay = abs(y[j])
            if ay > ymax:
                ymax = ay
            ay = abs(ynew[j])
            if ay > ymax:
                ymax = ay
        errsum = 0.0
        for j in range(m):
            ej = h * (_E1 * k1[j] + _E3 * k3[j] + _E4 * k4[j]
                      + _E5 * k5[j] + _E6 * k6[j] + _E7 * k7[j])
            sc = atol * ymax + rtol * max(abs(y[j]), abs(ynew[j]))
            if sc == 0.0:
                sc = atol * ymax + rtol
            if sc == 0.0:
                sc = 1e-300
            errsum += (abs(ej) / sc) ** 2
        err = math.sqrt(errsum / m)
        if not err == err:  # NaN from a blown-up stage: force a rejection
            err = 10.0

        if err <= 1.0:
            x = x + h
            for j in range(m):
                y[j] = ynew[j]
                k1[j] = k7[j]
            mag = 0.0
            for j in range(m):
                ay = abs(y[j])
                if ay > mag:
                    mag = ay
            if mag > _RENORM_HI or (0.0 < mag < _RENORM_LO):
                ls += math.log(mag)
                inv = 1.0 / mag
                for j in range(m):
                    y[j] *= inv
                    k1[j] *= inv
            if record != 0:
                if nrec >= xs.shape[0]:
                    return RECORD_FULL, x, y, ls, nrec
                xs[nrec] = x
                for j in range(m):
                    ys[nrec, j] = y[j]
                lss[nrec] = ls
                nrec += 1

        if err == 0.0:
            fac = 5.0
        else:
            fac = 0.9 * err ** -0.2
            if fac > 5.0:
                fac = 5.0
            elif fac < 0.2:
                fac = 0.2
        h *= fac
        if abs(h) > span:
            h = span * direction

    return OK, x, y, ls, nrec


if NUMBA_ENABLED:
    _propagate_numba = _nb.njit(_propagate_impl)
else:
    _propagate_numba = None

#: kernel builds available for benchmarking; "numba" is None when unavailable
KERNELS = {"python": _propagate_impl, "numba": _propagate_numba}

_ACTIVE = _propagate_numba if NUMBA_ENABLED else _propagate_impl


class CoeffFns(NamedTuple):
    """Coefficient triple x -> (p, q, w), in both builds."""

    python: Callable
    jitted: Callable | None


_COEFF_CACHE: dict[tuple[str, str, str], CoeffFns] = {}


def compile_coeffs(p_src: str, q_src: str, w_src: str) -> CoeffFns:
    """Build (and memoize) the coefficient triple from Python source texts.

    Each source is an expression over the complex variable ``z`` that may
    call ``cmath`` functions; the generated function takes the real mesh
    coordinate and returns the complex (p, q, w) values there.
    """
    key = (p_src, q_src, w_src)
    hit = _COEFF_CACHE.get(key)
    if hit is not None:
        return hit
    text = (
        "def _coeffs(x):\n"
        "    z = complex(x)\n"
        f"    return ({p_src}), ({q_src}), ({w_src})\n"
    )
    ns = {"cmath": cmath}
    exec(text, ns)
    py = ns["_coeffs"]
    jit = _nb.njit(py) if NUMBA_ENABLED else None
    fns = CoeffFns(py, jit)
    _COEFF_CACHE[key] = fns
    return fns


class IntegrationError(RuntimeError):
    """Propagation failed; ``x`` is the mesh position of the failure."""

    def __init__(self, message: str, x: float):
        super().__init__(f"{message} (x = {x!r})")
        self.x = x


def propagate_raw(coeffs: CoeffFns, lam, x0, x1, y0, ls0, atol, rtol,
                  record=False, use_numba=None):
    """Run the kernel; returns (x, y, ls, mesh) where mesh is None or
    (xs, ys, lss) arrays trimmed to the recorded length."""
    if use_numba is None:
        use_numba = NUMBA_ENABLED
    if use_numba and NUMBA_ENABLED:
        kern, cf = _propagate_numba, coeffs.jitted
    else:
        kern, cf = _propagate_impl, coeffs.python
    y0 = np.asarray(y0, dtype=np.complex128)
    cap = 16384 if record else 1
    while True:
        xs = np.empty(cap, np.float64)
        ys = np.empty((cap, y0.shape[0]), np.complex128)
        lss = np.empty(cap, np.float64)
        status, x, y, ls, nrec = kern(cf, complex(lam), float(x0), float(x1),
                                      y0, float(ls0), float(atol), float(rtol),
                                      1 if record else 0, xs, ys, lss)
        if status == RECORD_FULL:
            cap *= 4
            continue
        if status == STEP_UNDERFLOW:
            raise IntegrationError("step size underflow", x)
        if status == TOO_MANY_STEPS:
            raise IntegrationError("step budget exhausted", x)
        mesh = (xs[:nrec].copy(), ys[:nrec].copy(), lss[:nrec].copy()) if record else None
        return x, y, ls, mesh


def warmup():
    """Force kernel compilation on a trivial problem (no-op without numba)."""
    fns = compile_coeffs("(1+0j)", "(0j)", "(1+0j)")
    propagate_raw(fns, 1.0 + 0j, 0.0, 0.5, np.array([0j, 1 + 0j]), 0.0, 1e-8, 1e-8)
    propagate_raw(fns, 1.0 + 0j, 0.0, 0.5, np.array([0j, 1 + 0j, 1 + 0j, 0j]), 0.0,
                  1e-8, 1e-8, record=True)
