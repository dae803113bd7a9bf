import math

import mpmath
import numpy as np
import pytest
from scipy import special
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from friedrichs import Box, LevelPair, SolverConfig, count_zeros, find_zeros, newton_refine, preset, track
from friedrichs import coulomb as C
from friedrichs import oscillator as O
from friedrichs.errors import BoundaryZeroError, NotFoundError
from friedrichs.models import Problem
from friedrichs.solver.quadrature import CauchyTransform, cauchy_integral
from friedrichs.solver.roots import winding_number

# ---------------------------------------------------------------- quadrature


def _h(y):
    return y * y * np.exp(-y)


def _mp_cauchy(zeta, slope):
    z = mpmath.mpc(zeta.real, zeta.imag)
    f = lambda y: y * y * mpmath.exp(-y) / (z - slope * y)  # noqa: E731
    y0 = max(zeta.real / slope, 0.0)
    pts = [0, y0, y0 + 1, 40, mpmath.inf] if y0 > 0 else [0, 1, 40, mpmath.inf]
    with mpmath.workdps(30):
        return complex(mpmath.quad(f, pts))


@pytest.mark.parametrize("zeta", [2.0 + 1.0j, 0.7 - 0.5j, 1.3 - 0.02j, -1.0 - 0.3j, 3.0 - 2.0j, 0.5 - 1e-4j])
def test_cauchy_integral_matches_mpmath(zeta):
    ref = _mp_cauchy(zeta, 1.5)
    got = cauchy_integral(_h, zeta, 1.5, dh=lambda y: (2 * y - y * y) * np.exp(-y), y_max=30.0)
    assert abs(got - ref) <= 1e-10 * abs(ref)
    ct = CauchyTransform(_h, 1.5, 40.0, tail=False, dh=lambda y: (2 * y - y * y) * np.exp(-y))
    assert abs(complex(ct(np.array([zeta]))[0]) - ref) <= 1e-10 * abs(ref)


def test_cauchy_integral_zero_density():
    assert cauchy_integral(lambda y: 0.0 * y, 0.4 - 0.01j, 1.0) == 0


def test_cauchy_integral_exponential_closed_form():
    # int e^{-y} / (-1 - y) dy = -e E1(1)
    ref = -math.e * special.exp1(1.0)
    assert abs(cauchy_integral(lambda y: np.exp(-y), -1.0, 1.0) - ref) <= 1e-10 * abs(ref)


def test_cauchy_integral_far_field():
    zeta = 1e6 * (1 - 1j) / math.sqrt(2)
    got = cauchy_integral(_h, zeta, 1.5)
    assert abs(got * zeta - 2.0) <= 1e-4 * 2.0  # int y^2 e^-y = 2


def test_cauchy_integral_rejects_zero():
    with pytest.raises(ZeroDivisionError):
        cauchy_integral(_h, 0.0, 1.0)


# ---------------------------------------------------------------- roots


def test_count_simple_zero():
    c = 0.3 - 0.2j
    assert count_zeros(lambda z: z - c, Box(0, 1, -1, 0.5)) == 1


def test_count_double_zero():
    c = 0.3 - 0.2j
    assert count_zeros(lambda z: (z - c) ** 2, Box(0, 1, -1, 0.5)) == 2


def test_count_with_declared_pole():
    f = lambda z: (z - 0.2) / (z + 0.5j) ** 2  # noqa: E731
    assert count_zeros(f, Box(-1, 1, -1, 1), poles=[(-0.5j, 2)]) == 1


def test_zero_on_boundary_detected():
    with pytest.raises(BoundaryZeroError):
        count_zeros(lambda z: z - 0.5, Box(0.5, 1, -1, 1))


def test_newton_reference():
    z, r = newton_refine(lambda z: z * z + 1, lambda z: 2 * z, -0.9j, tol=1e-15)
    assert abs(z + 1j) < 1e-14


def test_newton_failure_reported():
    with pytest.raises(NotFoundError):
        newton_refine(lambda z: np.exp(z), lambda z: np.exp(z), 0.0, max_iter=5)


@settings(max_examples=30, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(
    st.lists(st.tuples(st.floats(-1, 1), st.floats(-1, 1)), min_size=1, max_size=6),
    st.floats(-0.9, 0.9),
    st.floats(-0.9, 0.9),
)
def test_polynomial_zero_enumeration(roots, cx, cy):
    roots = [complex(a, b) for a, b in roots]
    box = Box(cx - 0.5, cx + 0.5, cy - 0.5, cy + 0.5)
    for r in roots:
        assume(min(abs(r.real - box.re0), abs(r.real - box.re1), abs(r.imag - box.im0), abs(r.imag - box.im1)) > 1e-3)
    for i, a in enumerate(roots):
        for b in roots[:i]:
            assume(abs(a - b) > 1e-3)

    def f(z):
        z = np.asarray(z, dtype=complex)
        out = np.ones_like(z)
        for r in roots:
            out = out * (z - r)
        return out

    def df(z):
        z = np.asarray(z, dtype=complex)
        tot = np.zeros_like(z)
        for i in range(len(roots)):
            term = np.ones_like(z)
            for j, r in enumerate(roots):
                if j != i:
                    term = term * (z - r)
            tot = tot + term
        return tot

    inside = [r for r in roots if box.contains(r)]
    zs = find_zeros(f, box, SolverConfig(newton_tol=1e-12), df=df)
    assert zs.counted == len(inside) == len(zs)
    for r in inside:
        assert min(abs(z - r) for z in zs.zeros) < 1e-8


# ---------------------------------------------------------------- resonance functions


@pytest.fixture(scope="module")
def f21():
    return C.coulomb_resolvent(LevelPair(2, 1), 1.0)


def _random_boxes(seed, n, re=(-1.2, 3.0), im=(-5.0, -0.05)):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        x = np.sort(rng.uniform(*re, 2))
        y = np.sort(rng.uniform(*im, 2))
        if x[1] - x[0] < 0.05 or y[1] - y[0] < 0.05:
            x[1] += 0.1
            y[1] = min(y[1] + 0.1, -0.01)
        out.append(Box(float(x[0]), float(x[1]), float(y[0]), float(y[1])))
    return out


def test_count_matches_enumeration_on_random_boxes(f21):
    checked = 0
    for box in _random_boxes(7, 50):
        try:
            n = count_zeros(f21, box, f21.poles, df=f21.derivative)
        except BoundaryZeroError:
            continue
        zs = find_zeros(f21, box, SolverConfig(), df=f21.derivative, poles=f21.poles)
        assert len(zs) == n == zs.counted, box
        assert not zs.flagged
        for z in zs:
            assert box.contains(z) and abs(complex(f21(z))) < 1e-10
        checked += 1
    assert checked >= 45


def test_box_split_additivity(f21):
    rng = np.random.default_rng(11)
    for box in _random_boxes(3, 15):
        frac = float(rng.uniform(0.2, 0.8))
        if rng.uniform() < 0.5:
            m = box.re0 + frac * box.width
            parts = [Box(box.re0, m, box.im0, box.im1), Box(m, box.re1, box.im0, box.im1)]
        else:
            m = box.im0 + frac * box.height
            parts = [Box(box.re0, box.re1, box.im0, m), Box(box.re0, box.re1, m, box.im1)]
        try:
            whole = count_zeros(f21, box, f21.poles, df=f21.derivative)
            split = sum(count_zeros(f21, p, f21.poles, df=f21.derivative) for p in parts)
        except BoundaryZeroError:
            continue
        assert whole == split


def test_residual_at_tighter_quadrature():
    p = LevelPair(2, 1)
    f = C.coulomb_resolvent(p, 1.0)
    zs = find_zeros(f, C.default_box(p, 1.0), SolverConfig(), df=f.derivative, poles=f.poles)
    tight = C.coulomb_resolvent(p, 1.0, 1e-15)
    for z in zs:
        assert abs(complex(tight(z))) < SolverConfig().newton_tol


DERIVATIVE_CASES = {
    "c21": lambda: C.coulomb_resolvent(LevelPair(2, 1), 1.0),
    "c43": lambda: C.coulomb_resolvent(LevelPair(4, 3), 0.5),
    "o21": lambda: O.oscillator_resolvent(LevelPair(2, 1), 1.0, preset("paper-osc").mu),
    "o50": lambda: O.oscillator_resolvent(LevelPair(5, 0), 0.8, preset("paper-osc").mu),
}


@pytest.mark.parametrize("make", list(DERIVATIVE_CASES.values()), ids=list(DERIVATIVE_CASES))
def test_derivative_against_finite_differences(make):
    f = make()
    rng = np.random.default_rng(5)
    pts = rng.uniform(0.05, 2.5, 10) - 1j * rng.uniform(0.05, 1.5, 10)
    h = 1e-6
    for z in pts:
        fd = (complex(f(z + h)) - complex(f(z - h))) / (2 * h)
        an = complex(f.derivative(z))
        assert abs(an - fd) <= 1e-6 * max(abs(fd), 1.0)


@pytest.mark.parametrize("pair", [(2, 1), (3, 1), (4, 3)])
@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
def test_first_sheet_has_no_complex_zeros(pair, alpha):
    f = C.coulomb_resolvent(LevelPair(*pair), alpha)
    assert winding_number(f.first_sheet, Box(-3, 3, 0.01, 3)) == 0


@pytest.mark.parametrize("pair", [(1, 0), (3, 1)])
def test_first_sheet_no_zeros_oscillator(pair):
    f = O.oscillator_resolvent(LevelPair(*pair), 1.0, preset("paper-osc").mu)
    assert winding_number(f.first_sheet, Box(-3, 3, 0.01, 3)) == 0


# ---------------------------------------------------------------- continuation


def test_sweep_bitwise_deterministic():
    prob = Problem(preset("paper-coulomb"), LevelPair(2, 1))
    grid = np.linspace(1.0, 2.0, 6)
    a = track(prob.resolvent, 0.4927 - 2.7533j, grid)
    b = track(prob.resolvent, 0.4927 - 2.7533j, grid)
    assert a.alphas == b.alphas and a.zetas == b.zetas and a.residuals == b.residuals


def test_track_rejects_bad_grid():
    prob = Problem(preset("paper-coulomb"), LevelPair(2, 1))
    with pytest.raises(ValueError):
        track(prob.resolvent, 1.0, [0.5, 0.7, 0.6])
    with pytest.raises(ValueError):
        track(prob.resolvent, 1.0, [])


def test_weak_coupling_limit_is_unperturbed():
    prob = Problem(preset("paper-coulomb"), LevelPair(3, 2))
    tr = prob.standard_branch(1e-3)
    assert abs(tr.final - 1) < 1e-3
