"""Special-function layer against independent oracles.

Oracles used here, none of which share code with the implementation:
 - associated Laguerre polynomials from the explicit binomial series,
 - displacement matrix elements from a dense matrix exponential,
 - squeezed-coherent coefficients against the three-term recurrence implied
   by the pulled-back annihilator, plus closed forms for |c0|^2 and |c1|^2.
"""

import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given
from hypothesis import strategies as st

from fermibag.errors import CutoffTooSmallError
from fermibag.specfun import (
    COEFFICIENT_TAIL_TOL,
    CoherentParams,
    SqueezeParams,
    displacement_element,
    laguerre,
    sinc_u,
    squeezed_coherent_coefficients,
    wrap_phase,
)

# ---------------------------------------------------------------------------
# oracles


def laguerre_series(n: int, k: int, x: float) -> float:
    """L_n^k(x) = sum_i (-1)^i C(n+k, n-i) x^i / i!  (explicit series).

    Evaluated in exact rational arithmetic: the alternating float sum loses
    ~8 digits by n = 25, the quantity the recurrence is supposed to beat."""
    xs = Fraction(x)
    total = Fraction(0)
    for i in range(n + 1):
        term = Fraction(math.comb(n + k, n - i), math.factorial(i)) * xs**i
        total += -term if i % 2 else term
    return float(total)


def displacement_dense(l: int, j: int, lam: complex, dim: int = 160) -> complex:
    """<l|exp(lam b+ - lam* b)|j> from a dense truncated matrix exponential."""
    b = np.diag(np.sqrt(np.arange(1.0, dim)), k=1).astype(complex)
    u = scipy.linalg.expm(lam * b.conj().T - np.conj(lam) * b)
    return complex(u[l, j])


def sc_closed_c0_sq(beta_abs: float, theta: float, r: float, phi: float) -> float:
    return math.exp(-beta_abs**2 * (1.0 + math.cos(2 * theta - phi) * math.tanh(r))) / math.cosh(r)


def sc_closed_c1_sq(beta_abs: float, theta: float, r: float, phi: float) -> float:
    beta = beta_abs * cmath.exp(1j * theta)
    gamma = beta * math.cosh(r) + beta.conjugate() * cmath.exp(1j * phi) * math.sinh(r)
    return abs(gamma) ** 2 * sc_closed_c0_sq(beta_abs, theta, r, phi) / math.cosh(r) ** 2


# ---------------------------------------------------------------------------
# laguerre


def test_laguerre_matches_series():
    for n in (0, 1, 2, 3, 5, 8, 12, 25):
        for k in (0, 1, 3, 7):
            for x in (0.0, 0.3, 1.7, 6.1):
                ref = laguerre_series(n, k, x)
                got = laguerre(n, k, x)
                assert got == pytest.approx(ref, rel=1e-9, abs=1e-9)


def test_laguerre_validation():
    with pytest.raises(ValueError):
        laguerre(-1, 0, 1.0)
    with pytest.raises(ValueError):
        laguerre(2, -1, 1.0)
    with pytest.raises(ValueError):
        laguerre(2, 0, math.inf)


# ---------------------------------------------------------------------------
# phases and parameter containers


def test_wrap_phase_reference_points():
    assert wrap_phase(0.0) == 0.0
    assert wrap_phase(math.pi) == math.pi
    assert wrap_phase(-math.pi) == math.pi
    assert wrap_phase(3 * math.pi) == pytest.approx(math.pi)
    with pytest.raises(ValueError):
        wrap_phase(math.nan)


@given(st.floats(-1e6, 1e6))
def test_wrap_phase_is_equivalent_angle(phi):
    w = wrap_phase(phi)
    assert -math.pi < w <= math.pi
    assert cmath.exp(1j * w) == pytest.approx(cmath.exp(1j * phi), abs=1e-8)


def test_param_containers():
    c = CoherentParams.from_complex(0.3 - 0.4j)
    assert c.value == pytest.approx(0.3 - 0.4j, rel=1e-15)
    assert CoherentParams.from_complex(0j) == CoherentParams(0.0, 0.0)
    s = SqueezeParams(0.7, 3 * math.pi)  # phase wraps on construction
    assert s.phi == pytest.approx(math.pi)
    with pytest.raises(ValueError):
        CoherentParams(-0.1)
    with pytest.raises(ValueError):
        SqueezeParams(-0.5)


# ---------------------------------------------------------------------------
# displacement elements


def test_displacement_matches_dense_expm():
    lams = (0.3, -1.1 + 0.7j, 3j, 2.2 - 1.9j)
    idx = (0, 1, 2, 3, 5, 8, 13, 21, 30)
    for lam in lams:
        for l in idx:
            for j in idx:
                ref = displacement_dense(l, j, lam)
                assert displacement_element(l, j, lam) == pytest.approx(ref, abs=1e-9)


def test_displacement_identity_at_zero():
    for l in range(4):
        for j in range(4):
            want = 1.0 if l == j else 0.0
            assert displacement_element(l, j, 0.0) == want


@given(
    st.integers(0, 6),
    st.complex_numbers(max_magnitude=2.0, allow_nan=False, allow_infinity=False),
)
def test_displacement_row_unitarity(l, lam):
    total = sum(abs(displacement_element(l, j, lam)) ** 2 for j in range(80))
    assert total == pytest.approx(1.0, abs=1e-8)


@given(
    st.integers(0, 12),
    st.integers(0, 12),
    st.complex_numbers(max_magnitude=2.5, allow_nan=False, allow_infinity=False),
)
def test_displacement_adjoint_relation(l, j, lam):
    # D(lam)^dag = D(-lam), so <l|D(lam)|j> = conj(<j|D(-lam)|l>)
    a = displacement_element(l, j, lam)
    b = displacement_element(j, l, -lam)
    assert a == pytest.approx(b.conjugate(), rel=1e-12, abs=1e-13)


def test_displacement_validation():
    with pytest.raises(ValueError):
        displacement_element(-1, 0, 0.1)
    with pytest.raises(ValueError):
        displacement_element(0, 0, complex(math.inf, 0))


# ---------------------------------------------------------------------------
# squeezed-coherent coefficients


def test_sc_reduces_to_coherent():
    coh = CoherentParams(0.7, 0.4)
    c = squeezed_coherent_coefficients(coh, SqueezeParams(0.0), 12)
    beta = coh.value
    for n in range(13):
        ref = math.exp(-abs(beta) ** 2 / 2) * beta**n / math.sqrt(math.factorial(n))
        assert c[n] == pytest.approx(ref, rel=1e-12, abs=1e-14)


def test_sc_squeezed_vacuum_structure():
    r, phi = 0.9, 1.3
    c = squeezed_coherent_coefficients(CoherentParams(0.0), SqueezeParams(r, phi), 15)
    th = math.tanh(r)
    for m in range(8):
        # odd levels vanish; even levels follow the pair-expansion closed form
        if 2 * m + 1 <= 15:
            assert abs(c[2 * m + 1]) <= 1e-13
        ref = (
            (-cmath.exp(1j * phi) * th) ** m
            * math.sqrt(math.factorial(2 * m))
            / (2**m * math.factorial(m) * math.sqrt(math.cosh(r)))
        )
        assert c[2 * m] == pytest.approx(ref, rel=1e-10, abs=1e-12)


def test_sc_normalized():
    c = squeezed_coherent_coefficients(CoherentParams(1.3, 0.9), SqueezeParams(1.0, 2.0), 80)
    assert float(np.sum(np.abs(c) ** 2)) == pytest.approx(1.0, abs=1e-9)


@given(
    st.floats(0.0, 1.8),
    st.floats(-math.pi, math.pi),
    st.floats(0.0, 1.3),
    st.floats(-math.pi, math.pi),
)
def test_sc_annihilator_recurrence(beta_abs, theta, r, phi):
    # mu sqrt(n+1) c_{n+1} + nu sqrt(n) c_{n-1} = (mu beta + nu beta*) c_n
    # with mu = cosh r, nu = e^{i phi} sinh r  (pulled-back annihilator)
    coh, sq = CoherentParams(beta_abs, theta), SqueezeParams(r, phi)
    c = squeezed_coherent_coefficients(coh, sq, 20)
    beta = coh.value
    mu, nu = math.cosh(r), cmath.exp(1j * phi) * math.sinh(r)
    drift = mu * beta + nu * beta.conjugate()
    assert mu * c[1] - drift * c[0] == pytest.approx(0, abs=1e-9)
    for n in range(1, 19):
        res = mu * math.sqrt(n + 1) * c[n + 1] + nu * math.sqrt(n) * c[n - 1] - drift * c[n]
        assert res == pytest.approx(0, abs=1e-9)


@given(
    st.floats(0.0, 2.0),
    st.floats(-math.pi, math.pi),
    st.floats(0.0, 1.5),
    st.floats(-math.pi, math.pi),
)
def test_sc_leading_coefficients_closed_form(beta_abs, theta, r, phi):
    c = squeezed_coherent_coefficients(CoherentParams(beta_abs, theta), SqueezeParams(r, phi), 1)
    assert abs(c[0]) ** 2 == pytest.approx(sc_closed_c0_sq(beta_abs, theta, r, phi), abs=1e-10)
    assert abs(c[1]) ** 2 == pytest.approx(sc_closed_c1_sq(beta_abs, theta, r, phi), abs=1e-10)


def test_sc_rejects_unrepresentable_state():
    # tanh(6)^2 per pair decays too slowly to fit under the internal ceiling
    with pytest.raises(CutoffTooSmallError):
        squeezed_coherent_coefficients(CoherentParams(0.0), SqueezeParams(6.0), 5)
    assert COEFFICIENT_TAIL_TOL == 1e-10


def test_sc_validation():
    with pytest.raises(ValueError):
        squeezed_coherent_coefficients(CoherentParams(0.5), SqueezeParams(0.1), -1)


# ---------------------------------------------------------------------------
# sinc


def test_sinc_u_values():
    assert sinc_u(0.0) == 1.0
    for x in (0.1, 1.0, math.pi, -2.7):
        assert sinc_u(x) == pytest.approx(math.sin(x) / x, rel=1e-14)


@given(st.floats(-20.0, 20.0), st.floats(0.01, 10.0))
def test_sinc_u_phase_integral_identity(a, t):
    # t sinc(a t / 2) e^{i a t / 2} must equal the integral of e^{i a t'} on [0, t]
    lhs = t * sinc_u(0.5 * a * t) * cmath.exp(0.5j * a * t)
    rhs = (cmath.exp(1j * a * t) - 1.0) / (1j * a) if a != 0 else complex(t)
    assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-12)
