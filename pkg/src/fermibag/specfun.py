"""Special functions and state-expansion coefficients for the analytic layer.

Associated Laguerre polynomials, displacement-operator matrix elements in the
Fock basis, and the Fock expansion of squeezed-coherent states D(beta)S(zeta)|0>
with S(zeta) = exp[(zeta* b^2 - zeta b^dag^2)/2].  All quantities are
dimensionless; complex values are plain Python/numpy complex scalars.

Everything here is pure and reentrant; sweep workers may call concurrently.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import expm_multiply

from .errors import CutoffTooSmallError

__all__ = [
    "CoherentParams",
    "SqueezeParams",
    "wrap_phase",
    "laguerre",
    "displacement_element",
    "squeezed_coherent_coefficients",
    "sinc_u",
]

# Norm allowed to leak past the internal Fock cutoff when expanding
# squeezed-coherent states.
COEFFICIENT_TAIL_TOL = 1e-10

_TWO_PI = 2.0 * math.pi


def wrap_phase(phi: float) -> float:
    """Reduce an angle to the interval (-pi, pi]."""
    if not math.isfinite(phi):
        raise ValueError("phase must be finite")
    r = math.remainder(phi, _TWO_PI)
    if r <= -math.pi:
        r += _TWO_PI
    return r


@dataclass(frozen=True)
class CoherentParams:
    """Polar form of a coherent amplitude beta = beta_abs * exp(i*theta)."""

    beta_abs: float
    theta: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.beta_abs) and self.beta_abs >= 0.0):
            raise ValueError("beta_abs must be finite and >= 0")
        object.__setattr__(self, "theta", wrap_phase(self.theta))

    @classmethod
    def from_complex(cls, beta: complex) -> "CoherentParams":
        return cls(abs(beta), cmath.phase(beta)) if beta != 0 else cls(0.0, 0.0)

    @property
    def value(self) -> complex:
        return self.beta_abs * cmath.exp(1j * self.theta)


@dataclass(frozen=True)
class SqueezeParams:
    """Polar form of a squeeze parameter zeta = r * exp(i*phi)."""

    r: float
    phi: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.r) and self.r >= 0.0):
            raise ValueError("r must be finite and >= 0")
        object.__setattr__(self, "phi", wrap_phase(self.phi))

    @property
    def value(self) -> complex:
        return self.r * cmath.exp(1j * self.phi)


def laguerre(n: int, k: int, x: float) -> float:
    """Associated Laguerre polynomial L_n^k(x) by the three-term recurrence.

    The upward recurrence in n is numerically stable for k >= 0.
    """
    if n < 0 or k < 0:
        raise ValueError("laguerre requires n >= 0 and k >= 0")
    if not math.isfinite(x):
        raise ValueError("x must be finite")
    if n == 0:
        return 1.0
    prev = 1.0
    cur = 1.0 + k - x
    for i in range(1, n):
        prev, cur = cur, ((2 * i + 1 + k - x) * cur - (i + k) * prev) / (i + 1)
    return cur


def displacement_element(l: int, j: int, lam: complex) -> complex:
    """Fock matrix element <l| exp(lam b^dag - lam* b) |j>.

    For l >= j this is sqrt(j!/l!) lam^(l-j) e^(-|lam|^2/2) L_j^(l-j)(|lam|^2);
    for j >= l the conjugate-reflected branch applies.  The factorial ratio is
    carried in log space so indices of a few hundred stay finite.
    """
    if l < 0 or j < 0:
        raise ValueError("displacement_element requires l >= 0 and j >= 0")
    lam = complex(lam)
    if not (math.isfinite(lam.real) and math.isfinite(lam.imag)):
        raise ValueError("lambda must be finite")
    a2 = lam.real * lam.real + lam.imag * lam.imag
    if l >= j:
        d, lo, hi = l - j, j, l
        base = lam
        lag = laguerre(j, d, a2)
    else:
        d, lo, hi = j - l, l, j
        base = -lam.conjugate()
        lag = laguerre(l, d, a2)
    if base == 0:
        return complex(1.0) if d == 0 else complex(0.0)
    log_mag = 0.5 * (math.lgamma(lo + 1) - math.lgamma(hi + 1))
    log_mag += d * math.log(abs(base)) - 0.5 * a2
    out = lag * math.exp(log_mag) * cmath.exp(1j * d * cmath.phase(base))
    if not (math.isfinite(out.real) and math.isfinite(out.imag)):
        raise ValueError("displacement_element overflowed for the given indices")
    return out


def _ladder(dim: int) -> np.ndarray:
    """Truncated annihilation operator on Fock levels 0..dim-1."""
    return np.diag(np.sqrt(np.arange(1.0, dim)), k=1)


# Hard ceiling on the adaptive internal basis; squeezed tails decay like
# tanh(r)^(2m), so anything representable at double precision fits well below.
_MAX_INTERNAL_LEVELS = 4096


def _apply_sc_operators(beta: complex, zeta: complex, dim: int) -> np.ndarray:
    """D(beta) S(zeta) |0> on a dim-level truncated basis."""
    b = sparse.diags(np.sqrt(np.arange(1.0, dim)), 1, format="csr", dtype=complex)
    bd = b.conjugate().T.tocsr()
    vec = np.zeros(dim, dtype=complex)
    vec[0] = 1.0
    # Both generators are anti-Hermitian, so each factor is exactly unitary on
    # the truncated space; truncation damage shows up near the top levels.
    vec = expm_multiply(0.5 * (np.conj(zeta) * (b @ b) - zeta * (bd @ bd)), vec)
    return expm_multiply(beta * bd - np.conj(beta) * b, vec)


def squeezed_coherent_coefficients(
    coh: CoherentParams, sq: SqueezeParams, n_max: int
) -> np.ndarray:
    """Fock coefficients c_n, n = 0..n_max, of the state D(beta)S(zeta)|0>.

    Built by exponentiating truncated squeeze and displacement generators
    against the vacuum.  The internal cutoff starts at n_max + 20 +
    ceil(4(|beta|^2 + sinh^2 r)) and doubles until less than
    COEFFICIENT_TAIL_TOL of the norm sits in the top guard band, so the
    returned coefficients are converged; the error fires only for states too
    broad to represent at all.
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    beta = coh.value
    zeta = sq.value
    sh2 = math.sinh(sq.r) ** 2
    dim = n_max + 21 + math.ceil(4.0 * (coh.beta_abs**2 + sh2))
    if sq.r > 0:
        # Squeezed-vacuum occupation falls off as tanh(r)^(2m): warm-start the
        # cutoff where that tail alone drops below the tolerance.
        per_pair = -2.0 * math.log(math.tanh(sq.r))
        dim = max(dim, n_max + 21 + 2 * math.ceil(28.0 / per_pair))
    dim = min(dim, _MAX_INTERNAL_LEVELS)
    while True:
        vec = _apply_sc_operators(beta, zeta, dim)
        guard = max(n_max + 1, dim - 10)
        tail = float(np.sum(np.abs(vec[guard:]) ** 2))
        if tail <= COEFFICIENT_TAIL_TOL:
            break
        if dim >= _MAX_INTERNAL_LEVELS:
            raise CutoffTooSmallError(
                f"tail mass {tail:.3e} above internal cutoff {dim - 1} exceeds "
                f"{COEFFICIENT_TAIL_TOL:.0e}; state too broad to represent"
            )
        dim = min(2 * dim, _MAX_INTERNAL_LEVELS)
    out = vec[: n_max + 1].copy()
    if not np.all(np.isfinite(out.view(float))):
        raise ValueError("squeezed_coherent_coefficients produced non-finite output")
    return out


def sinc_u(x: float) -> float:
    """Unnormalized sinc: sin(x)/x with sinc_u(0) = 1.

    This is the convention under which t*sinc_u(a*t/2)*exp(i*a*t/2) equals
    the phase integral of exp(i*a*t') from 0 to t.
    """
    if not math.isfinite(x):
        raise ValueError("x must be finite")
    return float(np.sinc(x / math.pi))
