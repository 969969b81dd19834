"""Boson-to-fermion-pair transition probabilities.

First-order transition amplitudes from an initial wall state |psi_i> to a
final |psi_f> accompanied by creation of a particle in mode k and an
antiparticle in mode k'.  The generic amplitude combines three overlap
functions chi_1, chi_2, chi_3 (wall raising, lowering, and identity channels)
with phase integrals of the drive; on resonance Omega = omega_k + omega_k'
the secular chi_2 channel dominates and compact closed forms exist for Fock,
coherent, squeezed, and squeezed-coherent wall states.

The external drive enters through the accumulated displacement parameter

    Lambda(t) = int_0^t [lx sin(Om t') - lp cos(Om t')
                         + i (lx cos(Om t') + lp sin(Om t'))] dt'

and its projection xi(t) = Re(Lambda) cos(Om t) - Im(Lambda) sin(Om t), which
is half the classical displacement imprinted on the wall.  Both are evaluated
by refined composite Simpson quadrature on a shared grid.

Formula tags on results identify which printed closed form produced a number;
the exact-evolution oracle (fock_oracle) arbitrates between them where their
normalizations differ.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_simpson, simpson

from .errors import (
    OffResonanceError,
    QuadratureNotConvergedError,
    UnsupportedStatePairError,
    ValidationError,
)
from .model import CavityConfig, DriveSpec, drive_values, mode_frequency
from .specfun import (
    CoherentParams,
    SqueezeParams,
    displacement_element,
    sinc_u,
    squeezed_coherent_coefficients,
)

__all__ = [
    "BosonState",
    "TransitionSpec",
    "TransitionResult",
    "Figure1Row",
    "is_resonant",
    "displacement_parameter",
    "xi",
    "xi_phase_integral",
    "chi_functions",
    "probability_general",
    "probability_resonant",
    "probability_fock",
    "probability_fock_nodrive",
    "probability_vacuum_drive",
    "probability_sc_nodrive",
    "gamma_fock",
    "gamma_coherent",
    "gamma_squeezed",
    "gamma_sc",
    "compact_probability",
    "sweep_figure1",
]

# Target absolute error of the drive quadratures.
QUAD_TOL = 1e-9
# Refinement gives up beyond this many Simpson panels.
_MAX_PANELS = 1 << 21
# Resonance is a hard precondition: the secular closed forms are only valid
# when Omega matches omega_k + omega_k' to this relative tolerance.
RESONANCE_RTOL = 1e-9


# ---------------------------------------------------------------------------
# state descriptors


@dataclass(frozen=True, eq=False)
class BosonState:
    """Symbolic wall state: Fock, coherent, squeezed, squeezed-coherent, vacuum.

    Degenerate parameter choices collapse to the same physical state, so
    equality works on a canonical form: fock(0), coherent(0), squeezed(r=0)
    and squeezed_coherent(0, r=0) all equal vacuum.
    """

    variant: str
    j: int = 0
    coh: CoherentParams | None = None
    sq: SqueezeParams | None = None

    def __post_init__(self):
        if self.variant not in ("vacuum", "fock", "coherent", "squeezed", "squeezed_coherent"):
            raise ValidationError(f"unknown boson state variant {self.variant!r}")
        if self.variant == "fock" and (int(self.j) != self.j or self.j < 0):
            raise ValidationError("fock state needs an integer occupation >= 0")

    @classmethod
    def vacuum(cls) -> "BosonState":
        return cls("vacuum")

    @classmethod
    def fock(cls, j: int) -> "BosonState":
        return cls("fock", j=j)

    @classmethod
    def coherent(cls, coh: CoherentParams) -> "BosonState":
        return cls("coherent", coh=coh)

    @classmethod
    def squeezed(cls, sq: SqueezeParams) -> "BosonState":
        return cls("squeezed", sq=sq)

    @classmethod
    def squeezed_coherent(cls, coh: CoherentParams, sq: SqueezeParams) -> "BosonState":
        return cls("squeezed_coherent", coh=coh, sq=sq)

    def canonical(self) -> "BosonState":
        if self.variant == "fock" and self.j == 0:
            return BosonState.vacuum()
        if self.variant == "coherent" and self.coh.beta_abs == 0.0:
            return BosonState.vacuum()
        if self.variant == "squeezed" and self.sq.r == 0.0:
            return BosonState.vacuum()
        if self.variant == "squeezed_coherent":
            flat = self.sq.r == 0.0
            still = self.coh.beta_abs == 0.0
            if flat and still:
                return BosonState.vacuum()
            if flat:
                return BosonState.coherent(self.coh)
            if still:
                return BosonState.squeezed(self.sq)
        return self

    def as_sc(self) -> tuple[CoherentParams, SqueezeParams]:
        """View as a squeezed-coherent pair (undefined for fock j >= 1)."""
        c = self.canonical()
        if c.variant == "vacuum":
            return CoherentParams(0.0), SqueezeParams(0.0)
        if c.variant == "coherent":
            return c.coh, SqueezeParams(0.0)
        if c.variant == "squeezed":
            return CoherentParams(0.0), c.sq
        if c.variant == "squeezed_coherent":
            return c.coh, c.sq
        raise UnsupportedStatePairError("fock state has no squeezed-coherent form")

    def _key(self):
        c = self.canonical()
        if c.variant == "vacuum":
            return ("vacuum",)
        if c.variant == "fock":
            return ("fock", c.j)
        if c.variant == "coherent":
            return ("coherent", c.coh.beta_abs, c.coh.theta)
        if c.variant == "squeezed":
            return ("squeezed", c.sq.r, c.sq.phi)
        return ("sc", c.coh.beta_abs, c.coh.theta, c.sq.r, c.sq.phi)

    def __eq__(self, other):
        return isinstance(other, BosonState) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())


@dataclass(frozen=True, eq=False)
class TransitionSpec:
    """One transition scenario: vacuum fermions plus wall state |psi_i> evolve
    under the coupled Hamiltonian; we ask for a particle in mode k, an
    antiparticle in mode k', and wall state |psi_f>."""

    k: int
    k_prime: int
    initial: BosonState
    final: BosonState
    cfg: CavityConfig
    drive: DriveSpec

    def __post_init__(self):
        for name, idx in (("k", self.k), ("k_prime", self.k_prime)):
            if int(idx) != idx or idx < 0 or idx >= self.cfg.n_fermion_modes:
                raise ValidationError(f"{name}={idx} outside mode cutoff")

    @property
    def omega_k(self) -> float:
        return mode_frequency(self.k, self.cfg.length)

    @property
    def omega_k_prime(self) -> float:
        return mode_frequency(self.k_prime, self.cfg.length)

    @property
    def omega_sum(self) -> float:
        return self.omega_k + self.omega_k_prime

    @property
    def delta_omega(self) -> float:
        return self.omega_k - self.omega_k_prime


@dataclass(frozen=True)
class TransitionResult:
    """Probability tagged with the name of the formula that produced it."""

    probability: float
    time: float
    formula: str
    resonant: bool


def _make_result(p: float, t: float, formula: str, resonant: bool) -> TransitionResult:
    if p > 1.0:
        warnings.warn(
            f"probability {p:.3e} exceeds 1 (perturbation theory breakdown); clamped",
            stacklevel=3,
        )
        p = 1.0
    return TransitionResult(probability=float(p), time=float(t), formula=formula, resonant=resonant)


def is_resonant(spec: TransitionSpec) -> bool:
    w = spec.omega_sum
    return abs(spec.cfg.omega_mech - w) <= RESONANCE_RTOL * max(w, spec.cfg.omega_mech)


def _require_resonance(spec: TransitionSpec) -> None:
    if not is_resonant(spec):
        raise OffResonanceError(
            f"Omega = {spec.cfg.omega_mech} vs omega_k + omega_k' = {spec.omega_sum}: "
            "this formula is only valid on resonance"
        )


def _require_time(t: float) -> None:
    if not (math.isfinite(t) and t >= 0):
        raise ValidationError("t must be finite and >= 0")


# ---------------------------------------------------------------------------
# drive quadratures


def _lambda_kernel(drive: DriveSpec, ts: np.ndarray, omega_mech: float) -> np.ndarray:
    lam = drive_values(drive, ts, omega_mech)
    c = np.cos(omega_mech * ts)
    s = np.sin(omega_mech * ts)
    lx, lp = lam.real, lam.imag
    return (lx * s - lp * c) + 1j * (lx * c + lp * s)


def _lambda_profile(drive: DriveSpec, t: float, omega_mech: float, n: int):
    """Displacement parameter accumulated on a uniform n-panel grid."""
    ts = np.linspace(0.0, t, n + 1)
    f = _lambda_kernel(drive, ts, omega_mech)
    cum = cumulative_simpson(f.real, x=ts, initial=0.0) + 1j * cumulative_simpson(
        f.imag, x=ts, initial=0.0
    )
    return ts, cum


def _refine(evaluate, n_quad):
    """Double the panel count until `evaluate` stabilizes below QUAD_TOL."""
    n = max(16, int(n_quad))
    if n % 2:
        n += 1
    prev = None
    while n <= _MAX_PANELS:
        cur = evaluate(n)
        if prev is not None and abs(cur - prev) < QUAD_TOL:
            return cur
        prev = cur
        n *= 2
    raise QuadratureNotConvergedError(
        f"drive quadrature did not reach {QUAD_TOL:.0e} within {_MAX_PANELS} panels"
    )


def displacement_parameter(
    drive: DriveSpec, t: float, omega_mech: float, n_quad: int = 64
) -> complex:
    """Accumulated displacement Lambda(t) of the driven wall mode.

    Composite Simpson with step doubling until successive refinements differ
    by less than QUAD_TOL.  For the impulsive drive the magnitude saturates at
    g/2 once nu*t >> 1 (the accumulated value is -i(g/2)(1 - e^(-nu t))).
    """
    _require_time(t)
    if n_quad < 16:
        raise ValidationError("n_quad must be >= 16")
    if drive.is_off or t == 0.0:
        return 0j

    def _eval(n):
        _, cum = _lambda_profile(drive, t, omega_mech, n)
        return complex(cum[-1])

    return _refine(_eval, n_quad)


def xi(drive: DriveSpec, t: float, omega_mech: float) -> float:
    """Co-rotating projection xi(t) = Re(Lambda)cos(Om t) - Im(Lambda)sin(Om t)."""
    lam = displacement_parameter(drive, t, omega_mech)
    return lam.real * math.cos(omega_mech * t) - lam.imag * math.sin(omega_mech * t)


def xi_phase_integral(
    drive: DriveSpec, t: float, omega_mech: float, omega_sum: float, n_quad: int = 64
) -> complex:
    """Drive interference integral int_0^t xi(t') e^(i omega_sum t') dt'.

    xi is reconstructed on the same refined grid that carries Lambda so the
    two quadratures stay internally consistent.
    """
    _require_time(t)
    if drive.is_off or t == 0.0:
        return 0j

    def _eval(n):
        ts, cum = _lambda_profile(drive, t, omega_mech, n)
        xi_nodes = cum.real * np.cos(omega_mech * ts) - cum.imag * np.sin(omega_mech * ts)
        g = xi_nodes * np.exp(1j * omega_sum * ts)
        return complex(simpson(g.real, x=ts) + 1j * simpson(g.imag, x=ts))

    return _refine(_eval, n_quad)


# ---------------------------------------------------------------------------
# chi overlap functions


def _chi_triple(
    initial: BosonState,
    final: BosonState,
    lam: complex,
    omega_mech: float,
    t: float,
) -> tuple[complex, complex, complex]:
    """(chi_1, chi_2, chi_3) for a given effective displacement amplitude.

    chi_i = <psi_f| e^(-i Om t b^dag b) U_dr(t) O_i |psi_i> with O_i in
    (b^dag, b, 1) and U_dr represented by the displacement amplitude `lam`.
    Supported pairs: Fock to Fock, and coherent/squeezed/squeezed-coherent to
    vacuum.
    """
    ini, fin = initial.canonical(), final.canonical()
    focklike = ("vacuum", "fock")
    if ini.variant in focklike and fin.variant in focklike:
        j = ini.j if ini.variant == "fock" else 0
        l = fin.j if fin.variant == "fock" else 0
        ph = cmath.exp(-1j * l * omega_mech * t)
        chi1 = math.sqrt(j + 1) * ph * displacement_element(l, j + 1, lam)
        chi2 = math.sqrt(j) * ph * displacement_element(l, j - 1, lam) if j >= 1 else 0j
        chi3 = ph * displacement_element(l, j, lam)
        return chi1, chi2, chi3
    if fin.variant == "vacuum" and ini.variant in ("coherent", "squeezed", "squeezed_coherent"):
        coh, sq = ini.as_sc()
        beta = coh.value
        phase = cmath.exp((lam * beta.conjugate() - lam.conjugate() * beta) / 2.0)
        alpha = beta + lam
        c = squeezed_coherent_coefficients(CoherentParams.from_complex(alpha), sq, 1)
        chi1 = -lam.conjugate() * c[0] * phase
        chi2 = (c[1] - lam * c[0]) * phase
        chi3 = c[0] * phase
        return complex(chi1), complex(chi2), complex(chi3)
    raise UnsupportedStatePairError(
        f"no closed form for initial {ini.variant!r} to final {fin.variant!r}"
    )


def chi_functions(spec: TransitionSpec, t: float) -> tuple[complex, complex, complex]:
    """chi overlap triple at time t using the drive's Lambda(t)."""
    _require_time(t)
    lam = displacement_parameter(spec.drive, t, spec.cfg.omega_mech)
    return _chi_triple(spec.initial, spec.final, lam, spec.cfg.omega_mech, t)


# ---------------------------------------------------------------------------
# probability formulas


def probability_general(spec: TransitionSpec, t: float) -> TransitionResult:
    """Full three-channel amplitude, valid on and off resonance.

    P = 4 eps^2 (dw)^2 | chi_1 t sinc_u(a+) e^(i a+) + chi_2 t sinc_u(a-) e^(i a-)
        + chi_3 int_0^t xi e^(i w t') dt' |^2,  a± = (w ± Omega) t / 2.
    """
    _require_time(t)
    w = spec.omega_sum
    dw = spec.delta_omega
    om = spec.cfg.omega_mech
    chi1, chi2, chi3 = chi_functions(spec, t)
    integral = xi_phase_integral(spec.drive, t, om, w)
    a_plus = 0.5 * (w + om) * t
    a_minus = 0.5 * (w - om) * t
    amp = (
        chi1 * t * sinc_u(a_plus) * cmath.exp(1j * a_plus)
        + chi2 * t * sinc_u(a_minus) * cmath.exp(1j * a_minus)
        + chi3 * integral
    )
    p = 4.0 * spec.cfg.epsilon**2 * dw**2 * abs(amp) ** 2
    return _make_result(p, t, "general", is_resonant(spec))


def probability_resonant(spec: TransitionSpec, t: float) -> TransitionResult:
    """Secular part on resonance: P = 4 eps^2 dw^2 |chi_2 t + chi_3 int xi e^(i Om t')|^2."""
    _require_time(t)
    _require_resonance(spec)
    om = spec.cfg.omega_mech
    _, chi2, chi3 = chi_functions(spec, t)
    integral = xi_phase_integral(spec.drive, t, om, om)
    amp = chi2 * t + chi3 * integral
    p = 4.0 * spec.cfg.epsilon**2 * spec.delta_omega**2 * abs(amp) ** 2
    return _make_result(p, t, "resonant", True)


def _fock_occupations(spec: TransitionSpec) -> tuple[int, int]:
    ini, fin = spec.initial.canonical(), spec.final.canonical()
    ok = ("vacuum", "fock")
    if ini.variant not in ok or fin.variant not in ok:
        raise UnsupportedStatePairError("this formula requires Fock (or vacuum) states")
    j = ini.j if ini.variant == "fock" else 0
    l = fin.j if fin.variant == "fock" else 0
    return j, l


def probability_fock(spec: TransitionSpec, t: float) -> TransitionResult:
    """Resonant Fock j to Fock l probability via displacement-operator elements.

    P = 4 eps^2 dw^2 | t sqrt(j) [D(Lambda_t)]_{l,j-1} + [D(Lambda_t)]_{l,j} I(t) |^2
    with I the xi phase integral; with the drive off this reduces to the
    quadratic law 4 j eps^2 dw^2 t^2 for l = j-1.
    """
    _require_time(t)
    _require_resonance(spec)
    j, l = _fock_occupations(spec)
    om = spec.cfg.omega_mech
    lam = displacement_parameter(spec.drive, t, om)
    integral = xi_phase_integral(spec.drive, t, om, om)
    amp = displacement_element(l, j, lam) * integral
    if j >= 1:
        amp += t * math.sqrt(j) * displacement_element(l, j - 1, lam)
    p = 4.0 * spec.cfg.epsilon**2 * spec.delta_omega**2 * abs(amp) ** 2
    return _make_result(p, t, "fock", True)


def probability_fock_nodrive(spec: TransitionSpec, t: float) -> TransitionResult:
    """Undriven resonant ladder step j -> j-1: P = 4 j eps^2 dw^2 t^2."""
    _require_time(t)
    _require_resonance(spec)
    if not spec.drive.is_off:
        raise ValidationError("fock_nodrive requires the drive to be off")
    j, l = _fock_occupations(spec)
    if j < 1 or l != j - 1:
        raise ValidationError("fock_nodrive applies to j >= 1 with final occupation j-1")
    p = 4.0 * j * spec.cfg.epsilon**2 * spec.delta_omega**2 * t * t
    return _make_result(p, t, "fock_nodrive", True)


def probability_vacuum_drive(spec: TransitionSpec, t: float) -> TransitionResult:
    """Driven vacuum to vacuum: P = 4 eps^2 dw^2 e^(-|Lambda_t|^2) |int xi e^(i Om t')|^2."""
    _require_time(t)
    _require_resonance(spec)
    if spec.initial != BosonState.vacuum() or spec.final != BosonState.vacuum():
        raise ValidationError("vacuum_drive requires vacuum initial and final states")
    om = spec.cfg.omega_mech
    lam = displacement_parameter(spec.drive, t, om)
    integral = xi_phase_integral(spec.drive, t, om, om)
    p = (
        4.0
        * spec.cfg.epsilon**2
        * spec.delta_omega**2
        * math.exp(-abs(lam) ** 2)
        * abs(integral) ** 2
    )
    return _make_result(p, t, "vacuum_drive", True)


def probability_sc_nodrive(spec: TransitionSpec, t: float) -> TransitionResult:
    """Undriven resonant squeezed-coherent to vacuum closed form.

    P = 4 eps^2 |gamma|^2 dw^2 t^2 e^(-|beta|^2 (1 + cos(2 theta - phi) tanh r))
        / cosh^3 r,   gamma = beta cosh r + beta* e^(i phi) sinh r.
    """
    _require_time(t)
    _require_resonance(spec)
    if not spec.drive.is_off:
        raise ValidationError("sc_nodrive requires the drive to be off")
    if spec.final.canonical().variant != "vacuum":
        raise UnsupportedStatePairError("sc_nodrive requires a vacuum final state")
    coh, sq = spec.initial.as_sc()
    beta = coh.value
    gamma = beta * math.cosh(sq.r) + beta.conjugate() * cmath.exp(1j * sq.phi) * math.sinh(sq.r)
    expo = -coh.beta_abs**2 * (1.0 + math.cos(2.0 * coh.theta - sq.phi) * math.tanh(sq.r))
    p = (
        4.0
        * spec.cfg.epsilon**2
        * abs(gamma) ** 2
        * spec.delta_omega**2
        * t
        * t
        * math.exp(expo)
        / math.cosh(sq.r) ** 3
    )
    return _make_result(p, t, "sc_nodrive", True)


# ---------------------------------------------------------------------------
# compact auxiliary functions (long-time impulsive-drive envelopes)


def gamma_fock(j: int, g: float) -> float:
    """Fock envelope (g/2)^(2j-2) e^(-g^2/4) ((g^2 + 8j) / (8 sqrt(j!)))^2.

    0^0 := 1 covers j = 1 at g = 0.  Note this printed normalization is a
    factor 4 below the undriven ladder law at j = 1; results carry distinct
    formula tags and the exact oracle sides with the ladder law.
    """
    if int(j) != j or j < 1:
        raise ValidationError("gamma_fock requires an integer j >= 1")
    if not (math.isfinite(g) and g >= 0):
        raise ValidationError("gamma_fock requires g >= 0")
    half = 0.5 * g
    lead = 1.0 if j == 1 else half ** (2 * j - 2)
    poly = (g * g + 8.0 * j) / (8.0 * math.sqrt(math.factorial(j)))
    return lead * math.exp(-0.25 * g * g) * poly * poly


def gamma_coherent(coh: CoherentParams, g: float) -> float:
    """Coherent envelope e^(-g^2/4 - b^2 + g b sin(th)) (g^2/4 + 4 b^2 + 2 g b sin(th))."""
    b, th = coh.beta_abs, coh.theta
    s = math.sin(th)
    return math.exp(-0.25 * g * g - b * b + g * b * s) * (
        0.25 * g * g + 4.0 * b * b + 2.0 * g * b * s
    )


def gamma_squeezed(sq: SqueezeParams, g: float) -> float:
    """Squeezed-vacuum envelope; vanishes identically at g = 0."""
    r, ph = sq.r, sq.phi
    expo = -0.25 * g * g * (1.0 - math.cos(ph) * math.tanh(r))
    bracket = 5.0 * math.cosh(2.0 * r) + 4.0 * math.sinh(2.0 * r) * math.cos(ph) - 3.0
    return g * g * math.exp(expo) / (8.0 * math.cosh(r) ** 3) * bracket


def gamma_sc(coh: CoherentParams, sq: SqueezeParams, g: float) -> float:
    """Squeezed-coherent envelope; reduces to gamma_coherent at r = 0 and to
    gamma_squeezed at beta = 0.

    The g^2 term in the tanh bracket carries cos(phi), not cos(theta): the
    coherent phase is undefined at beta = 0 and only cos(phi) makes the
    squeezed-vacuum reduction hold (it also matches the independent
    chi-composition re-derivation at all phases).
    """
    b, th = coh.beta_abs, coh.theta
    r, ph = sq.r, sq.phi
    tr = math.tanh(r)
    sech = 1.0 / math.cosh(r)
    expo = (
        -0.25 * g * g
        - b * b
        + g * b * math.sin(th)
        + 0.25
        * tr
        * (
            g * g * math.cos(ph)
            - 4.0 * b * b * math.cos(2.0 * th - ph)
            - 4.0 * g * b * math.sin(th - ph)
        )
    )
    inner = sech * sech * (
        3.0 * g * b * math.sin(th)
        - 0.375 * g * g
        + math.cosh(2.0 * r) * (0.625 * g * g + 4.0 * b * b - g * b * math.sin(th))
    ) + (
        8.0 * b * b * math.cos(2.0 * th - ph)
        + g * g * math.cos(ph)
        + 2.0 * g * b * math.sin(th - ph)
    ) * tr
    return math.exp(expo) * sech * inner


_GAMMA_KINDS = ("F", "C", "S", "SC")


def compact_probability(
    kind: str,
    t: float,
    *,
    cfg: CavityConfig,
    k: int,
    k_prime: int,
    g: float,
    j: int | None = None,
    coh: CoherentParams | None = None,
    sq: SqueezeParams | None = None,
) -> TransitionResult:
    """Long-time impulsive-drive compact law P = eps^2 dw^2 t^2 Gamma_kind.

    kind selects the wall state family: F needs j, C needs coh, S needs sq,
    SC needs both.  Resonance is a hard precondition.
    """
    _require_time(t)
    if kind not in _GAMMA_KINDS:
        raise ValidationError(f"kind must be one of {_GAMMA_KINDS}")
    wk = mode_frequency(k, cfg.length)
    wkp = mode_frequency(k_prime, cfg.length)
    wsum = wk + wkp
    if abs(cfg.omega_mech - wsum) > RESONANCE_RTOL * max(wsum, cfg.omega_mech):
        raise OffResonanceError(
            f"Omega = {cfg.omega_mech} vs omega_k + omega_k' = {wsum}"
        )
    if kind == "F":
        if j is None:
            raise ValidationError("kind F requires j")
        gam = gamma_fock(j, g)
    elif kind == "C":
        if coh is None:
            raise ValidationError("kind C requires coherent parameters")
        gam = gamma_coherent(coh, g)
    elif kind == "S":
        if sq is None:
            raise ValidationError("kind S requires squeeze parameters")
        gam = gamma_squeezed(sq, g)
    else:
        if coh is None or sq is None:
            raise ValidationError("kind SC requires coherent and squeeze parameters")
        gam = gamma_sc(coh, sq, g)
    p = cfg.epsilon**2 * (wk - wkp) ** 2 * t * t * gam
    return _make_result(p, t, f"compact_{kind}", True)


# ---------------------------------------------------------------------------
# figure-level sweep


@dataclass(frozen=True)
class Figure1Row:
    """One grid point of the envelope comparison at fixed mean phonon number.

    gamma_f is None off the integer grid (Fock occupation is an integer)."""

    n_phon: float
    gamma_f: float | None
    gamma_c: float
    gamma_s: float
    gamma_sc: float


def sweep_figure1(g: float, n_grid) -> list[Figure1Row]:
    """Envelope curves versus mean phonon number N at drive strength g.

    State parameters are inverted from N: j = N (integers only), beta =
    sqrt(N), r = arsinh(sqrt(N)); the squeezed-coherent point splits N evenly
    between displacement and squeezing (|beta|^2 = sinh^2 r = N/2).  All
    phases are zero.
    """
    rows: list[Figure1Row] = []
    for raw in n_grid:
        n_phon = float(raw)
        if not (math.isfinite(n_phon) and n_phon >= 0):
            raise ValidationError("phonon-number grid must be finite and >= 0")
        j = int(round(n_phon))
        gamma_f = None
        if j >= 1 and abs(n_phon - j) <= 1e-12:
            gamma_f = gamma_fock(j, g)
        coh = CoherentParams(math.sqrt(n_phon), 0.0)
        sq = SqueezeParams(math.asinh(math.sqrt(n_phon)), 0.0)
        half = 0.5 * n_phon
        coh_half = CoherentParams(math.sqrt(half), 0.0)
        sq_half = SqueezeParams(math.asinh(math.sqrt(half)), 0.0)
        rows.append(
            Figure1Row(
                n_phon=n_phon,
                gamma_f=gamma_f,
                gamma_c=gamma_coherent(coh, g),
                gamma_s=gamma_squeezed(sq, g),
                gamma_sc=gamma_sc(coh_half, sq_half, g),
            )
        )
    return rows
