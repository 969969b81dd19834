"""Cavity configuration, mode spectrum, coupling coefficients, and drives.

A massless spinor field lives between walls separated by L; the right wall
vibrates with frequency Omega and dimensionless amplitude epsilon.  Mode
frequencies are omega_n = (n + 1/2) pi / L with equal spacing pi/L.  The
interaction Hamiltonian couples fermion bilinears to the wall displacement
quadrature (b^dag + b) through the coefficients below; an external drive
lambda(t) acts on the wall mode.

Natural units hbar = c = 1.  Configs are immutable value objects.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError

__all__ = [
    "CavityConfig",
    "DriveSpec",
    "MultiBagConfig",
    "mode_frequency",
    "mode_spinor",
    "pair_coupling",
    "scatter_coupling",
    "drive_value",
    "drive_values",
]

# Relative wall amplitudes beyond this make second-order perturbation theory
# doubtful; the config still builds but warns.
EPSILON_WARN_THRESHOLD = 0.1


@dataclass(frozen=True)
class CavityConfig:
    """Single-bag physical parameters.

    length: wall separation L > 0.
    epsilon: dimensionless vibration amplitude, delta L0 / L.
    omega_mech: wall (phonon) frequency Omega > 0.
    n_fermion_modes: mode cutoff N_f; particle and antiparticle modes 0..N_f-1.
    """

    length: float
    epsilon: float
    omega_mech: float
    n_fermion_modes: int

    def __post_init__(self):
        if not (math.isfinite(self.length) and self.length > 0):
            raise ValidationError("length must be finite and > 0")
        if not (math.isfinite(self.epsilon) and self.epsilon >= 0):
            raise ValidationError("epsilon must be finite and >= 0")
        if self.epsilon > EPSILON_WARN_THRESHOLD:
            warnings.warn(
                f"epsilon = {self.epsilon} exceeds {EPSILON_WARN_THRESHOLD}; "
                "perturbative results are unreliable at this amplitude",
                stacklevel=2,
            )
        if not (math.isfinite(self.omega_mech) and self.omega_mech > 0):
            raise ValidationError("omega_mech must be finite and > 0")
        if int(self.n_fermion_modes) != self.n_fermion_modes or self.n_fermion_modes < 1:
            raise ValidationError("n_fermion_modes must be an integer >= 1")


@dataclass(frozen=True, eq=False)
class DriveSpec:
    """External drive lambda(t) = lambda_x(t) + i lambda_p(t) on the wall mode.

    Variants: "off"; "impulsive" with strength g and decay rate nu (an
    exponentially damped kick that launches the classical wall oscillation);
    "sampled" with a piecewise-linear complex signal.
    """

    variant: str
    g: float = 0.0
    nu: float = 0.0
    times: np.ndarray | None = field(default=None, repr=False)
    values: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.variant not in ("off", "impulsive", "sampled"):
            raise ValidationError(f"unknown drive variant {self.variant!r}")
        if self.variant == "impulsive":
            if not (math.isfinite(self.g) and self.g >= 0):
                raise ValidationError("impulsive drive requires g >= 0")
            if not (math.isfinite(self.nu) and self.nu > 0):
                raise ValidationError("impulsive drive requires nu > 0")
        if self.variant == "sampled":
            t = np.asarray(self.times, dtype=float)
            v = np.asarray(self.values, dtype=complex)
            if t.ndim != 1 or v.shape != t.shape or t.size < 2:
                raise ValidationError("sampled drive needs matching 1-d times/values, >= 2 points")
            if not np.all(np.diff(t) > 0):
                raise ValidationError("sampled drive times must be strictly increasing")
            object.__setattr__(self, "times", t)
            object.__setattr__(self, "values", v)

    @classmethod
    def off(cls) -> "DriveSpec":
        return cls("off")

    @classmethod
    def impulsive(cls, g: float, nu: float) -> "DriveSpec":
        return cls("impulsive", g=g, nu=nu)

    @classmethod
    def sampled(cls, times, values) -> "DriveSpec":
        return cls("sampled", times=times, values=values)

    @property
    def is_off(self) -> bool:
        return self.variant == "off" or (self.variant == "impulsive" and self.g == 0.0)


@dataclass(frozen=True, eq=False)
class MultiBagConfig:
    """Chain of N equally spaced wall spikes; a subset vibrates independently.

    Each fluctuating spike l carries its own phonon frequency omegas[l] and
    drive.  The fermionic spectrum is that of the base single-bag config.
    """

    n_spikes: int
    fluctuating: tuple[int, ...]
    omegas: tuple[float, ...]
    drives: tuple[DriveSpec, ...]
    base: CavityConfig

    def __post_init__(self):
        if int(self.n_spikes) != self.n_spikes or self.n_spikes < 1:
            raise ValidationError("n_spikes must be an integer >= 1")
        flu = tuple(int(q) for q in self.fluctuating)
        if len(set(flu)) != len(flu):
            raise ValidationError("fluctuating spike indices must be distinct")
        if any(q < 0 or q >= self.n_spikes for q in flu):
            raise ValidationError("fluctuating spike indices must lie in 0..N-1")
        omegas = tuple(float(w) for w in self.omegas)
        if len(omegas) != len(flu) or len(self.drives) != len(flu):
            raise ValidationError("need one omega and one drive per fluctuating spike")
        if any(not (math.isfinite(w) and w > 0) for w in omegas):
            raise ValidationError("all oscillator frequencies must be > 0")
        object.__setattr__(self, "fluctuating", flu)
        object.__setattr__(self, "omegas", omegas)
        object.__setattr__(self, "drives", tuple(self.drives))


def mode_frequency(n: int, L: float) -> float:
    """Dispersion of the confined massless modes: omega_n = (n + 1/2) pi / L."""
    if n < 0:
        raise ValidationError("mode index must be >= 0")
    if not (math.isfinite(L) and L > 0):
        raise ValidationError("L must be finite and > 0")
    return (n + 0.5) * math.pi / L


def mode_spinor(n: int, x: float, L: float, branch: str = "+") -> tuple[float, float]:
    """Two-component mode function (±sin(k_n x), cos(k_n x)) / sqrt(L).

    k_n equals omega_n for the massless field.  branch selects the sign of the
    upper component (positive/negative frequency solutions share |components|).
    """
    if branch not in ("+", "-"):
        raise ValidationError("branch must be '+' or '-'")
    if not 0.0 <= x <= L:
        raise ValidationError("x must lie in [0, L]")
    k = mode_frequency(n, L)
    s = 1.0 if branch == "+" else -1.0
    root = math.sqrt(L)
    return (s * math.sin(k * x) / root, math.cos(k * x) / root)


def _check_modes(cfg: CavityConfig, *modes: int) -> None:
    for n in modes:
        if n < 0 or n >= cfg.n_fermion_modes:
            raise ValidationError(
                f"mode index {n} outside cutoff 0..{cfg.n_fermion_modes - 1}"
            )


def pair_coupling(n: int, m: int, cfg: CavityConfig) -> float:
    """Coefficient of (d_n c_m + d_m^dag c_n^dag)(b^dag + b) in H_I.

    A_nm = -2 (-1)^(n+m) (omega_n - omega_m); the epsilon factor is applied
    where the Hamiltonian is assembled, not here.
    """
    _check_modes(cfg, n, m)
    wn = mode_frequency(n, cfg.length)
    wm = mode_frequency(m, cfg.length)
    return -2.0 * (-1.0) ** (n + m) * (wn - wm)


def scatter_coupling(n: int, m: int, cfg: CavityConfig) -> float:
    """Coefficient of (c_n^dag c_m + d_m^dag d_n)(b^dag + b) in H_I.

    S_nm = -2 (-1)^(n+m) (omega_n + omega_m).
    """
    _check_modes(cfg, n, m)
    wn = mode_frequency(n, cfg.length)
    wm = mode_frequency(m, cfg.length)
    return -2.0 * (-1.0) ** (n + m) * (wn + wm)


def drive_value(d: DriveSpec, t: float, omega_mech: float) -> complex:
    """Drive amplitude lambda(t).

    Impulsive: -(g nu / 2) e^(-nu t) (cos Omega t + i sin Omega t).
    Sampled: linear interpolation; querying outside the sample window errors.
    Off: 0.
    """
    return complex(drive_values(d, np.asarray([t], dtype=float), omega_mech)[0])


def drive_values(d: DriveSpec, ts: np.ndarray, omega_mech: float) -> np.ndarray:
    """Vectorized drive_value over a time array (shared by the quadratures)."""
    ts = np.asarray(ts, dtype=float)
    if np.any(ts < 0):
        raise ValidationError("drive times must be >= 0")
    if d.variant == "off":
        return np.zeros(ts.shape, dtype=complex)
    if d.variant == "impulsive":
        amp = -(d.g * d.nu / 2.0) * np.exp(-d.nu * ts)
        return amp * np.exp(1j * omega_mech * ts)
    # sampled: interpolation is only defined inside the sample window
    if np.any(ts < d.times[0]) or np.any(ts > d.times[-1]):
        raise ValidationError("sampled drive queried outside its time range")
    re = np.interp(ts, d.times, d.values.real)
    im = np.interp(ts, d.times, d.values.imag)
    return re + 1j * im
