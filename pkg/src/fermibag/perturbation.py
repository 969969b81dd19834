"""Perturbative ground-state dressing and vacuum energy shift.

First order in epsilon, the counterrotating pair terms dress the vacuum with
one-phonon plus particle-antiparticle-pair components

    a_nm = 2 eps (-1)^(n+m) (omega_n - omega_m) / (omega_n + omega_m + Omega),

with squared norm Z = 1 + sum a_nm^2.  At second order the ground energy
shifts down by

    delta_E = - sum_nm 4 eps^2 (omega_n - omega_m)^2 / (omega_n + omega_m + Omega).

Both sums run over all ordered mode pairs (n, m) below the cutoff N_f; the
diagonal vanishes identically.  Multi-bag variants sum the same expressions
over the independent oscillators, one per fluctuating wall.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import CavityConfig, MultiBagConfig, mode_frequency

__all__ = [
    "GroundStateCorrection",
    "EnergyShift",
    "ground_state_correction",
    "vacuum_energy_shift",
    "ground_state_correction_multi",
    "vacuum_energy_shift_multi",
    "boson_reduced_purity",
]


@dataclass(frozen=True)
class GroundStateCorrection:
    """First-order amplitude table of the dressed ground state.

    amplitudes[n, m] multiplies the one-phonon state with a particle in mode n
    and an antiparticle in mode m; norm_z is the squared norm of the corrected
    (unnormalized) state; cutoff records N_f.
    """

    amplitudes: np.ndarray
    norm_z: float
    cutoff: int

    def __post_init__(self):
        if not np.all(np.isfinite(self.amplitudes)):
            raise ValueError("amplitude table contains non-finite entries")


@dataclass(frozen=True)
class EnergyShift:
    """Second-order ground-energy shift, decomposed per oscillator."""

    delta_e: float
    cutoff: int
    per_oscillator: tuple[float, ...]

    def __post_init__(self):
        if self.delta_e > 0:
            raise ValueError("energy shift must be <= 0")


def _frequencies(cfg: CavityConfig) -> np.ndarray:
    return np.array(
        [mode_frequency(n, cfg.length) for n in range(cfg.n_fermion_modes)]
    )


def _amplitude_table(cfg: CavityConfig, omega_mech: float) -> np.ndarray:
    w = _frequencies(cfg)
    diff = w[:, None] - w[None, :]
    denom = w[:, None] + w[None, :] + omega_mech
    signs = (-1.0) ** (np.add.outer(np.arange(cfg.n_fermion_modes), np.arange(cfg.n_fermion_modes)))
    return 2.0 * cfg.epsilon * signs * diff / denom


def _correction(cfg: CavityConfig, omega_mech: float) -> GroundStateCorrection:
    table = _amplitude_table(cfg, omega_mech)
    z = 1.0 + float(np.sum(table**2))
    return GroundStateCorrection(amplitudes=table, norm_z=z, cutoff=cfg.n_fermion_modes)


def _shift(cfg: CavityConfig, omega_mech: float) -> float:
    w = _frequencies(cfg)
    diff = w[:, None] - w[None, :]
    denom = w[:, None] + w[None, :] + omega_mech
    return float(-np.sum(4.0 * cfg.epsilon**2 * diff**2 / denom))


def ground_state_correction(cfg: CavityConfig) -> GroundStateCorrection:
    """Amplitude table a_nm of the dressed vacuum, with its norm Z."""
    return _correction(cfg, cfg.omega_mech)


def vacuum_energy_shift(cfg: CavityConfig) -> EnergyShift:
    """Second-order shift of the ground energy (always <= 0)."""
    de = _shift(cfg, cfg.omega_mech)
    return EnergyShift(delta_e=de, cutoff=cfg.n_fermion_modes, per_oscillator=(de,))


def ground_state_correction_multi(cfg: MultiBagConfig) -> list[GroundStateCorrection]:
    """One amplitude table per fluctuating wall; wall l sees only Omega_l."""
    return [_correction(cfg.base, omega) for omega in cfg.omegas]


def vacuum_energy_shift_multi(cfg: MultiBagConfig) -> EnergyShift:
    """Total shift: the single-oscillator expression summed over walls."""
    parts = tuple(_shift(cfg.base, omega) for omega in cfg.omegas)
    return EnergyShift(
        delta_e=float(sum(parts)),
        cutoff=cfg.base.n_fermion_modes,
        per_oscillator=parts,
    )


def boson_reduced_purity(gsc: GroundStateCorrection) -> float:
    """Purity of the wall mode reduced from the normalized dressed vacuum.

    The corrected state has exactly two Schmidt blocks: the bare vacuum with
    weight 1/Z and the one-phonon pair sector with weight (Z-1)/Z, so the
    purity is (1 + A^2) / (1 + A)^2 with A = Z - 1.  Equals 1 only when the
    amplitude table vanishes.
    """
    a = float(np.sum(gsc.amplitudes**2))
    return (1.0 + a * a) / ((1.0 + a) * (1.0 + a))
