"""Brute-force ground truth on a truncated boson (x) fermion Hilbert space.

Everything here is built from explicit matrices: Jordan-Wigner fermion
operators, a truncated boson ladder, the full Hamiltonian H0 + eps*H_I +
H_dr(t), exact diagonalization, and step-by-step unitary propagation.  The
closed forms in `transitions` are validated against these numbers, never the
other way around.

Basis convention: index = fermion_bits + 2^(2 N_f) * boson_level; fermion
bits are particles 0..N_f-1 in the low bits, then antiparticles 0..N_f-1.
Annihilating bit p picks up the sign (-1)^(number of occupied lower bits),
i.e. |bits> = c_0^dag c_1^dag ... d_0^dag ... |0> with the lowest bit's
creator leftmost.

A first-order Dyson amplitude is also provided.  It needs no Hilbert space:
the drive is absorbed exactly into a displacement frame and the remaining
matrix elements are `specfun` overlaps.  In that frame the interaction
carries the boson factor b^dag e^(i Om t) + b e^(-i Om t) + 2 xi(t) and the
frame displacement enters the final-state overlap conjugated; both details
differ from the printed closed forms in `transitions` (single xi, unconjugated
argument), which is exactly the normalization question the propagation
arbitrates.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from scipy.integrate import simpson

from .errors import (
    DimensionLimitError,
    NormDriftError,
    StepSizeError,
    ValidationError,
)
from .model import (
    CavityConfig,
    DriveSpec,
    drive_values,
    mode_frequency,
    pair_coupling,
    scatter_coupling,
)
from .transitions import (
    BosonState,
    TransitionResult,
    TransitionSpec,
    _chi_triple,
    _lambda_profile,
    _refine,
    displacement_parameter,
    is_resonant,
)
from .specfun import squeezed_coherent_coefficients

__all__ = [
    "DIM_LIMIT_DEFAULT",
    "HilbertSpace",
    "FermionOperators",
    "build_space",
    "fermion_operators",
    "boson_operators",
    "build_hamiltonian",
    "exact_ground_state",
    "basis_state",
    "embed_state",
    "pair_target",
    "propagate",
    "propagate_series",
    "transition_series",
    "oracle_probability",
    "dyson1_amplitude",
    "dyson1_probability",
]

DIM_LIMIT_DEFAULT = 1 << 20
# Per-step contract: ||H|| * dt must stay below this (spectral norm bounded
# by the 1-norm for Hermitian H).
STEP_NORM_LIMIT = 0.5
NORM_DRIFT_TOL = 1e-9
# Dense linear algebra below this dimension, sparse/Krylov above.
_DENSE_CUTOFF = 1024
# Below this amplitude the drive term is numerically invisible next to the
# static Hamiltonian and the cached static step unitary is reused.
_DRIVE_NEGLIGIBLE = 1e-13


@dataclass(frozen=True)
class HilbertSpace:
    """Truncated product space: boson Fock levels 0..N_b times 2 N_f JW bits."""

    n_boson_levels: int
    n_fermion_modes: int

    def __post_init__(self):
        if int(self.n_boson_levels) != self.n_boson_levels or self.n_boson_levels < 0:
            raise ValidationError("n_boson_levels must be an integer >= 0")
        if int(self.n_fermion_modes) != self.n_fermion_modes or self.n_fermion_modes < 1:
            raise ValidationError("n_fermion_modes must be an integer >= 1")

    @property
    def boson_dim(self) -> int:
        return self.n_boson_levels + 1

    @property
    def fermion_dim(self) -> int:
        return 1 << (2 * self.n_fermion_modes)

    @property
    def dim(self) -> int:
        return self.boson_dim * self.fermion_dim

    def index(self, boson_level: int, fermion_bits: int) -> int:
        if not (0 <= boson_level < self.boson_dim):
            raise ValidationError(f"boson level {boson_level} outside 0..{self.n_boson_levels}")
        if not (0 <= fermion_bits < self.fermion_dim):
            raise ValidationError(f"fermion bitmask {fermion_bits} outside the space")
        return fermion_bits + self.fermion_dim * boson_level

    def unpack(self, idx: int) -> tuple[int, int]:
        if not (0 <= idx < self.dim):
            raise ValidationError(f"basis index {idx} outside the space")
        return divmod(idx, self.fermion_dim)


def build_space(n_b: int, n_f: int, dim_limit: int = DIM_LIMIT_DEFAULT) -> HilbertSpace:
    space = HilbertSpace(n_boson_levels=n_b, n_fermion_modes=n_f)
    if space.dim > dim_limit:
        raise DimensionLimitError(
            f"dim = {space.dim} exceeds the limit {dim_limit}; lower the cutoffs"
        )
    return space


# ---------------------------------------------------------------------------
# operator construction


def _bit_annihilators(n_bits: int) -> list[sp.csr_matrix]:
    """Jordan-Wigner annihilation matrices for each bit over the full bit space."""
    dim = 1 << n_bits
    states = np.arange(dim)
    mats = []
    for p in range(n_bits):
        bit = 1 << p
        occupied = states[(states & bit) != 0]
        below = occupied & (bit - 1)
        parity = np.array([int(x).bit_count() & 1 for x in below])
        signs = (1.0 - 2.0 * parity).astype(np.complex128)
        mats.append(
            sp.csr_matrix((signs, (occupied ^ bit, occupied)), shape=(dim, dim))
        )
    return mats


@dataclass(frozen=True)
class FermionOperators:
    """Full-space annihilation/creation matrices, one per mode."""

    c: tuple
    c_dag: tuple
    d: tuple
    d_dag: tuple


def fermion_operators(space: HilbertSpace) -> FermionOperators:
    """Particle (c) and antiparticle (d) mode operators embedded in the full space."""
    n_f = space.n_fermion_modes
    bits = _bit_annihilators(2 * n_f)
    eye_b = sp.identity(space.boson_dim, dtype=np.complex128, format="csr")
    full = [sp.kron(eye_b, m, format="csr") for m in bits]
    c = tuple(full[:n_f])
    d = tuple(full[n_f:])
    return FermionOperators(
        c=c,
        c_dag=tuple(m.conjugate().T.tocsr() for m in c),
        d=d,
        d_dag=tuple(m.conjugate().T.tocsr() for m in d),
    )


def _boson_ladder(boson_dim: int) -> sp.csr_matrix:
    return sp.diags(
        np.sqrt(np.arange(1, boson_dim, dtype=float)), 1, format="csr", dtype=np.complex128
    )


def boson_operators(space: HilbertSpace) -> tuple[sp.csr_matrix, sp.csr_matrix]:
    """(b, b_dag) embedded in the full space (truncated at Fock level N_b)."""
    b_small = _boson_ladder(space.boson_dim)
    eye_f = sp.identity(space.fermion_dim, dtype=np.complex128, format="csr")
    b = sp.kron(b_small, eye_f, format="csr")
    return b, b.conjugate().T.tocsr()


def _fermion_bit_energies(space: HilbertSpace, cfg: CavityConfig) -> np.ndarray:
    n_f = space.n_fermion_modes
    states = np.arange(space.fermion_dim)
    energy = np.zeros(space.fermion_dim)
    for p in range(2 * n_f):
        w = mode_frequency(p % n_f, cfg.length)
        energy[(states & (1 << p)) != 0] += w
    return energy


def _interaction_fermion_part(space: HilbertSpace, cfg: CavityConfig) -> sp.csr_matrix:
    """Fermion factor of H_I: scatter (c^dag c + d^dag d) plus pair (dc + d^dag c^dag)."""
    n_f = space.n_fermion_modes
    bits = _bit_annihilators(2 * n_f)
    c = bits[:n_f]
    d = bits[n_f:]
    f = sp.csr_matrix((space.fermion_dim, space.fermion_dim), dtype=np.complex128)
    for n in range(n_f):
        for m in range(n_f):
            s = scatter_coupling(n, m, cfg)
            p = pair_coupling(n, m, cfg)
            f = f + s * (c[n].conjugate().T @ c[m] + d[m].conjugate().T @ d[n])
            if p != 0.0:
                f = f + p * (d[n] @ c[m] + d[m].conjugate().T @ c[n].conjugate().T)
    return f.tocsr()


def build_hamiltonian(
    space: HilbertSpace,
    cfg: CavityConfig,
    drive: DriveSpec | None = None,
    t: float = 0.0,
) -> sp.csr_matrix:
    """H(t) = H0 + eps*H_I + H_dr(t), normal ordered (zero vacuum energy).

    H_dr(t) = conj(lambda(t)) b^dag + lambda(t) b; this conjugation pairing is
    what makes the drive accumulate the displacement parameter Lambda(t) used
    throughout `transitions`.
    """
    if cfg.n_fermion_modes != space.n_fermion_modes:
        raise ValidationError(
            f"config has {cfg.n_fermion_modes} fermion modes, space has {space.n_fermion_modes}"
        )
    pieces = _Assembler(space, cfg)
    if drive is None:
        drive = DriveSpec.off()
    return pieces.at(drive, t)


class _Assembler:
    """Caches the static matrices so time stepping only adds the drive term."""

    def __init__(self, space: HilbertSpace, cfg: CavityConfig):
        if cfg.n_fermion_modes != space.n_fermion_modes:
            raise ValidationError("fermion-mode cutoff mismatch between space and config")
        self.space = space
        self.cfg = cfg
        fenergy = _fermion_bit_energies(space, cfg)
        blevels = cfg.omega_mech * np.arange(space.boson_dim, dtype=float)
        h0_diag = np.add.outer(blevels, fenergy).reshape(-1).astype(np.complex128)
        h0 = sp.diags(h0_diag, format="csr")
        b_small = _boson_ladder(space.boson_dim)
        x_small = b_small + b_small.conjugate().T
        f_part = _interaction_fermion_part(space, cfg)
        h_int = sp.kron(x_small, f_part, format="csr")
        self.h_static = (h0 + cfg.epsilon * h_int).tocsr()
        self.b, self.b_dag = boson_operators(space)
        self.static_norm1 = spla.norm(self.h_static, 1)
        self.ladder_norm1 = math.sqrt(space.n_boson_levels) if space.n_boson_levels else 0.0

    def at(self, drive: DriveSpec, t: float) -> sp.csr_matrix:
        if drive.is_off:
            return self.h_static
        lam = complex(drive_values(drive, np.array([t]), self.cfg.omega_mech)[0])
        if lam == 0:
            return self.h_static
        return (self.h_static + lam.conjugate() * self.b_dag + lam * self.b).tocsr()

    def norm1_bound(self, drive: DriveSpec, times: np.ndarray) -> float:
        bound = self.static_norm1
        if not drive.is_off and times.size:
            lam_max = float(np.max(np.abs(drive_values(drive, times, self.cfg.omega_mech))))
            bound += 2.0 * lam_max * self.ladder_norm1
        return bound


# ---------------------------------------------------------------------------
# states


def basis_state(space: HilbertSpace, boson_level: int, fermion_bits: int = 0) -> np.ndarray:
    psi = np.zeros(space.dim, dtype=np.complex128)
    psi[space.index(boson_level, fermion_bits)] = 1.0
    return psi


def _boson_coefficients(space: HilbertSpace, state: BosonState) -> np.ndarray:
    canon = state.canonical()
    out = np.zeros(space.boson_dim, dtype=np.complex128)
    if canon.variant == "vacuum":
        out[0] = 1.0
        return out
    if canon.variant == "fock":
        if canon.j > space.n_boson_levels:
            raise ValidationError(
                f"Fock level {canon.j} exceeds the boson cutoff {space.n_boson_levels}"
            )
        out[canon.j] = 1.0
        return out
    coh, sq = canon.as_sc()
    return squeezed_coherent_coefficients(coh, sq, space.n_boson_levels)


def embed_state(space: HilbertSpace, boson: BosonState, fermion_bits: int = 0) -> np.ndarray:
    """Product state |boson> (x) |fermion_bits> as a full-space vector."""
    coeffs = _boson_coefficients(space, boson)
    psi = np.zeros(space.dim, dtype=np.complex128)
    psi[fermion_bits :: space.fermion_dim] = coeffs
    return psi


def pair_target(space: HilbertSpace, k: int, k_prime: int, boson: BosonState) -> np.ndarray:
    """|boson> with one particle in mode k and one antiparticle in mode k'."""
    n_f = space.n_fermion_modes
    if not (0 <= k < n_f and 0 <= k_prime < n_f):
        raise ValidationError("pair mode indices outside the cutoff")
    bits = (1 << k) | (1 << (n_f + k_prime))
    return embed_state(space, boson, bits)


# ---------------------------------------------------------------------------
# diagonalization and propagation


def exact_ground_state(space: HilbertSpace, cfg: CavityConfig) -> tuple[float, np.ndarray]:
    """Lowest eigenpair of the static H; largest-magnitude amplitude made real positive."""
    h = build_hamiltonian(space, cfg)
    if space.dim <= _DENSE_CUTOFF:
        vals, vecs = scipy.linalg.eigh(h.toarray())
        energy, state = float(vals[0]), vecs[:, 0]
    else:
        vals, vecs = spla.eigsh(h, k=1, which="SA")
        energy, state = float(vals[0]), vecs[:, 0]
    state = state.astype(np.complex128)
    lead = state[int(np.argmax(np.abs(state)))]
    state = state * (lead.conjugate() / abs(lead))
    return energy, state


def _check_step_size(asm: _Assembler, drive: DriveSpec, midpoints: np.ndarray, dt: float):
    bound = asm.norm1_bound(drive, midpoints)
    if bound * dt >= STEP_NORM_LIMIT:
        need = int(math.ceil(bound * midpoints.size * dt / STEP_NORM_LIMIT)) + 1
        raise StepSizeError(
            f"||H||*dt = {bound * dt:.3f} >= {STEP_NORM_LIMIT}; use n_steps >= {need}"
        )


def _check_norm_drift(psi: np.ndarray, norm0: float):
    drift = abs(float(np.linalg.norm(psi)) / norm0 - 1.0)
    if drift > NORM_DRIFT_TOL:
        raise NormDriftError(f"norm drift {drift:.3e} exceeds {NORM_DRIFT_TOL:.0e}")


def _validate_propagation_args(space, psi0, t_final, n_steps):
    psi0 = np.asarray(psi0, dtype=np.complex128)
    if psi0.shape != (space.dim,):
        raise ValidationError(f"state vector must have shape ({space.dim},)")
    norm0 = float(np.linalg.norm(psi0))
    if norm0 == 0.0:
        raise ValidationError("cannot propagate the zero vector")
    if not (math.isfinite(t_final) and t_final >= 0):
        raise ValidationError("t_final must be finite and >= 0")
    if int(n_steps) != n_steps or n_steps < 1:
        raise ValidationError("n_steps must be an integer >= 1")
    return psi0, norm0


def _step_unitary_apply(h: sp.csr_matrix, dt: float, psi: np.ndarray, dense: bool) -> np.ndarray:
    if dense:
        u = scipy.linalg.expm((-1j * dt) * h.toarray())
        return u @ psi
    return spla.expm_multiply((-1j * dt) * h, psi)


class _DrivenStepper:
    """Applies midpoint-exponential steps, reusing one cached static-step
    unitary wherever the drive amplitude has decayed to nothing."""

    def __init__(self, asm: _Assembler, drive: DriveSpec, midpoints: np.ndarray, dt: float):
        self.asm = asm
        self.dt = dt
        self.dense = asm.space.dim <= _DENSE_CUTOFF
        self.lam_mid = drive_values(drive, midpoints, asm.cfg.omega_mech)
        self.tiny = _DRIVE_NEGLIGIBLE * max(1.0, asm.static_norm1)
        self._u_static = None

    def apply(self, step_index: int, psi: np.ndarray) -> np.ndarray:
        lam = complex(self.lam_mid[step_index])
        if abs(lam) <= self.tiny:
            if not self.dense:
                return spla.expm_multiply((-1j * self.dt) * self.asm.h_static, psi)
            if self._u_static is None:
                self._u_static = scipy.linalg.expm(
                    (-1j * self.dt) * self.asm.h_static.toarray()
                )
            return self._u_static @ psi
        h = self.asm.h_static + lam.conjugate() * self.asm.b_dag + lam * self.asm.b
        return _step_unitary_apply(h.tocsr(), self.dt, psi, self.dense)


def propagate(
    space: HilbertSpace,
    cfg: CavityConfig,
    drive: DriveSpec,
    psi0: np.ndarray,
    t_final: float,
    n_steps: int,
) -> np.ndarray:
    """Midpoint-exponential propagation of psi0 through [0, t_final].

    Each step applies exp(-i H(t_mid) dt); with the drive off all steps share
    one eigendecomposition.  Raises if the per-step norm bound ||H||*dt >= 0.5
    or if the final norm drifts by more than 1e-9 relative.
    """
    psi0, norm0 = _validate_propagation_args(space, psi0, t_final, n_steps)
    if t_final == 0.0:
        return psi0.copy()
    dt = t_final / n_steps
    asm = _Assembler(space, cfg)
    midpoints = (np.arange(n_steps) + 0.5) * dt
    _check_step_size(asm, drive, midpoints, dt)
    if drive.is_off:
        vals, vecs = scipy.linalg.eigh(asm.h_static.toarray())
        coeff = vecs.conjugate().T @ psi0
        coeff = coeff * np.exp(-1j * vals * t_final)
        psi = vecs @ coeff
    else:
        stepper = _DrivenStepper(asm, drive, midpoints, dt)
        psi = psi0.copy()
        for i in range(n_steps):
            psi = stepper.apply(i, psi)
    _check_norm_drift(psi, norm0)
    return psi


def propagate_series(
    space: HilbertSpace,
    cfg: CavityConfig,
    drive: DriveSpec,
    psi0: np.ndarray,
    targets,
    t_final: float,
    n_steps: int,
    record_every: int = 1,
):
    """Propagate while recording |<target_i|psi(t)>|^2 and the state norm.

    Returns (times, probs, norms) with probs of shape (n_records, n_targets);
    records are taken at step 0 and every `record_every` steps (n_steps must
    be a multiple of record_every).
    """
    psi0, norm0 = _validate_propagation_args(space, psi0, t_final, n_steps)
    if int(record_every) != record_every or record_every < 1:
        raise ValidationError("record_every must be an integer >= 1")
    if n_steps % record_every:
        raise ValidationError("n_steps must be a multiple of record_every")
    targ = np.asarray(targets, dtype=np.complex128)
    if targ.ndim == 1:
        targ = targ[np.newaxis, :]
    if targ.shape[1] != space.dim:
        raise ValidationError(f"target vectors must have length {space.dim}")
    dt = t_final / n_steps if n_steps else 0.0
    asm = _Assembler(space, cfg)
    midpoints = (np.arange(n_steps) + 0.5) * dt
    if t_final > 0.0:
        _check_step_size(asm, drive, midpoints, dt)
    rec_steps = np.arange(0, n_steps + 1, record_every)
    times = rec_steps * dt
    probs = np.empty((rec_steps.size, targ.shape[0]))
    norms = np.empty(rec_steps.size)

    if drive.is_off:
        vals, vecs = scipy.linalg.eigh(asm.h_static.toarray())
        coeff0 = vecs.conjugate().T @ psi0
        targ_e = targ @ vecs.conjugate()
        for i, step in enumerate(rec_steps):
            coeff = coeff0 * np.exp(-1j * vals * (step * dt))
            probs[i] = np.abs(targ_e @ coeff) ** 2
            norms[i] = float(np.linalg.norm(coeff))
        psi_final_norm = norms[-1]
    else:
        stepper = _DrivenStepper(asm, drive, midpoints, dt)
        psi = psi0.copy()
        probs[0] = np.abs(targ.conjugate() @ psi) ** 2
        norms[0] = norm0
        rec_i = 1
        for step in range(1, n_steps + 1):
            psi = stepper.apply(step - 1, psi)
            if step % record_every == 0:
                probs[rec_i] = np.abs(targ.conjugate() @ psi) ** 2
                norms[rec_i] = float(np.linalg.norm(psi))
                rec_i += 1
        psi_final_norm = norms[-1]
    if abs(psi_final_norm / norm0 - 1.0) > NORM_DRIFT_TOL:
        raise NormDriftError(
            f"norm drift {abs(psi_final_norm / norm0 - 1.0):.3e} exceeds {NORM_DRIFT_TOL:.0e}"
        )
    return times, probs, norms


def transition_series(
    spec: TransitionSpec,
    n_boson_levels: int,
    t_final: float,
    n_steps: int,
    record_every: int = 1,
):
    """Exact P(t) for a TransitionSpec: initial wall state with no fermions
    against the target wall state with the (k, k') pair present.

    Returns (times, probabilities, norms)."""
    space = build_space(n_boson_levels, spec.cfg.n_fermion_modes)
    psi0 = embed_state(space, spec.initial, 0)
    target = pair_target(space, spec.k, spec.k_prime, spec.final)
    times, probs, norms = propagate_series(
        space, spec.cfg, spec.drive, psi0, [target], t_final, n_steps, record_every
    )
    return times, probs[:, 0], norms


def oracle_probability(
    spec: TransitionSpec,
    t: float,
    n_boson_levels: int = 4,
    n_steps: int | None = None,
) -> TransitionResult:
    """Non-perturbative P(t) from propagation, tagged "oracle".

    n_steps defaults to the smallest count honoring the step-size contract.
    """
    space = build_space(n_boson_levels, spec.cfg.n_fermion_modes)
    asm = _Assembler(space, spec.cfg)
    if n_steps is None:
        probe = np.linspace(0.0, max(t, 1e-12), 257)
        bound = asm.norm1_bound(spec.drive, probe)
        n_steps = max(16, int(math.ceil(bound * t / (0.8 * STEP_NORM_LIMIT))) + 1)
    psi0 = embed_state(space, spec.initial, 0)
    target = pair_target(space, spec.k, spec.k_prime, spec.final)
    psi = propagate(space, spec.cfg, spec.drive, psi0, t, n_steps)
    p = float(abs(np.vdot(target, psi)) ** 2)
    return TransitionResult(probability=p, time=float(t), formula="oracle", resonant=is_resonant(spec))


# ---------------------------------------------------------------------------
# first-order Dyson amplitude


def dyson1_amplitude(spec: TransitionSpec, t: float, n_quad: int = 64) -> complex:
    """First-order Dyson amplitude in the exact displacement frame.

    A(t) = -i eps q e^(-i w t) <f| e^(-i Om t N) U_dr(t)
           int_0^t e^(i w t') [b^dag e^(i Om t') + b e^(-i Om t') + 2 xi(t')] dt' |i>

    with q the pair coupling and w = omega_k + omega_k'.  The frame overlap
    uses the conjugated displacement parameter, the scalar term is 2 xi, and
    the whole integrand goes through quadrature; the sinc decompositions in
    `transitions` never enter, making this an independent check of them.
    """
    if not (math.isfinite(t) and t >= 0):
        raise ValidationError("t must be finite and >= 0")
    if n_quad < 64:
        raise ValidationError("n_quad must be >= 64")
    w = spec.omega_sum
    om = spec.cfg.omega_mech
    q = pair_coupling(spec.k, spec.k_prime, spec.cfg)
    if t == 0.0 or spec.cfg.epsilon == 0.0 or q == 0.0:
        return 0j
    lam_t = displacement_parameter(spec.drive, t, om, n_quad)
    y1, y2, y3 = _chi_triple(spec.initial, spec.final, lam_t.conjugate(), om, t)

    def _eval(n):
        ts, cum = _lambda_profile(spec.drive, t, om, n)
        xi_nodes = cum.real * np.cos(om * ts) - cum.imag * np.sin(om * ts)
        integrand = np.exp(1j * w * ts) * (
            y1 * np.exp(1j * om * ts) + y2 * np.exp(-1j * om * ts) + y3 * 2.0 * xi_nodes
        )
        return complex(simpson(integrand.real, x=ts) + 1j * simpson(integrand.imag, x=ts))

    total = _refine(_eval, n_quad)
    return -1j * spec.cfg.epsilon * q * cmath.exp(-1j * w * t) * total


def dyson1_probability(spec: TransitionSpec, t: float, n_quad: int = 64) -> TransitionResult:
    """|dyson1_amplitude|^2 as a TransitionResult tagged "dyson1"."""
    amp = dyson1_amplitude(spec, t, n_quad)
    return TransitionResult(
        probability=float(abs(amp) ** 2),
        time=float(t),
        formula="dyson1",
        resonant=is_resonant(spec),
    )
