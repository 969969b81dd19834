"""Quantized fermion bag with a vibrating wall.

A massless spinor field confined between two walls, one of which carries a
quantized vibrational mode (frequency Omega) and an optional external drive.
The package evaluates the closed-form perturbative predictions of the model
(ground-state dressing, vacuum energy shift, boson-to-fermion-pair transition
probabilities) and cross-checks them against exact evolution on a truncated
Fock (x) fermion Hilbert space.

Natural units hbar = c = 1 throughout.
"""

__version__ = "0.1.0"

from . import specfun, model, perturbation, transitions, fock_oracle  # noqa: F401
