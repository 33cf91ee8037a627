"""Spin and Dirac-mode toolkit for rotating frames and circularly polarized fields.

Submodules:

* ``clifford``: Dirac matrices in two representations, closed-form exponentials.
* ``frame``: the Lorentz-type rotating-frame transform and its spinor operators.
* ``pauli``: averaged-spin dynamics near magnetic resonance.
* ``dirac_wave``: localized Dirac modes in a traveling circular wave.
* ``oracles``: numerical referees (finite-difference residuals, quadrature, root scans).
* ``suite``: the verification checks behind ``spinrotor verify``.
"""
from .clifford import DIRAC_PAULI, WEYL, DiracSet, dirac_matrices, mat_exp
from .dirac_wave import (
    CALIBRATED,
    Conventions,
    ModeSolution,
    WaveConfig,
    all_modes,
    assemble_wavefunction,
    characteristic_roots,
    derived_params,
    si_to_normalized,
    singular_momentum,
    singular_pair,
    spin_expectation,
)
from .errors import SpinrotorError
from .frame import CylEvent, FrameParams, apply, build_transform, frame_spinor_operators
from .pauli import PauliConfig, SpinVector, integrate_spin, to_lab_frame

__version__ = "0.1.0"

__all__ = [
    "CALIBRATED",
    "Conventions",
    "CylEvent",
    "DIRAC_PAULI",
    "DiracSet",
    "FrameParams",
    "ModeSolution",
    "PauliConfig",
    "SpinVector",
    "SpinrotorError",
    "WEYL",
    "WaveConfig",
    "all_modes",
    "apply",
    "assemble_wavefunction",
    "build_transform",
    "characteristic_roots",
    "derived_params",
    "dirac_matrices",
    "frame_spinor_operators",
    "integrate_spin",
    "mat_exp",
    "si_to_normalized",
    "singular_momentum",
    "singular_pair",
    "spin_expectation",
    "to_lab_frame",
]
