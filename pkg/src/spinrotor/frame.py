"""Linear transformation to a frame rotating about the z axis.

Coordinates are ``(phi, z, t)`` at a fixed cylindrical radius ``r``, all in
Compton units (lengths and times in units of hbar/(m c), frequencies in
units of m c**2/hbar). The radius is a parameter of the map and is never
transformed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .clifford import DiracSet, dirac_matrices, mat_exp
from .errors import (
    DomainError,
    RadiusBoundError,
    SingularMapError,
    UnsupportedParameterError,
)

# Sign in front of the (r phi, z) rotation generator: P_Phi1 = exp(s/2 alpha2 alpha3 Phi1)
# with sin(Phi1) = -r Omega. s = -1 is the sign for which the reduced Dirac
# operator is covariant under the coordinate map (checked by
# oracles.rotating_frame_invariance_residual); s = +1 fails that check.
ROTATION_GENERATOR_SIGN = -1


@dataclass(frozen=True)
class FrameParams:
    r: float
    Omega: float
    v: float = 0.0

    def __post_init__(self):
        for name in ("r", "Omega", "v"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"FrameParams.{name} must be finite")
        if self.r < 0:
            raise DomainError("FrameParams.r must be non-negative")
        if abs(self.v) >= 1:
            raise DomainError("FrameParams.v must satisfy |v| < 1")

    @property
    def rw2(self) -> float:
        """Squared tangential speed r**2 Omega**2 (units of c**2)."""
        return (self.r * self.Omega) ** 2

    def check_radius_bound(self) -> None:
        if self.rw2 >= 1:
            raise RadiusBoundError(
                f"r^2 Omega^2 = {self.rw2:.17g} >= 1: the rotating point would move at or above c"
            )


@dataclass(frozen=True)
class CylEvent:
    phi: float
    z: float
    t: float
    r: float

    def vector(self) -> np.ndarray:
        return np.array([self.phi, self.z, self.t], dtype=float)


@dataclass(frozen=True)
class FrameTransform:
    """``a`` acts on the column ``(phi, z, t)``."""

    a: np.ndarray
    r: float
    params: FrameParams

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.a))

    def inverse(self) -> "FrameTransform":
        return FrameTransform(np.linalg.inv(self.a), self.r, self.params)

    def constraint_defects(self) -> tuple[float, float]:
        """Violations of the light-cone constraints a21 = a31 and
        a22 + a23 = a32 + a33."""
        a = self.a
        return (abs(a[1, 0] - a[2, 0]), abs(a[1, 1] + a[1, 2] - a[2, 1] - a[2, 2]))


def build_transform(params: FrameParams) -> FrameTransform:
    params.check_radius_bound()
    if params.v != 0:
        raise UnsupportedParameterError(
            "the composed transform is only defined for v = 0; "
            "use time_dilation_ratios for general v"
        )
    r, w = params.r, params.Omega
    root = math.sqrt(1.0 - params.rw2)
    a = np.array(
        [
            [1.0, w, -w],
            [-r * r * w / root, root, r * r * w * w / root],
            [-r * r * w / root, 0.0, 1.0 / root],
        ]
    )
    return FrameTransform(a=a, r=r, params=params)


def apply(tf: FrameTransform, e: CylEvent) -> CylEvent:
    if not math.isclose(e.r, tf.r, rel_tol=1e-15, abs_tol=0.0):
        raise DomainError(f"event radius {e.r} does not match transform radius {tf.r}")
    phi, z, t = tf.a @ e.vector()
    return CylEvent(float(phi), float(z), float(t), e.r)


def quadratic_invariant(e: CylEvent) -> float:
    return e.r**2 * e.phi**2 + e.z**2 - e.t**2


def galilean_map(e: CylEvent, Omega: float) -> CylEvent:
    return replace(e, phi=e.phi - Omega * e.t)


def dalembertian_fd(f: Callable[[float, float, float], float], point, r: float, step: float) -> float:
    """(1/r^2) f_phiphi + f_zz - f_tt by second-order central differences."""
    x0 = np.asarray(point, dtype=float)
    f0 = f(*x0)
    weights = (1.0 / r**2, 1.0, -1.0)
    total = 0.0
    for k, wk in enumerate(weights):
        dx = np.zeros(3)
        dx[k] = step
        total += wk * (f(*(x0 + dx)) - 2.0 * f0 + f(*(x0 - dx))) / step**2
    return total


def dalembert_invariance_check(f, params: FrameParams, point, step: float) -> float:
    """|box f (lab) - box f (rotating)| at ``point``.

    ``f`` is a function of lab coordinates ``(phi, z, t)``; in the rotating
    frame it is evaluated through the inverse map, so the difference is
    zero up to the O(step**2) finite-difference error.
    """
    if not step > 0:
        raise DomainError("step must be positive")
    tf = build_transform(params)
    inv = np.linalg.inv(tf.a)

    def f_rot(phi_t, z_t, t_t):
        return f(*(inv @ np.array([phi_t, z_t, t_t])))

    x0 = np.asarray(point, dtype=float)
    lab = dalembertian_fd(f, x0, params.r, step)
    rot = dalembertian_fd(f_rot, tf.a @ x0, params.r, step)
    return abs(lab - rot)


def time_dilation_ratios(params: FrameParams) -> tuple[float, float]:
    """Return (dt_rot/dt at fixed rotating-frame position,
    dt_rot/dt at fixed lab position); ``params.v`` is the longitudinal
    velocity of the frame."""
    params.check_radius_bound()
    nu = params.v
    num = 1.0 - nu * params.rw2
    if num == 0:
        raise SingularMapError("1 - v r^2 Omega^2 vanishes")
    den = math.sqrt(1.0 - nu * nu) * math.sqrt(1.0 - params.rw2)
    return den / num, num / den


def kinematic_map(omega: float, v: float, params: FrameParams) -> tuple[float, float]:
    """Angular frequency and longitudinal velocity seen in the rotating frame."""
    params.check_radius_bound()
    r2w = params.r**2 * params.Omega
    den = 1.0 - r2w * omega
    if abs(den) < 1e-300:
        raise SingularMapError("1 - r^2 Omega omega vanishes")
    rw2 = params.rw2
    omega_rot = (omega + v * params.Omega - params.Omega) * math.sqrt(1.0 - rw2) / den
    v_rot = (-r2w * omega + v * (1.0 - rw2) + rw2) / den
    return omega_rot, v_rot


@dataclass(frozen=True)
class SpinorFrameOps:
    P: np.ndarray
    P_tilde: np.ndarray
    P_phi: np.ndarray
    P_phi1: np.ndarray
    Phi: float
    Phi1: float
    P_tilde_exp_sum: np.ndarray = field(repr=False)

    @property
    def exp_sum_discrepancy(self) -> float:
        """max |beta P beta - exp(sum of generators)|; non-zero because the
        two generators anticommute."""
        return float(np.max(np.abs(self.P_tilde - self.P_tilde_exp_sum)))


def frame_spinor_operators(
    params: FrameParams,
    dirac: DiracSet | None = None,
    rotation_sign: int = ROTATION_GENERATOR_SIGN,
) -> SpinorFrameOps:
    params.check_radius_bound()
    ds = dirac if dirac is not None else dirac_matrices()
    rw = params.r * params.Omega
    Phi = math.atanh(rw)  # cosh = 1/sqrt(1 - r^2 W^2), sinh = rW/sqrt(...)
    Phi1 = math.asin(-rw)
    boost_gen = 0.5 * Phi * ds.alpha2
    rot_gen = rotation_sign * 0.5 * Phi1 * (ds.alpha2 @ ds.alpha3)
    P_phi = mat_exp(boost_gen)
    P_phi1 = mat_exp(rot_gen)
    P = P_phi1 @ P_phi
    P_tilde = ds.beta @ P @ ds.beta
    return SpinorFrameOps(
        P=P,
        P_tilde=P_tilde,
        P_phi=P_phi,
        P_phi1=P_phi1,
        Phi=Phi,
        Phi1=Phi1,
        P_tilde_exp_sum=mat_exp(rot_gen - boost_gen),
    )
