"""Exact localized Dirac modes in a circularly polarized wave plus a constant
magnetic field.

The wave travels along the constant field ``Hz`` with frequency and
propagation constant ``Omega``; its amplitude is ``H``. In normalized units
the ground-state mode is::

    Psi = exp[-i E t + i p z - 1/2 alpha1 alpha2 (Omega t - Omega z) + D] N psi
    D   = -d/2 r^2 - i d2 x~ + d2 y~

with ``(x~, y~)`` the transverse coordinates rotated by ``Omega t - Omega z``,
``d = -Hz/2`` and ``Ecal = E - p`` a root of a cubic.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass, field

import numpy as np
import scipy.constants as const

from .clifford import DIRAC_PAULI, DiracSet, dirac_matrices, scalar_square
from .errors import (
    DegeneratePairError,
    DomainError,
    NonNormalizableError,
)

PLUS_SINGULAR = "plus-singular"
MINUS_SINGULAR = "minus-singular"
REGULAR = "regular"

D2_PLAIN = "plain"  # d2 = E0 h / (2 (Ecal - E0))
D2_OVER_OMEGA = "over-omega"  # the same divided by Omega


@dataclass(frozen=True)
class Conventions:
    """Choices left open by the closed-form solution.

    The defaults are the ones singled out by the residual and quadrature
    oracles (see ``oracles.calibrate``).
    """

    representation: str = DIRAC_PAULI
    d2_convention: str = D2_PLAIN
    d2_sign: int = 1
    norm_factor: float = 2.0  # psi^dagger psi = norm_factor * bracket

    def as_dict(self) -> dict:
        return asdict(self)


CALIBRATED = Conventions()


@dataclass(frozen=True)
class WaveConfig:
    Hz: float
    H: float
    Omega: float

    def __post_init__(self):
        for name in ("Hz", "H", "Omega"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"WaveConfig.{name} must be finite")
        if self.Omega == 0:
            raise DomainError("WaveConfig.Omega must be non-zero")
        if self.H < 0:
            raise DomainError("WaveConfig.H must be non-negative")


@dataclass(frozen=True)
class DerivedParams:
    d: float
    h: float
    E0: float


def derived_params(cfg: WaveConfig) -> DerivedParams:
    d = -0.5 * cfg.Hz
    if d <= 0:
        raise NonNormalizableError(
            f"d = -Hz/2 = {d!r} <= 0: the transverse Gaussian does not decay"
        )
    return DerivedParams(d=d, h=cfg.H / cfg.Omega, E0=2.0 * d / cfg.Omega)


def g_factor_to_E0(g: float) -> float:
    return 2.0 / g


# ---------------------------------------------------------------- the cubic


def cubic_coefficients(E0: float, h: float, A: float) -> np.ndarray:
    """Coefficients (highest first) of (x^2 + A x - 1)(x - E0) - h^2 x."""
    return np.array([1.0, A - E0, -1.0 - A * E0 - h * h, E0])


def polyval_residual(coeffs: np.ndarray, x) -> np.ndarray:
    """|P(x)| divided by sum |c_k| |x|^k (scale-free backward error)."""
    x = np.asarray(x, dtype=complex)
    val = np.polyval(coeffs, x)
    scale = np.polyval(np.abs(coeffs), np.abs(x))
    return np.abs(val) / np.maximum(scale, 1e-300)


def _newton_polish(coeffs: np.ndarray, x: complex, steps: int = 3) -> complex:
    dcoeffs = np.polyder(coeffs)
    best = x
    best_val = abs(np.polyval(coeffs, x))
    for _ in range(steps):
        dp = np.polyval(dcoeffs, x)
        if dp == 0:
            break
        x = x - np.polyval(coeffs, x) / dp
        val = abs(np.polyval(coeffs, x))
        if val < best_val:
            best, best_val = x, val
        else:
            break
    return best


@dataclass(frozen=True)
class CubicRoots:
    roots: np.ndarray  # complex, sorted by (real, imag)
    coeffs: np.ndarray
    poles: np.ndarray  # roots sitting on the pole Ecal = E0 of the rational form

    def residuals(self) -> np.ndarray:
        return np.abs(np.polyval(self.coeffs, self.roots))

    def real_roots(self, tol: float = 1e-12) -> np.ndarray:
        r = self.roots
        mask = np.abs(r.imag) <= tol * np.maximum(1.0, np.abs(r.real))
        return np.sort(r[mask].real)


def companion_roots(coeffs) -> np.ndarray:
    c = np.asarray(coeffs, dtype=float)
    c = c / c[0]
    n = len(c) - 1
    comp = np.zeros((n, n))
    comp[0, :] = -c[1:]
    comp[1:, :-1] = np.eye(n - 1)
    eig = np.linalg.eigvals(comp)
    out = np.array([_newton_polish(c, complex(z)) for z in eig])
    # a real cubic has conjugate pairs; snap tiny imaginary parts from rounding
    small = np.abs(out.imag) <= 1e-13 * np.maximum(1.0, np.abs(out.real))
    out[small] = out[small].real
    return out[np.lexsort((out.imag, out.real))]


def characteristic_roots(E0: float, h: float, p: float, Omega: float) -> CubicRoots:
    A = 2.0 * p - Omega
    coeffs = cubic_coefficients(E0, h, A)
    roots = companion_roots(coeffs)
    poles = (np.abs(roots - E0) < 1e-14) & (h != 0)
    return CubicRoots(roots=roots, coeffs=coeffs, poles=poles)


def rational_residual(Ecal, E0: float, h: float, p: float, Omega: float):
    """Left-hand side of the uncleared characteristic equation."""
    Ecal = np.asarray(Ecal)
    return Ecal * (Ecal + 2 * p - Omega) - 1.0 - Ecal * h * h / (Ecal - E0)


def cardano_roots(coeffs) -> np.ndarray:
    """Closed-form roots of a cubic; ill-conditioned near double roots, kept
    only as a cross-check of the companion-matrix path."""
    a, b, c, d = (complex(x) for x in coeffs)
    b, c, d = b / a, c / a, d / a
    p = c - b * b / 3
    q = 2 * b**3 / 27 - b * c / 3 + d
    disc = (q / 2) ** 2 + (p / 3) ** 3
    sq = disc**0.5
    u = (-q / 2 + sq) ** (1 / 3)
    if abs(u) < 1e-300:
        u = (-q / 2 - sq) ** (1 / 3)
    omega = complex(-0.5, math.sqrt(3) / 2)
    roots = []
    for k in range(3):
        uk = u * omega**k
        vk = -p / (3 * uk) if abs(uk) > 1e-300 else 0.0
        roots.append(uk + vk - b / 3)
    out = np.array(roots)
    return out[np.lexsort((out.imag, out.real))]


def singular_momentum(E0: float, Omega: float, corrected: bool = True) -> float:
    """Momentum at which Ecal = E0 is a double root of the h = 0 cubic.

    ``corrected=False`` gives 1/E0 - E0 + Omega/2, which lacks the factor 1/2
    on the first two terms and does not produce a double root; it is kept
    for comparison only.
    """
    if E0 == 0:
        raise DomainError("E0 must be non-zero")
    scale = 0.5 if corrected else 1.0
    return scale * (1.0 / E0 - E0) + 0.5 * Omega


def singular_energy_leading(E0: float, Omega: float) -> float:
    return 0.5 * (1.0 / E0 + E0) + 0.5 * Omega


def leading_split(E0: float) -> float:
    """First-order coefficient of the pair split: E0 / sqrt(E0^2 + 1)."""
    return E0 / math.sqrt(E0 * E0 + 1.0)


# ---------------------------------------------------------------- spinor


def ground_state_spinor(Ecal, E0: float, h: float) -> np.ndarray:
    """Unnormalized constant spinor of the ground state."""
    Ecal = complex(Ecal) if np.iscomplexobj(Ecal) else float(Ecal)
    delta = Ecal - E0
    return np.array(
        [h * Ecal, -(Ecal + 1) * delta, h * Ecal, -(Ecal - 1) * delta],
        dtype=complex,
    )


def spinor_bracket(Ecal: float, E0: float, h: float) -> float:
    """h^2 Ecal^2 + (Ecal^2 + 1)(Ecal - E0)^2; psi^dagger psi is twice this."""
    return h * h * Ecal * Ecal + (Ecal * Ecal + 1.0) * (Ecal - E0) ** 2


def d2_value(Ecal: float, E0: float, h: float, Omega: float, conventions: Conventions = CALIBRATED) -> float:
    delta = Ecal - E0
    if delta == 0:
        raise DegeneratePairError("d2 is undefined at Ecal = E0")
    d2 = E0 * h / (2.0 * delta)
    if conventions.d2_convention == D2_OVER_OMEGA:
        d2 /= Omega
    elif conventions.d2_convention != D2_PLAIN:
        raise DomainError(f"unknown d2 convention {conventions.d2_convention!r}")
    return conventions.d2_sign * d2


def d2_leading(E0: float, branch: str) -> float:
    s = 1.0 if branch == PLUS_SINGULAR else -1.0
    return s * math.sqrt(E0 * E0 + 1.0) / 2.0


def normalization_constant(bracket: float, d: float, d2: float, norm_factor: float = CALIBRATED.norm_factor) -> float:
    """N > 0 with N^2 * norm_factor * bracket * (pi/d) exp(d2^2/d) = 1.

    ``norm_factor = 1`` is the bare bracket form; the transverse integral of
    |Psi|^2 needs ``norm_factor = 2`` because psi^dagger psi = 2 * bracket.
    """
    if d <= 0:
        raise NonNormalizableError("d must be positive")
    if bracket <= 0:
        raise DegeneratePairError("zero spinor: bracket vanishes")
    log_n2 = -(math.log(norm_factor * bracket) + math.log(math.pi / d) + d2 * d2 / d)
    return math.exp(0.5 * log_n2)


# ---------------------------------------------------------------- modes


@dataclass(frozen=True)
class ModeSolution:
    Ecal: float
    p: float
    E: float
    psi: np.ndarray = field(repr=False)  # unnormalized spinor shape
    N: float
    d2: float
    branch: str
    E0: float
    h: float
    d: float
    Omega: float
    conventions: Conventions = CALIBRATED

    @property
    def spinor(self) -> np.ndarray:
        return self.N * self.psi

    @property
    def bracket(self) -> float:
        return spinor_bracket(self.Ecal, self.E0, self.h)

    def with_Ecal(self, Ecal: float) -> "ModeSolution":
        """Same mode data with Ecal replaced (keeps p); used by negative controls."""
        psi = ground_state_spinor(Ecal, self.E0, self.h)
        return ModeSolution(
            Ecal=Ecal, p=self.p, E=Ecal + self.p, psi=psi, N=self.N, d2=self.d2,
            branch=self.branch, E0=self.E0, h=self.h, d=self.d, Omega=self.Omega,
            conventions=self.conventions,
        )


def make_mode(
    cfg: WaveConfig,
    Ecal: float,
    p: float,
    branch: str = REGULAR,
    conventions: Conventions = CALIBRATED,
    d2: float | None = None,
) -> ModeSolution:
    dp = derived_params(cfg)
    if d2 is None:
        d2 = d2_value(Ecal, dp.E0, dp.h, cfg.Omega, conventions)
    bracket = spinor_bracket(Ecal, dp.E0, dp.h)
    N = normalization_constant(bracket, dp.d, d2, conventions.norm_factor)
    return ModeSolution(
        Ecal=float(Ecal),
        p=float(p),
        E=float(Ecal + p),
        psi=ground_state_spinor(Ecal, dp.E0, dp.h),
        N=N,
        d2=float(d2),
        branch=branch,
        E0=dp.E0,
        h=dp.h,
        d=dp.d,
        Omega=cfg.Omega,
        conventions=conventions,
    )


def wave_config_from(E0: float, h: float, Omega: float) -> WaveConfig:
    """Inverse of derived_params: Hz = -E0 Omega, H = h Omega."""
    return WaveConfig(Hz=-E0 * Omega, H=h * Omega, Omega=Omega)


def singular_pair(
    E0: float,
    h: float,
    Omega: float,
    conventions: Conventions = CALIBRATED,
    d2_mode: str = "exact",
    corrected: bool = True,
) -> tuple[ModeSolution, ModeSolution]:
    """The two modes whose Ecal split linearly in h around the double root E0.

    Returns (plus, minus), plus having Ecal > E0. ``d2_mode="leading"`` uses
    the first-order value +-sqrt(E0^2 + 1)/2 instead of the exact one.
    """
    if not h > 0:
        raise DomainError("singular_pair needs h > 0")
    if not E0 > 0:
        raise DomainError("singular_pair needs E0 > 0")
    if h > 0.1:
        warnings.warn(f"h = {h} is not small; the pair expansion may be poor", stacklevel=2)
    cfg = wave_config_from(E0, h, Omega)
    p = singular_momentum(E0, Omega, corrected=corrected)
    cr = characteristic_roots(E0, h, p, Omega)
    order = np.argsort(np.abs(cr.roots - E0))
    near = cr.roots[order[:2]]
    if np.any(np.abs(near.imag) > 1e-12 * max(1.0, E0)):
        raise DegeneratePairError(f"pair roots are complex: {near}")
    lo, hi = sorted(near.real)
    if not (lo < E0 < hi) or hi - lo < 1e-14 * max(1.0, E0):
        raise DegeneratePairError(f"pair does not straddle E0: {lo}, {hi}")
    modes = []
    for Ecal, branch in ((hi, PLUS_SINGULAR), (lo, MINUS_SINGULAR)):
        d2 = None
        if d2_mode == "leading":
            d2 = conventions.d2_sign * d2_leading(E0, branch)
        elif d2_mode != "exact":
            raise DomainError(f"unknown d2_mode {d2_mode!r}")
        modes.append(make_mode(cfg, Ecal, p, branch, conventions, d2))
    return modes[0], modes[1]


def all_modes(
    cfg: WaveConfig,
    p: float | None = None,
    conventions: Conventions = CALIBRATED,
) -> tuple[CubicRoots, list[ModeSolution]]:
    """Every real root of the cubic turned into a mode.

    With ``p=None`` the singular momentum is used and the two roots closest
    to E0 are labelled as the singular pair.
    """
    dp = derived_params(cfg)
    singular = p is None
    if singular:
        p = singular_momentum(dp.E0, cfg.Omega)
    cr = characteristic_roots(dp.E0, dp.h, p, cfg.Omega)
    real = cr.real_roots()
    labels = {}
    if singular and len(real) == 3:
        near = sorted(np.argsort(np.abs(real - dp.E0))[:2])
        lo, hi = real[near[0]], real[near[1]]
        if lo < dp.E0 < hi:
            labels[near[1]] = PLUS_SINGULAR
            labels[near[0]] = MINUS_SINGULAR
    modes = []
    for k, Ecal in enumerate(real):
        if Ecal == dp.E0:
            continue
        modes.append(make_mode(cfg, Ecal, p, labels.get(k, REGULAR), conventions))
    return cr, modes


# ---------------------------------------------------------------- wavefunction


def _half_angle_rotation(ds: DiracSet, theta: np.ndarray) -> np.ndarray:
    """exp(-1/2 alpha1 alpha2 theta) for an array of angles, shape (..., 4, 4)."""
    gen = ds.alpha1 @ ds.alpha2
    c = scalar_square(gen)
    if c is None or abs(c + 1) > 1e-12:
        raise DomainError("alpha1 alpha2 must square to -1")
    theta = np.asarray(theta, dtype=float)[..., None, None]
    return np.cos(theta / 2) * np.eye(4) - np.sin(theta / 2) * gen


def assemble_wavefunction(mode: ModeSolution, x, y, z, t, dirac: DiracSet | None = None) -> np.ndarray:
    """Psi at lab-frame points; arguments broadcast, result has shape (..., 4)."""
    ds = dirac if dirac is not None else dirac_matrices(mode.conventions.representation)
    x, y, z, t = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (x, y, z, t)))
    theta = mode.Omega * (t - z)
    # x~ + i y~ = exp(-i theta) (x + i y)
    xi = np.exp(-1j * theta) * (x + 1j * y)
    D = -0.5 * mode.d * (x * x + y * y) - 1j * mode.d2 * xi
    scalar = np.exp(-1j * mode.E * t + 1j * mode.p * z + D)
    rot = _half_angle_rotation(ds, theta)
    return scalar[..., None] * (rot @ mode.spinor)


def vector_potential(cfg: WaveConfig, x, y, z, t) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    theta = cfg.Omega * (np.asarray(t) - np.asarray(z))
    ax = -0.5 * cfg.Hz * np.asarray(y) + cfg.H / cfg.Omega * np.cos(theta)
    ay = 0.5 * cfg.Hz * np.asarray(x) + cfg.H / cfg.Omega * np.sin(theta)
    return ax, ay, np.zeros_like(ax)


# ---------------------------------------------------------------- spin


@dataclass(frozen=True)
class SpinObservable:
    """Averaged spin of one mode: s1 = sign*amp cos(Omega(t - z)),
    s2 = sign*amp sin(Omega(t - z)), s3 constant."""

    amp_perp: float
    s3: float
    phase_sign: int
    Omega: float = 1.0

    def components(self, t, z=0.0) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        theta = self.Omega * (np.asarray(t, dtype=float) - np.asarray(z, dtype=float))
        a = self.phase_sign * self.amp_perp
        return a * np.cos(theta), a * np.sin(theta), np.full_like(theta, self.s3)


def spin_expectation(mode: ModeSolution) -> SpinObservable:
    bracket = mode.bracket
    if bracket <= 0:
        raise DegeneratePairError("degenerate spinor: bracket vanishes")
    E, delta, h = mode.Ecal, mode.Ecal - mode.E0, mode.h
    signed = h * E * E * delta / bracket
    s3 = 0.5 * (h * h * E * E - (E * E + 1.0) * delta**2) / bracket
    return SpinObservable(
        amp_perp=abs(signed),
        s3=s3,
        phase_sign=-1 if signed >= 0 else 1,
        Omega=mode.Omega,
    )


def singular_amplitude(g: float) -> float:
    return 1.0 / math.sqrt(4.0 + g * g)


# ---------------------------------------------------------------- units


@dataclass(frozen=True)
class Particle:
    name: str
    mass: float  # kg
    charge: float  # C, signed

    @property
    def reduced_compton(self) -> float:
        return const.hbar / (self.mass * const.c)

    @property
    def critical_field(self) -> float:
        """m^2 c^2 / (hbar |e|) in tesla: one normalized field unit."""
        return self.mass**2 * const.c**2 / (const.hbar * abs(self.charge))


PARTICLES = {
    "electron": Particle("electron", const.m_e, -const.e),
    "muon": Particle("muon", const.physical_constants["muon mass"][0], -const.e),
}


def get_particle(name: str) -> Particle:
    try:
        return PARTICLES[name.lower()]
    except KeyError:
        raise DomainError(f"unknown particle {name!r}; choose from {sorted(PARTICLES)}") from None


def si_to_normalized(B_z: float, B_wave: float, f: float, particle: str = "electron") -> WaveConfig:
    """Tesla/hertz inputs to normalized units.

    Omega = 2 pi f hbar/(m c^2); fields are divided by m^2 c^2/(hbar |e|)
    (Gaussian form e lambdabar^2 B/(c hbar)). The constant field picks up the
    sign of the (negative) charge, so a positive lab ``B_z`` gives ``Hz < 0``
    and a normalizable mode; the wave amplitude enters as a magnitude.
    """
    if not f > 0:
        raise DomainError("frequency must be positive")
    part = get_particle(particle)
    if not part.mass > 0:
        raise DomainError("particle mass must be positive")
    Omega = 2.0 * math.pi * f * part.reduced_compton / const.c
    bc = part.critical_field
    sign = math.copysign(1.0, part.charge)
    return WaveConfig(Hz=sign * B_z / bc, H=abs(B_wave) / bc, Omega=Omega)


def lambda_ratio(f: float, particle: str = "electron") -> float:
    """Wavelength c/f over the reduced Compton wavelength."""
    if not f > 0:
        raise DomainError("frequency must be positive")
    return (const.c / f) / get_particle(particle).reduced_compton


def suppression_exponent(E0: float, lambda_ratio: float) -> float:
    if not (E0 > 0 and lambda_ratio > 0):
        raise DomainError("E0 and lambda_ratio must be positive")
    return (E0 * E0 + 1.0) / E0 * lambda_ratio


def suppression_factor(E0: float, lambda_ratio: float) -> float:
    return math.exp(-suppression_exponent(E0, lambda_ratio))


def singular_limit_spin(E0: float, Omega: float, h: float = 2e-3) -> tuple[float, float]:
    """(amp_perp, s3) of the singular pair extrapolated to h -> 0.

    Each branch deviates from the limit at O(h) with opposite signs, so the
    branch average is O(h^2); one Richardson step over (h, h/2) removes that.
    """

    def averaged(hh):
        obs = [spin_expectation(m) for m in singular_pair(E0, hh, Omega)]
        return (
            0.5 * (obs[0].amp_perp + obs[1].amp_perp),
            0.5 * (obs[0].s3 + obs[1].s3),
        )

    a1, s1 = averaged(h)
    a2, s2 = averaged(h / 2)
    return (4 * a2 - a1) / 3, (4 * s2 - s1) / 3
