"""Dirac matrices, Pauli-block spin operators and 4x4 matrix exponentials.

Matrices are plain ``numpy`` arrays of shape ``(4, 4)`` and dtype ``complex``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import ConfigurationError, DomainError

DIRAC_PAULI = "dirac-pauli"
WEYL = "weyl"
REPRESENTATIONS = (DIRAC_PAULI, WEYL)

_ALIASES = {
    "diracpauli": DIRAC_PAULI,
    "dirac-pauli": DIRAC_PAULI,
    "dirac_pauli": DIRAC_PAULI,
    "dirac": DIRAC_PAULI,
    "standard": DIRAC_PAULI,
    "weyl": WEYL,
    "chiral": WEYL,
}

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
I4 = np.eye(4, dtype=complex)

# X @ X = c * I is accepted as "scalar square" within this relative tolerance
SCALAR_SQUARE_TOL = 1e-12


@dataclass(frozen=True)
class DiracSet:
    """The alpha/beta matrices of one representation plus the spin blocks
    ``sigma_k = -i alpha_l alpha_m`` (cyclic)."""

    representation: str
    alpha1: np.ndarray
    alpha2: np.ndarray
    alpha3: np.ndarray
    beta: np.ndarray
    sigma1: np.ndarray
    sigma2: np.ndarray
    sigma3: np.ndarray

    @property
    def alpha(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return (self.alpha1, self.alpha2, self.alpha3)

    @property
    def sigma(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return (self.sigma1, self.sigma2, self.sigma3)

    def matrices(self) -> dict[str, np.ndarray]:
        return {
            "alpha1": self.alpha1,
            "alpha2": self.alpha2,
            "alpha3": self.alpha3,
            "beta": self.beta,
            "sigma1": self.sigma1,
            "sigma2": self.sigma2,
            "sigma3": self.sigma3,
        }


def _block(a, b, c, d) -> np.ndarray:
    return np.block([[a, b], [c, d]]).astype(complex)


def normalize_representation(tag: str) -> str:
    key = str(tag).strip().lower().replace(" ", "")
    try:
        return _ALIASES[key]
    except KeyError:
        raise ConfigurationError(
            f"unknown Dirac representation {tag!r}; expected one of {REPRESENTATIONS}"
        ) from None


def dirac_matrices(representation: str = DIRAC_PAULI) -> DiracSet:
    rep = normalize_representation(representation)
    zero = np.zeros((2, 2), dtype=complex)
    one = np.eye(2, dtype=complex)
    paulis = (PAULI_X, PAULI_Y, PAULI_Z)
    if rep == DIRAC_PAULI:
        alphas = [_block(zero, s, s, zero) for s in paulis]
        beta = _block(one, zero, zero, -one)
    else:
        alphas = [_block(-s, zero, zero, s) for s in paulis]
        beta = _block(zero, one, one, zero)
    a1, a2, a3 = alphas
    return DiracSet(
        representation=rep,
        alpha1=a1,
        alpha2=a2,
        alpha3=a3,
        beta=beta,
        sigma1=-1j * a2 @ a3,
        sigma2=-1j * a3 @ a1,
        sigma3=-1j * a1 @ a2,
    )


def anticommutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b + b @ a


def clifford_defect(ds: DiracSet) -> float:
    """Largest entrywise violation of {alpha_i, alpha_j} = 2 delta_ij,
    {alpha_i, beta} = 0 and beta**2 = 1 (the 10 defining relations)."""
    gens = [*ds.alpha, ds.beta]
    worst = 0.0
    for i in range(4):
        for j in range(i, 4):
            target = 2 * I4 if i == j else 0 * I4
            worst = max(worst, float(np.max(np.abs(anticommutator(gens[i], gens[j]) - target))))
    return worst


def scalar_square(x: np.ndarray, tol: float = SCALAR_SQUARE_TOL) -> complex | None:
    """Return ``c`` if ``x @ x == c * I`` within ``tol`` (relative), else None."""
    sq = x @ x
    c = np.trace(sq) / sq.shape[0]
    scale = max(1.0, float(np.max(np.abs(x))) ** 2)
    if np.max(np.abs(sq - c * np.eye(sq.shape[0]))) <= tol * scale:
        return complex(c)
    return None


def mat_exp(x: np.ndarray) -> np.ndarray:
    """Matrix exponential.

    When ``x @ x = c I`` the series collapses to
    ``cosh(s) I + sinh(s)/s x`` with ``s = sqrt(c)`` (``cos``/``sin`` for
    ``c < 0``); every frame and spinor operator in this package is of that
    kind. Other matrices go through Pade scaling-and-squaring.
    """
    x = np.asarray(x, dtype=complex)
    if not np.all(np.isfinite(x)):
        raise DomainError("mat_exp: non-finite matrix entries")
    ident = np.eye(x.shape[0], dtype=complex)
    c = scalar_square(x)
    if c is None:
        return scipy.linalg.expm(x)
    if abs(c.imag) <= SCALAR_SQUARE_TOL * max(1.0, abs(c)):
        c = c.real
        if c > 0:
            s = np.sqrt(c)
            return np.cosh(s) * ident + (np.sinh(s) / s) * x
        if c < 0:
            s = np.sqrt(-c)
            return np.cos(s) * ident + (np.sin(s) / s) * x
        return ident + x
    s = np.sqrt(c)
    return np.cosh(s) * ident + (np.sinh(s) / s) * x


def mat_exp_series(x: np.ndarray, terms: int = 60) -> np.ndarray:
    """Plain Taylor series with scaling and squaring; slow, used as a cross-check."""
    x = np.asarray(x, dtype=complex)
    norm = np.linalg.norm(x, 1)
    k = max(0, int(np.ceil(np.log2(norm))) + 1) if norm > 0.5 else 0
    y = x / 2**k
    out = np.eye(x.shape[0], dtype=complex)
    term = out.copy()
    for n in range(1, terms):
        term = term @ y / n
        out = out + term
    for _ in range(k):
        out = out @ out
    return out


def is_hermitian(m: np.ndarray, tol: float = 1e-12) -> bool:
    return bool(np.max(np.abs(m - m.conj().T)) <= tol)


def is_unitary(m: np.ndarray, tol: float = 1e-12) -> bool:
    return bool(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))) <= tol)
