"""Model parameters and the rescaled mean-field energy landscape.

The lattice is a ring of N Dicke sites (cavity frequency ``omega0``, atomic
frequency ``Omega``, dimensionless coupling ``g``) with dimensionless photon
hopping ``jbar`` between neighbouring cavities.  In the thermodynamic limit
the ground-state sector reduces to a classical energy landscape over the
rescaled real cavity coherences ``alpha[n]``,

    E(alpha) = sum_n [ alpha_n**2 - sqrt(1 + 4 g^2 alpha_n^2)/2
                       + 2 jbar alpha_n alpha_{n+1} ],

with cyclic indexing.  Energies are dimensionless (per lattice, in units of
the atomic energy scale); sites are numbered 1..N in the public interface.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InstabilityError, ValidationError

HOPPING_SIGNS = ("positive", "negative")

#: Stability window for the dimensionless hopping; outside of it one of the
#: bare normal-mode frequencies omega0*(1 + 2 jbar cos k) turns negative.
JBAR_MIN = -0.5
JBAR_MAX = 1.0


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters of the Dicke ring.

    ``omegabar`` is the derived frequency ratio Omega/omega0.  The lattice
    size must be odd and at least 3; the hopping must lie in the open
    stability window (-1/2, 1).
    """

    omega0: float
    Omega: float
    jbar: float
    g: float
    n_sites: int

    def __post_init__(self):
        if not (np.isfinite(self.omega0) and self.omega0 > 0):
            raise ValidationError(f"omega0 must be positive, got {self.omega0}")
        if not (np.isfinite(self.Omega) and self.Omega > 0):
            raise ValidationError(f"Omega must be positive, got {self.Omega}")
        if not (np.isfinite(self.g) and self.g >= 0):
            raise ValidationError(f"g must be non-negative, got {self.g}")
        if not (JBAR_MIN < self.jbar < JBAR_MAX):
            raise ValidationError(
                f"jbar={self.jbar} outside the stability window ({JBAR_MIN}, {JBAR_MAX})"
            )
        if self.n_sites < 3 or self.n_sites % 2 == 0:
            raise ValidationError(f"n_sites must be odd and >= 3, got {self.n_sites}")

    @property
    def omegabar(self) -> float:
        return self.Omega / self.omega0

    @property
    def hopping_sign(self) -> str:
        return "negative" if self.jbar < 0 else "positive"

    def critical_coupling(self) -> float:
        """Critical coupling for this parameter set's own hopping sign."""
        return critical_point(self.jbar, self.n_sites, self.hopping_sign)

    def replace_g(self, g: float) -> "ModelParams":
        return ModelParams(self.omega0, self.Omega, self.jbar, g, self.n_sites)


@dataclass(frozen=True)
class MeanFieldConfiguration:
    """A mean-field configuration: coherences, atomic angles and energy.

    ``alphas`` are the rescaled real cavity coherences; ``thetas`` and
    ``phis`` the atomic Bloch angles fixed by the coherences (phi is 0 by
    convention where alpha vanishes).  ``energy`` is the rescaled
    dimensionless ground-state energy of the configuration.
    """

    alphas: np.ndarray
    thetas: np.ndarray
    phis: np.ndarray
    energy: float

    def __post_init__(self):
        for name in ("alphas", "thetas", "phis"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if not (len(self.alphas) == len(self.thetas) == len(self.phis)):
            raise ValidationError("alphas, thetas, phis must have equal length")

    @classmethod
    def from_alphas(cls, alphas, g: float, jbar: float) -> "MeanFieldConfiguration":
        """Build the configuration determined by the coherences alone."""
        alphas = np.asarray(alphas, dtype=float)
        thetas, phis = atomic_angles(alphas, g)
        return cls(alphas, thetas, phis, rescaled_energy(alphas, g, jbar))

    @property
    def n_sites(self) -> int:
        return len(self.alphas)

    def jx_expectation(self) -> np.ndarray:
        """Normalized atomic coherence <J^x_n>/j = sin(theta_n) cos(phi_n)."""
        return np.sin(self.thetas) * np.cos(self.phis)

    def physical_energy(self, Omega: float, n_atoms: float) -> float:
        """Convert the rescaled energy to physical units for a finite
        ensemble size (the rescaled theory itself never needs one)."""
        return self.energy * n_atoms * Omega


def _check_alphas(alphas) -> np.ndarray:
    alphas = np.asarray(alphas, dtype=float)
    if alphas.ndim != 1 or len(alphas) < 3:
        raise DomainError("alphas must be a vector of length >= 3")
    if not np.all(np.isfinite(alphas)):
        raise DomainError("alphas must be finite")
    return alphas


def rescaled_energy(alphas, g: float, jbar: float) -> float:
    """Dimensionless mean-field energy of a coherence configuration."""
    a = _check_alphas(alphas)
    return float(
        np.sum(a * a - 0.5 * np.sqrt(1.0 + 4.0 * g * g * a * a)
               + 2.0 * jbar * a * np.roll(a, -1))
    )


def energy_gradient(alphas, g: float, jbar: float) -> np.ndarray:
    """Gradient of :func:`rescaled_energy` with respect to each coherence.

    Component n is  2 jbar a_{n-1} + 2 a_n + 2 jbar a_{n+1}
    - 2 g^2 a_n / sqrt(1 + 4 g^2 a_n^2), cyclic in n.
    """
    a = _check_alphas(alphas)
    root = np.sqrt(1.0 + 4.0 * g * g * a * a)
    return 2.0 * a + 2.0 * jbar * (np.roll(a, 1) + np.roll(a, -1)) - 2.0 * g * g * a / root


def energy_hessian(alphas, g: float, jbar: float) -> np.ndarray:
    """Hessian of :func:`rescaled_energy`: cyclic tridiagonal with corners.

    Diagonal entries are 2 - 2 g^2 / (1 + 4 g^2 a_n^2)^{3/2}; the cyclic
    first off-diagonals carry 2 jbar.
    """
    a = _check_alphas(alphas)
    n = len(a)
    hess = np.zeros((n, n))
    np.fill_diagonal(hess, 2.0 - 2.0 * g * g / (1.0 + 4.0 * g * g * a * a) ** 1.5)
    for i in range(n):
        j = (i + 1) % n
        hess[i, j] += 2.0 * jbar
        hess[j, i] += 2.0 * jbar
    return hess


def atomic_angles(alphas, g: float):
    """Vectorized form of :func:`atomic_angles_from_alpha`."""
    a = np.asarray(alphas, dtype=float)
    cos_theta = -1.0 / np.sqrt(1.0 + 4.0 * g * g * a * a)
    thetas = np.arccos(cos_theta)
    # cos(phi) = -sign(alpha); phi = 0 by convention at alpha = 0
    phis = np.where(a > 0, np.pi, 0.0)
    return thetas, phis


def atomic_angles_from_alpha(alpha: float, g: float):
    """Atomic Bloch angles (theta, phi) fixed by a single coherence.

    theta = arccos(-1/sqrt(1 + 4 g^2 alpha^2)) lies in [pi/2, pi]; phi is
    pi for alpha > 0, otherwise 0 (the value at alpha = 0 is a convention
    and does not affect the energy).
    """
    if g < 0:
        raise DomainError(f"g must be non-negative, got {g}")
    thetas, phis = atomic_angles(np.array([alpha]), g)
    return float(thetas[0]), float(phis[0])


def origin_hessian_eigenvalues(g: float, jbar: float, n_sites: int) -> np.ndarray:
    """Eigenvalues of the Hessian at the origin, in ascending order.

    The origin Hessian is circulant; its spectrum is
    2*(1 - g^2 + 2 jbar cos(2 pi t / N)) for t = 0..N-1.
    """
    t = np.arange(n_sites)
    lam = 2.0 * (1.0 - g * g + 2.0 * jbar * np.cos(2.0 * np.pi * t / n_sites))
    return np.sort(lam)


def stability_window(n_sites: int) -> tuple[float, float]:
    """Hopping range where every bare normal-mode frequency stays positive.

    The frequencies are omega0 (1 + 2 jbar cos(2 pi t / N)); the most
    fragile modes are k = 0 (negative hopping) and k = +-(N-1) pi / N
    (positive hopping), giving (-1/2, 1/(2 cos(pi/N))).  At three sites this
    is the (-1/2, 1) window enforced by :class:`ModelParams`; larger rings
    lose stability earlier on the positive side and operations raise
    :class:`InstabilityError` there.
    """
    return -0.5, 1.0 / (2.0 * np.cos(np.pi / n_sites))


def critical_point(jbar: float, n_sites: int, hopping_sign: str) -> float:
    """Critical coupling of the superradiant transition.

    For positive hopping the first origin-Hessian eigenvalues to cross zero
    are the k = +-(N-1)pi/N pair, giving
    g_c = sqrt(1 + 2 jbar cos((N-1) pi / N)); for negative hopping it is the
    k = 0 eigenvalue, giving the lattice-size-independent
    g_c = sqrt(1 + 2 jbar).
    """
    if hopping_sign not in HOPPING_SIGNS:
        raise ValidationError(f"hopping_sign must be one of {HOPPING_SIGNS}")
    if not (JBAR_MIN < jbar < JBAR_MAX):
        raise ValidationError(
            f"jbar={jbar} outside the stability window ({JBAR_MIN}, {JBAR_MAX})"
        )
    if n_sites < 3 or n_sites % 2 == 0:
        raise ValidationError(f"n_sites must be odd and >= 3, got {n_sites}")
    if hopping_sign == "positive" and jbar < 0:
        raise ValidationError("hopping_sign 'positive' requires jbar >= 0")
    if hopping_sign == "negative" and jbar > 0:
        raise ValidationError("hopping_sign 'negative' requires jbar <= 0")

    if hopping_sign == "positive":
        radicand = 1.0 + 2.0 * jbar * np.cos((n_sites - 1) * np.pi / n_sites)
    else:
        radicand = 1.0 + 2.0 * jbar
    if radicand <= 0:
        raise InstabilityError(
            f"no stable critical point: 1 + 2 jbar cos(k) = {radicand} <= 0"
        )
    return float(np.sqrt(radicand))
