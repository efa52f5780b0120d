"""Quadratic fluctuation Hamiltonians, Williamson normal modes and
Gaussian-state observables.

The fluctuation Hamiltonian over cavity and atomic quadratures is the
real symmetric 4N x 4N form (ordering q_1, p_1, Q_1, P_1, ..., q_N, p_N,
Q_N, P_N)

    H = sum_n [ omega0/2 (q_n^2 + p_n^2) - Omega/(2 cos theta_n) (Q_n^2 + P_n^2)
                + g sqrt(omega0 Omega) cos theta_n cos phi_n  q_n Q_n
                + J (q_n q_{n+1} + p_n p_{n+1}) ]

evaluated at a mean-field minimum.  Position and momentum quadratures never
couple, which the normal-mode construction exploits: with H_x and H_p the
position/momentum blocks, the matrix G = H_p^{1/2} H_x H_p^{1/2} is
symmetric positive definite and its eigenvalues are the squared symplectic
eigenvalues.  This keeps every mode's position row exactly free of momentum
components, so local field weights are well defined.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import schur

from .errors import DomainError, InstabilityError, PhaseError, ValidationError
from .meanfield import GroundStateSolution, Phase, mirror_projectors
from .model import ModelParams

_EPS = float(np.finfo(float).eps)

#: Symplectic eigenvalues below RESOLUTION_FACTOR * eps * ||G||^(1/2) cannot be
#: certified in double precision (the squared eigenvalue drowns in rounding).
RESOLUTION_FACTOR = 1e3

#: Flag threshold: decompositions whose smallest eigenvalue is below
#: CRITICAL_REGIME_FACTOR * omega0 are labelled critical-regime.
CRITICAL_REGIME_FACTOR = 1e-8


def symplectic_form(n_modes: int) -> np.ndarray:
    """Canonical antisymmetric form, blocks [[0, 1], [-1, 0]] per mode."""
    return np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def quadrature_labels(n_sites: int) -> list[str]:
    labels = []
    for n in range(1, n_sites + 1):
        labels += [f"q{n}", f"p{n}", f"Q{n}", f"P{n}"]
    return labels


@dataclass(frozen=True)
class QuadraticForm:
    """A positive quadratic form over the 4N quadratures with its symplectic
    form; ``omega0`` is kept as the frequency scale for critical-regime
    flagging."""

    matrix: np.ndarray
    symplectic_form: np.ndarray
    omega0: float = 1.0

    def __post_init__(self):
        matrix = np.array(self.matrix, dtype=float)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ValidationError("quadratic form must be a square matrix")
        if matrix.shape[0] % 4 != 0:
            raise ValidationError("matrix size must be 4N")
        if np.max(np.abs(matrix - matrix.T)) > 1e-12:
            raise ValidationError("quadratic form must be symmetric to 1e-12")
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)
        omega = np.array(self.symplectic_form, dtype=float)
        omega.setflags(write=False)
        object.__setattr__(self, "symplectic_form", omega)

    @property
    def n_sites(self) -> int:
        return self.matrix.shape[0] // 4

    @property
    def n_modes(self) -> int:
        return self.matrix.shape[0] // 2


@dataclass(frozen=True)
class WilliamsonDecomposition:
    """Symplectic eigenvalues and diagonalizing symplectic matrix.

    ``symplectic_matrix`` S satisfies S H S^T = diag(e_1, e_1, ..., e_2N, e_2N)
    and S Omega S^T = Omega; the stored residuals are the max-norm defects of
    those two identities.  ``critical_regime`` marks a smallest eigenvalue
    under 1e-8 of the cavity frequency scale.
    """

    symplectic_eigenvalues: np.ndarray
    symplectic_matrix: np.ndarray
    symplectic_residual: float
    diagonalization_residual: float
    critical_regime: bool
    _position_rows: np.ndarray | None = None
    _momentum_rows: np.ndarray | None = None

    @property
    def n_modes(self) -> int:
        return len(self.symplectic_eigenvalues)


@dataclass(frozen=True)
class CovarianceMatrix:
    """Second moments C = S^T S / 2 of the Gaussian ground state.

    ``error_estimate`` is a rough bound on entry errors propagated from the
    diagonalization residual; it is only meaningful in the critical regime.
    """

    matrix: np.ndarray
    error_estimate: float = 0.0

    @property
    def n_sites(self) -> int:
        return self.matrix.shape[0] // 4

    def physicality_defect(self) -> float:
        """Most negative eigenvalue of C + (i/2) Omega (>= 0 up to rounding
        for a physical Gaussian state)."""
        omega = symplectic_form(self.matrix.shape[0] // 2)
        herm = self.matrix + 0.5j * omega
        return float(np.linalg.eigvalsh(herm).min())


@dataclass(frozen=True)
class ModeWeights:
    """Position-quadrature composition (v_1, w_1, ..., v_N, w_N) of a normal
    mode: v_n weighs the cavity field q_n, w_n the atomic field Q_n.  Unit
    Euclidean norm, first component above 1e-7 made positive."""

    weights: np.ndarray
    mode_index: int

    @property
    def cavity(self) -> np.ndarray:
        return self.weights[0::2]

    @property
    def atom(self) -> np.ndarray:
        return self.weights[1::2]


# ---------------------------------------------------------------------------
# building the quadratic Hamiltonian


def build_quadratic_hamiltonian(solution: GroundStateSolution,
                                params: ModelParams) -> QuadraticForm:
    """Assemble the fluctuation Hamiltonian at a verified minimum."""
    if not solution.converged or solution.grad_norm > 1e-10:
        raise ValidationError(
            "quadratic expansion requires a converged minimum "
            f"(gradient norm {solution.grad_norm:.2e})"
        )
    config = solution.config
    n = config.n_sites
    if n != params.n_sites:
        raise ValidationError("solution and params disagree on lattice size")
    omega0, Omega, g = params.omega0, params.Omega, params.g
    hop = params.jbar * omega0
    cos_theta = np.cos(config.thetas)
    cos_phi = np.cos(config.phis)

    matrix = np.zeros((4 * n, 4 * n))
    for i in range(n):
        qi, pi, Qi, Pi = 4 * i, 4 * i + 1, 4 * i + 2, 4 * i + 3
        matrix[qi, qi] = matrix[pi, pi] = omega0
        matrix[Qi, Qi] = matrix[Pi, Pi] = -Omega / cos_theta[i]
        coupling = g * cos_theta[i] * cos_phi[i] * np.sqrt(omega0 * Omega)
        matrix[qi, Qi] = matrix[Qi, qi] = coupling
        j = (i + 1) % n
        matrix[qi, 4 * j] += hop
        matrix[4 * j, qi] += hop
        matrix[pi, 4 * j + 1] += hop
        matrix[4 * j + 1, pi] += hop
    return QuadraticForm(matrix, symplectic_form(2 * n), omega0=omega0)


# ---------------------------------------------------------------------------
# normal-mode machinery


def _interleave(hx: np.ndarray, hp: np.ndarray) -> np.ndarray:
    n = hx.shape[0]
    full = np.zeros((2 * n, 2 * n))
    full[0::2, 0::2] = hx
    full[1::2, 1::2] = hp
    return full


def _schur_spectrum(matrix: np.ndarray, omega: np.ndarray) -> np.ndarray:
    """Symplectic eigenvalues via Cholesky and a real Schur decomposition of
    the antisymmetric L^T Omega L; ascending.  Raises LinAlgError when the
    form is numerically semidefinite."""
    chol = np.linalg.cholesky(matrix)
    anti = chol.T @ omega @ chol
    t_mat, _ = schur(anti, output="real")
    n_modes = matrix.shape[0] // 2
    eps = np.abs(np.array([t_mat[2 * k, 2 * k + 1] for k in range(n_modes)]))
    return np.sort(eps)


def _split_blocks(matrix: np.ndarray):
    size = matrix.shape[0]
    pos = np.arange(0, size, 2)
    mom = pos + 1
    cross = matrix[np.ix_(pos, mom)]
    if np.max(np.abs(cross)) > 1e-12 * max(1.0, np.max(np.abs(matrix))):
        return None
    return matrix[np.ix_(pos, pos)], matrix[np.ix_(mom, mom)]


class _SplitModes:
    """Normal modes of a position/momentum-split form: eigenbasis of
    G = H_p^{1/2} H_x H_p^{1/2} plus the operator square roots."""

    def __init__(self, hx: np.ndarray, hp: np.ndarray):
        wp, vp = np.linalg.eigh(hp)
        if wp.min() <= 0:
            raise InstabilityError("momentum block is not positive definite")
        self.hp_sqrt = (vp * np.sqrt(wp)) @ vp.T
        self.hp_isqrt = (vp / np.sqrt(wp)) @ vp.T
        gram = self.hp_sqrt @ hx @ self.hp_sqrt
        self.lam, self.basis = np.linalg.eigh(gram)
        self.gram_scale = float(np.abs(self.lam).max())
        self.hx, self.hp = hx, hp

    @property
    def positive(self) -> bool:
        return self.lam.min() > 0

    @property
    def resolvable(self) -> bool:
        return self.lam.min() > RESOLUTION_FACTOR * _EPS * self.gram_scale

    def eigenvalues(self) -> np.ndarray:
        """Ascending symplectic eigenvalues, refined through the Cholesky
        route when the form admits it."""
        try:
            return _schur_spectrum(_interleave(self.hx, self.hp),
                                   symplectic_form(self.hx.shape[0]))
        except np.linalg.LinAlgError:
            return np.sqrt(self.lam)

    def covariance_blocks(self, eps: np.ndarray | None = None):
        """Position and momentum covariance blocks of the ground state."""
        if eps is None:
            eps = self.eigenvalues()
        cov_x = 0.5 * self.hp_sqrt @ ((self.basis / eps) @ self.basis.T) @ self.hp_sqrt
        cov_p = 0.5 * self.hp_isqrt @ ((self.basis * eps) @ self.basis.T) @ self.hp_isqrt
        return cov_x, cov_p


def _offending_direction(matrix: np.ndarray) -> str:
    w, v = np.linalg.eigh(matrix)
    vec = v[:, 0]
    labels = quadrature_labels(matrix.shape[0] // 4)
    dominant = int(np.argmax(np.abs(vec)))
    return f"min eigenvalue {w[0]:.3e} along {labels[dominant]}"


def williamson_diagonalize(form: QuadraticForm) -> WilliamsonDecomposition:
    """Symplectic normal-mode decomposition of a positive-definite form.

    For the position/momentum-split forms built here the symplectic matrix
    is assembled from the eigenbasis of H_p^{1/2} H_x H_p^{1/2}; eigenvalues
    are refined through a Cholesky / real-Schur pass on L^T Omega L.  Forms
    with position-momentum coupling fall back to the Schur route alone.
    """
    matrix = form.matrix
    blocks = _split_blocks(matrix)
    if blocks is None:
        return _williamson_generic(form)
    hx, hp = blocks
    try:
        modes = _SplitModes(hx, hp)
    except InstabilityError:
        raise InstabilityError(
            f"quadratic form is not positive definite: {_offending_direction(matrix)}")
    if not modes.positive:
        raise InstabilityError(
            f"quadratic form is not positive definite: {_offending_direction(matrix)}")

    eps = modes.eigenvalues()
    pos_rows = np.sqrt(eps)[:, None] * (modes.basis.T @ modes.hp_isqrt)
    mom_rows = (1.0 / np.sqrt(eps))[:, None] * (modes.basis.T @ modes.hp_sqrt)

    size = matrix.shape[0]
    n_modes = size // 2
    pos = np.arange(0, size, 2)
    mom = pos + 1
    s_matrix = np.zeros((size, size))
    for k in range(n_modes):
        s_matrix[2 * k, pos] = mom_rows[k]
        s_matrix[2 * k + 1, mom] = pos_rows[k]

    return _finalize(form, eps, s_matrix, pos_rows, mom_rows)


def _williamson_generic(form: QuadraticForm) -> WilliamsonDecomposition:
    """Cholesky + real-Schur Williamson construction (no split structure)."""
    matrix, omega = form.matrix, form.symplectic_form
    try:
        chol = np.linalg.cholesky(matrix)
    except np.linalg.LinAlgError:
        raise InstabilityError(
            f"quadratic form is not positive definite: {_offending_direction(matrix)}")
    anti = chol.T @ omega @ chol
    t_mat, z_mat = schur(anti, output="real")
    n_modes = matrix.shape[0] // 2
    eps = np.empty(n_modes)
    columns = []
    for k in range(n_modes):
        value = t_mat[2 * k, 2 * k + 1]
        first, second = z_mat[:, 2 * k], z_mat[:, 2 * k + 1]
        if value < 0:
            value, first, second = -value, second, first
        eps[k] = value
        columns.append((first, second))
    order = np.argsort(eps)
    eps = eps[order]
    orth = np.empty_like(z_mat)
    for new, old in enumerate(order):
        orth[:, 2 * new], orth[:, 2 * new + 1] = columns[old]
    scale = np.repeat(np.sqrt(eps), 2)
    from scipy.linalg import solve_triangular

    s_matrix = scale[:, None] * solve_triangular(chol, orth, lower=True, trans="T").T
    return _finalize(form, eps, s_matrix, None, None)


def _finalize(form, eps, s_matrix, pos_rows, mom_rows) -> WilliamsonDecomposition:
    omega = form.symplectic_form
    sym_res = float(np.max(np.abs(s_matrix @ omega @ s_matrix.T - omega)))
    diag = s_matrix @ form.matrix @ s_matrix.T
    diag_target = np.diag(np.repeat(eps, 2))
    diag_res = float(np.max(np.abs(diag - diag_target)))
    critical = bool(eps.min() < CRITICAL_REGIME_FACTOR * form.omega0)
    return WilliamsonDecomposition(np.asarray(eps), s_matrix, sym_res, diag_res,
                                   critical, pos_rows, mom_rows)


def symplectic_spectrum_modulus(form: QuadraticForm) -> np.ndarray:
    """Independent route to the symplectic eigenvalues: moduli of the
    eigenvalues of i Omega H (each appears twice); ascending."""
    moduli = np.sort(np.abs(np.linalg.eigvals(1j * form.symplectic_form @ form.matrix)))
    return moduli[0::2]


def covariance(decomp: WilliamsonDecomposition) -> CovarianceMatrix:
    """Ground-state covariance matrix C = S^T S / 2."""
    s_matrix = decomp.symplectic_matrix
    matrix = 0.5 * s_matrix.T @ s_matrix
    matrix = 0.5 * (matrix + matrix.T)
    eps_min = float(decomp.symplectic_eigenvalues.min())
    error = decomp.diagonalization_residual / eps_min if eps_min > 0 else np.inf
    return CovarianceMatrix(matrix, error_estimate=float(error))


def _site_indices(n_sites: int, site: int):
    if not 1 <= site <= n_sites:
        raise DomainError(f"site must be in 1..{n_sites}, got {site}")
    base = 4 * (site - 1)
    return base, base + 1  # q_site, p_site


def photon_number(cov: CovarianceMatrix, site: int) -> float:
    """Fluctuation occupation of the cavity at ``site`` (1-based) above the
    coherent displacement: (<q^2> + <p^2> - 1)/2 in the displaced frame."""
    qi, pi = _site_indices(cov.n_sites, site)
    return float((cov.matrix[qi, qi] + cov.matrix[pi, pi] - 1.0) / 2.0)


def squeezing_variance(cov: CovarianceMatrix, site: int) -> float:
    """Position-quadrature variance (Delta q)^2 of the cavity at ``site``."""
    qi, _ = _site_indices(cov.n_sites, site)
    return float(cov.matrix[qi, qi])


def mode_weights(decomp: WilliamsonDecomposition, mode_index: int) -> ModeWeights:
    """Local-field weights of a normal mode (1-based, ascending energy).

    Extracts the position-quadrature row of (S^{-1})^T for the mode; exact
    for split-structured forms.
    """
    if decomp._position_rows is None:
        raise ValidationError("mode weights require a position/momentum-split form")
    if not 1 <= mode_index <= decomp.n_modes:
        raise DomainError(f"mode_index must be in 1..{decomp.n_modes}, got {mode_index}")
    row = decomp._position_rows[mode_index - 1]
    weights = row / np.linalg.norm(row)
    for component in weights:
        if abs(component) > 1e-7:
            if component < 0:
                weights = -weights
            break
    return ModeWeights(weights, mode_index)


# ---------------------------------------------------------------------------
# closed-form spectra


def _two_mode_energies(freq_pos: float, freq_mom: float, coupling_sq: float):
    """Normal-mode energies of two coupled oscillators (stable evaluation).

    For H = wc/2 (q^2+p^2) + wa/2 (Q^2+P^2) + lam qQ the squared energies are
    the roots of e^4 - (wc^2+wa^2) e^2 + wc wa (wc wa - lam^2).
    """
    total = freq_pos * freq_pos + freq_mom * freq_mom
    det = freq_pos * freq_mom * (freq_pos * freq_mom - coupling_sq)
    if -32.0 * _EPS * total * total < det < 0.0:
        det = 0.0  # exactly at threshold up to rounding
    disc = total * total - 4.0 * det
    root = np.sqrt(disc)
    upper = np.sqrt((total + root) / 2.0)
    if det < 0:
        return np.nan, float(upper)
    lower = np.sqrt(2.0 * det / (total + root))
    return float(lower), float(upper)


def _momenta(n_sites: int) -> np.ndarray:
    return 2.0 * np.pi * np.arange(n_sites) / n_sites


def normal_phase_mode_energies(g: float, jbar: float, omegabar: float,
                               k: float, omega0: float = 1.0):
    """Lower/upper branch energies of momentum-k fluctuations about the
    normal phase."""
    freq_cav = omega0 * (1.0 + 2.0 * jbar * np.cos(k))
    freq_atom = omegabar * omega0
    coupling_sq = g * g * freq_atom * omega0
    lower, upper = _two_mode_energies(freq_cav, freq_atom, coupling_sq)
    if np.isnan(lower):
        raise DomainError(
            f"normal phase unstable at momentum k={k:.4f} for g={g}"
        )
    return lower, upper


def analytic_np_spectrum(g: float, jbar: float, omegabar: float,
                         omega0: float = 1.0) -> np.ndarray:
    """The six normal-phase excitation energies of the three-site ring,
    ascending: both branches of k = 0 and of the degenerate k = +-2pi/3 pair."""
    energies = []
    for k in _momenta(3):
        energies.extend(normal_phase_mode_energies(g, jbar, omegabar, k, omega0))
    return np.sort(np.array(energies))


def analytic_nfsp_spectrum(g: float, jbar: float, omegabar: float,
                           omega0: float = 1.0) -> np.ndarray:
    """The six excitation energies of the uniform superradiant phase of the
    three-site ring, ascending.

    The uniform condensate renormalizes the atomic frequency to
    Omega (g/g_c)^2 and the effective coupling to g_c^2/g, preserving
    translational symmetry.
    """
    if jbar > 0:
        raise DomainError("the uniform superradiant phase requires jbar <= 0")
    gc_sq = 1.0 + 2.0 * jbar
    if g * g < gc_sq:
        raise DomainError(f"below the superradiant threshold g_c={np.sqrt(gc_sq)}")
    freq_atom = omegabar * omega0 * g * g / gc_sq
    eff = gc_sq / g
    energies = []
    for k in _momenta(3):
        freq_cav = omega0 * (1.0 + 2.0 * jbar * np.cos(k))
        coupling_sq = eff * eff * omegabar * omega0 * omega0
        lower, upper = _two_mode_energies(freq_cav, freq_atom, coupling_sq)
        if np.isnan(lower):
            raise DomainError(f"unstable momentum sector k={k:.4f}")
        energies.extend((lower, upper))
    return np.sort(np.array(energies))


def fsp_frustrated_mode_energy(g: float, jbar: float, omegabar: float,
                               alpha_pair: float, omega0: float = 1.0) -> float:
    """Lowest excitation of the three-site frustrated phase.

    Closed form of the mirror-odd (pair-difference) sector, which decouples
    from the unpaired site; it depends only on the ferromagnetic-pair
    coherence.  Vanishes at the critical point and grows linearly.
    """
    if jbar <= 0:
        raise DomainError("the frustrated phase requires jbar > 0")
    stretch = np.sqrt(1.0 + 4.0 * g * g * alpha_pair * alpha_pair)
    freq_cav = omega0 * (1.0 - jbar)
    freq_atom = omegabar * omega0 * stretch
    coupling_sq = g * g * omega0 * omegabar * omega0 / (stretch * stretch)
    lower, _ = _two_mode_energies(freq_cav, freq_atom, coupling_sq)
    if np.isnan(lower):
        raise InstabilityError(
            "negative radicand: the pair coherence is inconsistent with a "
            "stable frustrated minimum at this coupling"
        )
    return lower


# ---------------------------------------------------------------------------
# mirror-sector moments (used by sweeps deep in the critical regime)


@dataclass(frozen=True)
class SiteMoments:
    """Per-site Gaussian moments: cavity q/p variances, with NaN where the
    frustrated sector is numerically unresolvable."""

    var_q: np.ndarray
    var_p: np.ndarray
    eps_lowest: float
    eps_second: float
    frustrated_resolved: bool = True
    eps_frustrated: float = np.nan
    eps_meanfield: float = np.nan

    def photon(self, site: int) -> float:
        return float((self.var_q[site - 1] + self.var_p[site - 1] - 1.0) / 2.0)

    def squeezing(self, site: int) -> float:
        return float(self.var_q[site - 1])


def _expand_species(rows: np.ndarray) -> np.ndarray:
    """Lift a site-space map to the (cavity, atom) interleaved position space."""
    r, c = rows.shape
    out = np.zeros((2 * r, 2 * c))
    out[0::2, 0::2] = rows
    out[1::2, 1::2] = rows
    return out


def fsp_site_moments(solution: GroundStateSolution, params: ModelParams) -> SiteMoments:
    """Cavity moments of a frustrated ground state via the exact mirror-sector
    split.

    The quadratic form block-diagonalizes over mirror-even and mirror-odd
    combinations of the paired sites.  The unpaired site lives entirely in
    the even sector, which stays well conditioned arbitrarily close to the
    critical point; when the odd (frustrated) sector falls below
    double-precision resolution its sites' moments are reported as NaN.
    """
    if solution.phase is not Phase.FSP:
        raise PhaseError("mirror-sector moments require the frustrated phase")
    n = params.n_sites
    form = build_quadratic_hamiltonian(solution, params)
    blocks = _split_blocks(form.matrix)
    hx, hp = blocks
    even_sites, odd_sites = mirror_projectors(n)
    even_map, odd_map = _expand_species(even_sites), _expand_species(odd_sites)

    even = _SplitModes(even_map @ hx @ even_map.T, even_map @ hp @ even_map.T)
    if not (even.positive and even.resolvable):
        raise InstabilityError("mirror-even sector is not resolvably positive")
    eps_even = even.eigenvalues()
    cov_x_even, cov_p_even = even.covariance_blocks(eps_even)

    var_q = np.full(n, np.nan)
    var_p = np.full(n, np.nan)
    var_q[0], var_p[0] = cov_x_even[0, 0], cov_p_even[0, 0]

    odd = _SplitModes(odd_map @ hx @ odd_map.T, odd_map @ hp @ odd_map.T)
    resolved = odd.positive and odd.resolvable
    eps_odd = None
    if resolved:
        eps_odd = odd.eigenvalues()
        cov_x_odd, cov_p_odd = odd.covariance_blocks(eps_odd)
        # q_{1+j} = (even_j + odd_j)/sqrt(2); even/odd cross-covariances vanish
        for j in range(1, (n - 1) // 2 + 1):
            ei, oi = 2 * j, 2 * (j - 1)
            vq = 0.5 * (cov_x_even[ei, ei] + cov_x_odd[oi, oi])
            vp = 0.5 * (cov_p_even[ei, ei] + cov_p_odd[oi, oi])
            var_q[j] = var_q[n - j] = vq
            var_p[j] = var_p[n - j] = vp

    eps_mf = float(eps_even[0])
    eps_f = float(eps_odd[0]) if eps_odd is not None else np.nan
    all_eps = np.sort(np.concatenate([eps_even, eps_odd])) if eps_odd is not None \
        else eps_even
    return SiteMoments(var_q, var_p,
                       eps_lowest=float(all_eps[0]), eps_second=float(all_eps[1]),
                       frustrated_resolved=bool(resolved),
                       eps_frustrated=eps_f, eps_meanfield=eps_mf)


def fsp_sector_spectra(solution: GroundStateSolution, params: ModelParams):
    """(mirror-even, mirror-odd) symplectic spectra of a frustrated state;
    the odd part is None when numerically unresolvable."""
    form = build_quadratic_hamiltonian(solution, params)
    hx, hp = _split_blocks(form.matrix)
    even_sites, odd_sites = mirror_projectors(params.n_sites)
    even_map, odd_map = _expand_species(even_sites), _expand_species(odd_sites)
    even = _SplitModes(even_map @ hx @ even_map.T, even_map @ hp @ even_map.T)
    odd = _SplitModes(odd_map @ hx @ odd_map.T, odd_map @ hp @ odd_map.T)
    eps_even = even.eigenvalues() if even.positive and even.resolvable else None
    eps_odd = odd.eigenvalues() if odd.positive and odd.resolvable else None
    return eps_even, eps_odd


# ---------------------------------------------------------------------------
# matrix dump wire format


def dump_quadratic_form(form: QuadraticForm, stream) -> None:
    """Write the matrix as row-major CSV with a header naming the quadrature
    ordering."""
    labels = quadrature_labels(form.n_sites)
    stream.write("# quadrature ordering: " + ",".join(labels) + "\n")
    for row in form.matrix:
        stream.write(",".join(repr(float(x)) for x in row) + "\n")


def load_quadratic_form_matrix(stream) -> np.ndarray:
    """Read back a matrix written by :func:`dump_quadratic_form`."""
    rows = []
    for line in stream:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        rows.append([float(tok) for tok in line.split(",")])
    return np.array(rows)

