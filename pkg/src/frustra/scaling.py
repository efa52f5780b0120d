"""Coupling sweeps, power-law fits and critical-exponent extraction.

A sweep tabulates observables on a log-spaced grid of reduced couplings
|g - g_c| / g_c around the critical point.  Exponents are extracted by
linear least squares on log-log data restricted to the lowest decade of
usable points: each series is first cleaned of entries below its numerical
resolution floor and of the noise plateau that appears once the true value
drops below double precision (detected as loss of monotonicity towards the
critical point).  Fitting the lowest clean decade keeps the window inside
the asymptotic scaling regime, where crossover curvature from farther out
and additive non-critical backgrounds are negligible.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, FitQualityError, InstabilityError, ValidationError
from .fluctuations import (
    CRITICAL_REGIME_FACTOR,
    build_quadratic_hamiltonian,
    fsp_site_moments,
    fsp_sector_spectra,
    covariance,
    photon_number,
    squeezing_variance,
    williamson_diagonalize,
)
from .meanfield import (
    GroundStateSolution,
    Phase,
    SolverOptions,
    mirror_projectors,
    solve_ground_state,
)
from .model import ModelParams, critical_point, energy_hessian

OBSERVABLES = ("gaps", "photon_numbers", "squeezing", "hessian_eigenvalues", "energy")

#: Mean-field Hessian eigenvalues below this are double-precision noise.
HESSIAN_FLOOR = 1e-12


def default_grid(g_critical: float, reduced_min: float = 1e-4,
                 reduced_max: float = 1e-2, points_per_decade: int = 25,
                 sides: str = "both") -> np.ndarray:
    """Log-spaced coupling grid in reduced distance from g_c, excluding g_c."""
    if not 0 < reduced_min < reduced_max:
        raise ValidationError("need 0 < reduced_min < reduced_max")
    decades = np.log10(reduced_max / reduced_min)
    count = max(2, int(round(decades * points_per_decade)) + 1)
    reduced = np.logspace(np.log10(reduced_min), np.log10(reduced_max), count)
    above = g_critical * (1.0 + reduced)
    below = g_critical * (1.0 - reduced)
    if sides == "above":
        grid = above
    elif sides == "below":
        grid = below
    elif sides == "both":
        grid = np.concatenate([below[::-1], above])
    else:
        raise ValidationError(f"sides must be above/below/both, got {sides}")
    return np.sort(grid)


@dataclass(frozen=True)
class SweepSpec:
    """What to sweep: base parameters, coupling grid and observables."""

    jbar: float
    n_sites: int
    hopping_sign: str | None = None
    omega0: float = 1.0
    Omega: float = 1.0
    grid: tuple[float, ...] | None = None
    observables: tuple[str, ...] = OBSERVABLES
    reduced_min: float = 1e-4
    reduced_max: float = 1e-2
    points_per_decade: int = 25
    sides: str = "both"

    def __post_init__(self):
        sign = self.hopping_sign
        if sign is None:
            sign = "negative" if self.jbar < 0 else "positive"
            object.__setattr__(self, "hopping_sign", sign)
        unknown = set(self.observables) - set(OBSERVABLES)
        if unknown:
            raise ValidationError(f"unknown observables: {sorted(unknown)}")
        gc = self.g_critical  # validates jbar/sign consistency
        if self.grid is None:
            grid = default_grid(gc, self.reduced_min, self.reduced_max,
                                self.points_per_decade, self.sides)
            object.__setattr__(self, "grid", tuple(float(g) for g in grid))
        else:
            grid = np.asarray(self.grid, dtype=float)
            if np.any(np.diff(grid) <= 0):
                raise ValidationError("grid must be strictly increasing")
            if np.any(np.isclose(grid, gc, rtol=0, atol=1e-15)):
                raise ValidationError("grid must exclude the critical point itself")
            object.__setattr__(self, "grid", tuple(float(g) for g in grid))

    @property
    def g_critical(self) -> float:
        return critical_point(self.jbar, self.n_sites, self.hopping_sign
                              or ("negative" if self.jbar < 0 else "positive"))

    def params_at(self, g: float) -> ModelParams:
        return ModelParams(self.omega0, self.Omega, self.jbar, g, self.n_sites)


@dataclass(frozen=True)
class SweepRow:
    g: float
    reduced_coupling: float
    observable: str
    index: str
    value: float


@dataclass(frozen=True)
class SweepMissing:
    g: float
    observable: str
    reason: str


@dataclass
class SweepResult:
    spec: SweepSpec
    rows: list[SweepRow] = field(default_factory=list)
    missing: list[SweepMissing] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    def series(self, observable: str, index: str, side: str = "above"):
        """(reduced_coupling, value) arrays for one observable/index, one side
        of the critical point, ordered by reduced coupling."""
        gc = self.spec.g_critical
        pairs = [(row.reduced_coupling, row.value) for row in self.rows
                 if row.observable == observable and row.index == index
                 and ((row.g > gc) == (side == "above"))]
        pairs.sort()
        if not pairs:
            return np.array([]), np.array([])
        reduced, values = map(np.array, zip(*pairs))
        return reduced, values


def _thread_budget() -> int:
    raw = os.environ.get("FRUSTRA_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def run_sweep(spec: SweepSpec, opts: SolverOptions | None = None) -> SweepResult:
    """Tabulate the requested observables over the coupling grid.

    Each side of the critical point runs as an ordered pipeline from the
    nearest grid point outward, warm-starting every mean-field solve from
    its neighbour; the two sides run concurrently when FRUSTRA_THREADS > 1.
    Per-point failures are recorded as missing rows with a reason.
    """
    opts = opts or SolverOptions()
    gc = spec.g_critical
    grid = np.asarray(spec.grid)
    below = np.sort(grid[grid < gc])[::-1]  # nearest to gc first
    above = np.sort(grid[grid > gc])
    result = SweepResult(spec)

    sides = [side for side in (below, above) if len(side)]
    if _thread_budget() > 1 and len(sides) > 1:
        with ThreadPoolExecutor(max_workers=2) as pool:
            outputs = list(pool.map(lambda pts: _sweep_side(spec, pts, gc, opts), sides))
    else:
        outputs = [_sweep_side(spec, pts, gc, opts) for pts in sides]
    for rows, missing, warns in outputs:
        result.rows.extend(rows)
        result.missing.extend(missing)
        result.warnings.extend(warns)
    result.rows.sort(key=lambda r: (r.g, r.observable, r.index))
    return result


def _sweep_side(spec: SweepSpec, points: np.ndarray, gc: float,
                opts: SolverOptions):
    rows: list[SweepRow] = []
    missing: list[SweepMissing] = []
    warns: list[str] = []
    warm: GroundStateSolution | None = None
    for g in points:
        params = spec.params_at(g)
        reduced = abs(g - gc) / gc
        try:
            solution = _solve_warm(params, warm, opts)
            warm = solution
        except Exception as exc:  # record and continue with the next point
            missing.append(SweepMissing(g, "all", f"solver: {exc}"))
            continue
        point_rows, point_missing, point_warns = _observe_point(
            spec, params, solution, reduced)
        rows.extend(point_rows)
        missing.extend(point_missing)
        warns.extend(point_warns)
    return rows, missing, warns


def _solve_warm(params: ModelParams, warm: GroundStateSolution | None,
                opts: SolverOptions) -> GroundStateSolution:
    # The neighbouring minimizer joins the seed set; the closed-form seeds
    # stay in play, so a stale warm start cannot hide the true minimum.
    initial = warm.config.alphas if warm is not None else None
    return solve_ground_state(params, opts, initial=initial)


def _observe_point(spec: SweepSpec, params: ModelParams,
                   solution: GroundStateSolution, reduced: float):
    rows: list[SweepRow] = []
    missing: list[SweepMissing] = []
    warns: list[str] = []
    g = params.g
    want = set(spec.observables)

    def put(observable, index, value):
        rows.append(SweepRow(g, reduced, observable, str(index), float(value)))

    if "energy" in want:
        put("energy", "", solution.config.energy)

    if "hessian_eigenvalues" in want:
        hess = energy_hessian(solution.config.alphas, g, params.jbar)
        for rank, value in enumerate(np.linalg.eigvalsh(hess), start=1):
            put("hessian_eigenvalues", rank, value)
        if solution.phase is Phase.FSP:
            even, odd = mirror_projectors(params.n_sites)
            put("hessian_eigenvalues", "mf",
                np.linalg.eigvalsh(even @ hess @ even.T)[0])
            put("hessian_eigenvalues", "f",
                np.linalg.eigvalsh(odd @ hess @ odd.T)[0])

    need_gaussian = want & {"gaps", "photon_numbers", "squeezing"}
    if not need_gaussian:
        return rows, missing, warns

    if solution.phase is Phase.FSP:
        try:
            moments = fsp_site_moments(solution, params)
        except InstabilityError as exc:
            missing.append(SweepMissing(g, ",".join(sorted(need_gaussian)), str(exc)))
            return rows, missing, warns
        if "gaps" in want:
            eps_even, eps_odd = fsp_sector_spectra(solution, params)
            put("gaps", "mf", moments.eps_meanfield)
            if moments.frustrated_resolved:
                put("gaps", "f", moments.eps_frustrated)
                merged = np.sort(np.concatenate([eps_even, eps_odd]))
                for rank, value in enumerate(merged, start=1):
                    put("gaps", rank, value)
            else:
                missing.append(SweepMissing(
                    g, "gaps",
                    "frustrated sector below double-precision resolution"))
            if moments.eps_lowest < CRITICAL_REGIME_FACTOR * params.omega0:
                warns.append(f"critical-regime point at g={g!r}")
        for name, getter in (("photon_numbers", moments.photon),
                             ("squeezing", moments.squeezing)):
            if name not in want:
                continue
            for site in range(1, params.n_sites + 1):
                value = getter(site)
                if np.isnan(value):
                    missing.append(SweepMissing(
                        g, f"{name}[{site}]",
                        "frustrated sector below double-precision resolution"))
                else:
                    put(name, site, value)
    else:
        try:
            form = build_quadratic_hamiltonian(solution, params)
            decomp = williamson_diagonalize(form)
        except InstabilityError as exc:
            missing.append(SweepMissing(g, ",".join(sorted(need_gaussian)), str(exc)))
            return rows, missing, warns
        if decomp.critical_regime:
            warns.append(f"critical-regime point at g={g!r}")
        if "gaps" in want:
            for rank, value in enumerate(decomp.symplectic_eigenvalues, start=1):
                put("gaps", rank, value)
        if want & {"photon_numbers", "squeezing"}:
            cov = covariance(decomp)
            for site in range(1, params.n_sites + 1):
                if "photon_numbers" in want:
                    put("photon_numbers", site, photon_number(cov, site))
                if "squeezing" in want:
                    put("squeezing", site, squeezing_variance(cov, site))
    return rows, missing, warns


# ---------------------------------------------------------------------------
# power-law fitting


@dataclass(frozen=True)
class PowerLawFit:
    """Least-squares power law y = prefactor * x^exponent on log-log data."""

    exponent: float
    prefactor: float
    r_squared: float
    window: tuple[float, float]
    n_points: int


def fit_power_law(points, r2_threshold: float = 0.995,
                  min_points: int = 6) -> PowerLawFit:
    """Fit a power law to (reduced_coupling, value) pairs.

    Requires at least ``min_points`` strictly positive values; raises
    :class:`FitQualityError` when the log-log line explains less than
    ``r2_threshold`` of the variance.
    """
    pts = np.asarray(list(points), dtype=float)
    if pts.ndim != 2 or pts.shape[0] < min_points:
        raise DomainError(f"need at least {min_points} points, got {len(pts)}")
    x, y = pts[:, 0], pts[:, 1]
    if np.any(x <= 0) or np.any(y <= 0) or not np.all(np.isfinite(pts)):
        raise DomainError("power-law fitting needs positive finite data")
    lx, ly = np.log(x), np.log(y)
    slope, intercept = np.polyfit(lx, ly, 1)
    residual = ly - (slope * lx + intercept)
    total = np.sum((ly - ly.mean()) ** 2)
    r_squared = 1.0 - float(np.sum(residual ** 2) / total) if total > 0 else 1.0
    if r_squared < r2_threshold:
        raise FitQualityError(
            f"power-law fit quality r^2={r_squared:.6f} below {r2_threshold}",
            r_squared=r_squared)
    return PowerLawFit(float(slope), float(np.exp(intercept)), r_squared,
                       (float(x.min()), float(x.max())), len(pts))


def asymptotic_mask(reduced: np.ndarray, values: np.ndarray,
                    floor: float = 0.0, diverging: bool = False) -> np.ndarray:
    """Select points inside the asymptotic scaling regime.

    Keeps finite positive values above ``floor`` and trims the
    noise plateau: walking from the largest reduced coupling towards the
    critical point, a vanishing (diverging) observable must keep strictly
    decreasing (increasing); the walk stops at the first violation.
    """
    reduced = np.asarray(reduced, dtype=float)
    values = np.asarray(values, dtype=float)
    keep = np.zeros(len(values), dtype=bool)
    usable = np.isfinite(values) & (values > floor)
    order = np.argsort(reduced)[::-1]
    previous = None
    last_kept = None
    stopped_early = False
    for i in order:
        if not usable[i]:
            if previous is not None:
                stopped_early = True
                break
            continue
        if previous is not None:
            monotone = values[i] > previous if diverging else values[i] < previous
            if not monotone:
                stopped_early = True
                break
        keep[i] = True
        previous = values[i]
        last_kept = i
    if stopped_early and last_kept is not None:
        # the innermost point borders the detected plateau and is suspect
        keep[last_kept] = False
    return keep


def lowest_decade_fit(reduced, values, floor: float = 0.0,
                      diverging: bool = False, decade: float = 10.0,
                      min_points: int = 6) -> PowerLawFit:
    """Power-law fit over the lowest usable decade of reduced couplings."""
    reduced = np.asarray(reduced, dtype=float)
    values = np.asarray(values, dtype=float)
    mask = asymptotic_mask(reduced, values, floor, diverging)
    if mask.sum() < min_points:
        raise DomainError(
            f"only {int(mask.sum())} usable points after noise trimming")
    x, y = reduced[mask], values[mask]
    top = x.min() * decade
    while np.sum(x <= top * (1 + 1e-9)) < min_points:
        top *= decade ** 0.25
    window = x <= top * (1 + 1e-9)
    return fit_power_law(np.column_stack([x[window], np.abs(y[window])]))


# ---------------------------------------------------------------------------
# exponent reports


@dataclass(frozen=True)
class ExponentReport:
    phase: Phase
    n_sites: int
    jbar: float
    window: tuple[float, float]
    gamma_mf: PowerLawFit | None
    gamma_f: PowerLawFit | None
    photon_exponents: dict[int, PowerLawFit]
    squeezing_exponents: dict[int, PowerLawFit]
    hessian_exponents: dict[str, PowerLawFit]
    site_labels: dict[int, str]
    checks: dict[str, bool]
    warnings: tuple[str, ...]

    @property
    def expected_gamma_f(self) -> float:
        return (self.n_sites - 1) / 2.0


def extract_exponents(params: ModelParams,
                      window: tuple[float, float] = (1e-7, 1e-2),
                      points_per_decade: int = 25,
                      opts: SolverOptions | None = None) -> ExponentReport:
    """Sweep the superradiant side of the transition and fit every critical
    exponent.

    ``params.g`` is ignored; the sweep surrounds the critical point of
    ``params``'s hopping sign.  Sites are labelled unpaired/paired in the
    frustrated phase and the structural expectations (unpaired-site photon
    exponent matching the mean-field gap exponent, paired sites matching the
    frustrated one, Hessian exponents twice the gap exponents) are reported
    as boolean checks.
    """
    spec = SweepSpec(jbar=params.jbar, n_sites=params.n_sites,
                     omega0=params.omega0, Omega=params.Omega,
                     reduced_min=window[0], reduced_max=window[1],
                     points_per_decade=points_per_decade, sides="above")
    result = run_sweep(spec, opts)
    warnings = list(dict.fromkeys(result.warnings))
    if params.n_sites > 7:
        warnings.append(
            "frustration exponents for more than 7 sites extrapolate the "
            "(N-1)/2 law beyond its validated range")

    frustrated = params.jbar > 0
    eps_floor = CRITICAL_REGIME_FACTOR * params.omega0

    def fit(observable, index, floor=0.0, diverging=False):
        reduced, values = result.series(observable, str(index))
        if len(reduced) < 6:
            return None
        try:
            return lowest_decade_fit(reduced, values, floor, diverging)
        except (DomainError, FitQualityError) as exc:
            warnings.append(f"{observable}[{index}]: {exc}")
            return None

    photon, squeeze = {}, {}
    for site in range(1, params.n_sites + 1):
        photon[site] = fit("photon_numbers", site, diverging=True)
        squeeze[site] = fit("squeezing", site, diverging=True)

    if frustrated:
        gamma_mf = fit("gaps", "mf", floor=eps_floor)
        gamma_f = fit("gaps", "f", floor=eps_floor)
        hessian = {"mf": fit("hessian_eigenvalues", "mf", floor=HESSIAN_FLOOR),
                   "f": fit("hessian_eigenvalues", "f", floor=HESSIAN_FLOOR)}
        labels = {site: ("unpaired" if site == 1 else "paired")
                  for site in range(1, params.n_sites + 1)}
    else:
        gamma_mf = fit("gaps", 1, floor=eps_floor)
        gamma_f = None
        hessian = {"mf": fit("hessian_eigenvalues", 1, floor=HESSIAN_FLOOR)}
        labels = {site: "uniform" for site in range(1, params.n_sites + 1)}

    checks = _structural_checks(params.n_sites, frustrated, gamma_mf, gamma_f,
                                photon, squeeze, hessian)
    return ExponentReport(
        phase=Phase.FSP if frustrated else Phase.NFSP,
        n_sites=params.n_sites, jbar=params.jbar, window=window,
        gamma_mf=gamma_mf, gamma_f=gamma_f,
        photon_exponents=photon, squeezing_exponents=squeeze,
        hessian_exponents=hessian, site_labels=labels,
        checks=checks, warnings=tuple(warnings))


def _exponent_tolerance(n_sites: int) -> float:
    # +-0.05 at three sites, widening with the frustration exponent
    return 0.05 * (n_sites - 1) / 2.0


def _structural_checks(n_sites, frustrated, gamma_mf, gamma_f, photon,
                       squeeze, hessian) -> dict[str, bool]:
    checks: dict[str, bool] = {}
    tol_mf, tol_f = 0.05, _exponent_tolerance(n_sites)

    def close(fit, target, tol):
        return fit is not None and abs(abs(fit.exponent) - target) <= tol

    if frustrated:
        gamma_f_target = (n_sites - 1) / 2.0
        # the representative ferromagnetic pair flanks the unpaired site;
        # interior pairs share the asymptotic exponent but approach it more
        # slowly than double precision can resolve for the larger rings
        pair_sites = (2, n_sites)
        checks["gap_mf_is_half"] = close(gamma_mf, 0.5, tol_mf)
        checks["gap_f_is_lattice_law"] = close(gamma_f, gamma_f_target, tol_f)
        checks["unpaired_photon_matches_mf"] = close(photon.get(1), 0.5, tol_mf)
        checks["paired_photon_matches_f"] = all(
            close(photon.get(site), gamma_f_target, tol_f) for site in pair_sites)
        checks["squeezing_split_matches"] = (
            close(squeeze.get(1), 0.5, tol_mf)
            and all(close(squeeze.get(site), gamma_f_target, tol_f)
                    for site in pair_sites))
        checks["hessian_mf_is_one"] = close(hessian.get("mf"), 1.0, tol_mf)
        checks["hessian_f_is_n_minus_one"] = close(
            hessian.get("f"), float(n_sites - 1), 2 * tol_f)
    else:
        checks["gap_is_half"] = close(gamma_mf, 0.5, tol_mf)
        checks["photon_all_half"] = all(
            close(photon.get(site), 0.5, tol_mf) for site in range(1, n_sites + 1))
    return checks


# ---------------------------------------------------------------------------
# transition-order diagnostics


@dataclass(frozen=True)
class DerivativeDiagnostics:
    """Finite-difference derivatives of the ground-state energy along one
    axis, with the detected discontinuity."""

    axis: str
    center: float
    table: tuple[tuple[float, float, float, float], ...]  # (x, E, dE, d2E)
    d1_left: float
    d1_right: float
    d2_left: float
    d2_right: float
    discontinuity_order: int
    jump: float
    detected_location: float = np.nan

    @property
    def d1_jump(self) -> float:
        return self.d1_right - self.d1_left

    @property
    def d2_jump(self) -> float:
        return self.d2_right - self.d2_left


def _locate_jump(table, column):
    """Midpoint of the consecutive valid table entries with the largest
    derivative change."""
    xs = [row[0] for row in table]
    values = [row[column] for row in table]
    best, location = 0.0, np.nan
    previous = None
    for x, value in zip(xs, values):
        if np.isnan(value):
            continue
        if previous is not None:
            x0, v0 = previous
            if abs(value - v0) > best:
                best, location = abs(value - v0), 0.5 * (x0 + x)
        previous = (x, value)
    return location, best


def _one_sided_d1(f, center, h, sign):
    # first derivative limit from one side, never sampling the center itself
    # (the energy may be undefined exactly at the transition); the two-point
    # slope estimates f' at an offset, which one Richardson pass cancels
    def d1(step):
        return sign * (f(center + sign * 2 * step) - f(center + sign * step)) / step

    coarse, fine = d1(h), d1(h / 2.0)
    return 2.0 * fine - coarse


def _one_sided_d2(f, center, h, sign):
    # one-sided second derivative using points strictly off the center,
    # Richardson-extrapolated once to cancel the O(h) term
    def d2(step):
        f1 = f(center + sign * step)
        f2 = f(center + sign * 2 * step)
        f3 = f(center + sign * 3 * step)
        f4 = f(center + sign * 4 * step)
        return (2.0 * f1 - 5.0 * f2 + 4.0 * f3 - f4) / step ** 2

    coarse, fine = d2(h), d2(h / 2.0)
    return 2.0 * fine - coarse


def energy_derivative_diagnostics(params: ModelParams, axis: str,
                                  half_width: float = 4e-3,
                                  step: float = 1e-4,
                                  opts: SolverOptions | None = None
                                  ) -> DerivativeDiagnostics:
    """Scan the ground-state energy along ``axis`` ('g' or 'jbar') across its
    transition and report first/second derivative limits and the jump.

    The scan uses central differences on a uniform grid of spacing ``step``
    that excludes the transition point itself; the one-sided limits at the
    transition are Richardson-extrapolated.  For axis 'g' the transition is
    the critical coupling of ``params``'s hopping sign; for axis 'jbar' it
    is the decoupling point jbar = 0 at fixed g.
    """
    opts = opts or SolverOptions()
    if axis == "g":
        center = params.critical_coupling()

        def energy_at(x):
            return solve_ground_state(params.replace_g(float(x)), opts).config.energy
    elif axis == "jbar":
        center = 0.0

        def energy_at(x):
            moved = ModelParams(params.omega0, params.Omega, float(x), params.g,
                                params.n_sites)
            return solve_ground_state(moved, opts).config.energy
    else:
        raise ValidationError("axis must be 'g' or 'jbar'")

    steps = int(round(half_width / step))
    offsets = np.concatenate([np.arange(-steps, 0), np.arange(1, steps + 1)])
    xs = center + offsets * step
    cache: dict[float, float] = {}

    def cached(x):
        key = float(x)
        if key not in cache:
            cache[key] = energy_at(key)
        return cache[key]

    energies = np.array([cached(x) for x in xs])
    table = []
    for i, x in enumerate(xs):
        if 0 < i < len(xs) - 1 and abs(xs[i + 1] - xs[i - 1] - 2 * step) < step * 1e-6:
            d1 = (energies[i + 1] - energies[i - 1]) / (2 * step)
            d2 = (energies[i + 1] - 2 * energies[i] + energies[i - 1]) / step ** 2
        else:
            d1 = d2 = np.nan
        table.append((float(x), float(energies[i]), float(d1), float(d2)))

    d1_left = _one_sided_d1(cached, center, step, -1.0)
    d1_right = _one_sided_d1(cached, center, step, +1.0)
    d2_left = _one_sided_d2(cached, center, step, -1.0)
    d2_right = _one_sided_d2(cached, center, step, +1.0)

    d1_jump = d1_right - d1_left
    d2_jump = d2_right - d2_left
    scale = max(1.0, abs(d1_left), abs(d1_right))
    table = tuple(table)
    if abs(d1_jump) > 1e-3 * scale:
        order, jump = 1, d1_jump
        location, _ = _locate_jump(table, 2)
    else:
        order, jump = 2, d2_jump
        location, _ = _locate_jump(table, 3)
    return DerivativeDiagnostics(axis, float(center), table,
                                 float(d1_left), float(d1_right),
                                 float(d2_left), float(d2_right),
                                 order, float(jump), float(location))
