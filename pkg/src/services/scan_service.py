"""
Energy-grid scans, divergence maps, box-counting dimension and Hölder checks.
"""

import asyncio
import math
from typing import Optional, Sequence

import numpy as np
from scipy import integrate, stats

from src.config.logging_conf import get_logger
from src.config.settings import settings
from src.models.potential import Potential
from src.models.reports import DimensionEstimate, ScanPoint, ScanReport
from src.models.trajectory import PruferTrajectory
from src.services.bound_service import small_divisor_sum, total_bound
from src.services.divisor_service import catalan, eval_h
from src.services.prufer_service import PruferService
from src.utils.errors import DegenerateFitError, InfiniteBoundError, PoleError, WorkbenchError
from src.utils.intervals import cells_to_intervals, mask_to_intervals

logger = get_logger(__name__)

DEFAULT_SCAN_TOL = 1e-8
GROWTH_PHASES = (0.0, math.pi / 2)
BOX_EDGE_SLACK = 1e-9


class ScanService:
    """
    Service for scanning energy grids for candidate exceptional energies.

    Per-energy work runs in worker threads, at most ``threads`` at a time; the
    report is assembled in grid order.
    """

    def __init__(self, prufer_service: Optional[PruferService] = None, threads: Optional[int] = None):
        self.prufer = prufer_service or PruferService()
        self.threads = threads or settings.WORKBENCH_THREADS

    @staticmethod
    def growth_statistic(traj: PruferTrajectory) -> float:
        """sup over x in [x_max/2, x_max] of |log R(x) - log R(x_max/2)|."""
        x_mid = traj.x[-1] / 2
        reference = float(np.interp(x_mid, traj.x, traj.log_r))
        window = traj.log_r[traj.x >= x_mid]
        return float(np.max(np.abs(window - reference)))

    def _divergence_flags(self, pot: Potential, eta: float, cap: float) -> int:
        flags = 0
        for j in range(1, pot.p):
            value = small_divisor_sum(pot, j, eta)
            if not value.finite or value.value >= cap:
                flags |= 1 << (j - 1)
        return flags

    def _evaluate_point(
        self,
        pot: Potential,
        eta: float,
        x_max: float,
        growth_threshold: float,
        cap: float,
        tol: float,
        measure_growth: bool,
    ) -> ScanPoint:
        flags = self._divergence_flags(pot, eta, cap)
        try:
            bound = total_bound(pot, eta).total
        except InfiniteBoundError:
            bound = math.inf

        growth = math.nan
        error = None
        if measure_growth:
            try:
                growth = max(
                    self.growth_statistic(self.prufer.integrate_prufer(pot, eta, x_max, theta0, tol))
                    for theta0 in GROWTH_PHASES
                )
            except WorkbenchError as e:
                logger.warning(f"[ScanService] Integration failed at eta={eta}: {e}")
                error = str(e)

        flagged = flags != 0 or growth > growth_threshold
        return ScanPoint(
            eta=eta,
            growth_stat=growth,
            divergent_flags=flags,
            bound_value=bound,
            flagged=flagged,
            error=error,
        )

    async def scan_energies_async(
        self,
        pot: Potential,
        eta_min: float,
        eta_max: float,
        n_grid: int,
        x_max: float,
        growth_threshold: float = 1.0,
        cap: float = 1e3,
        tol: float = DEFAULT_SCAN_TOL,
        measure_growth: bool = True,
    ) -> ScanReport:
        """
        Scan a uniform eta grid.

        At every grid point the small-divisor sums j < p are compared with
        ``cap``, the boundedness estimate is evaluated and, if
        ``measure_growth`` is set, the Prüfer system is integrated from
        theta0 = 0 and pi/2. A point is flagged when a sum diverges or the
        growth statistic exceeds ``growth_threshold``.

        Returns:
            ScanReport with points in grid order.
        """
        if not 0 < eta_min < eta_max:
            raise ValueError(f"need 0 < eta_min < eta_max, got {eta_min}, {eta_max}")
        if n_grid < 2:
            raise ValueError(f"n_grid must be >= 2, got {n_grid}")

        grid = np.linspace(eta_min, eta_max, n_grid).tolist()
        semaphore = asyncio.Semaphore(self.threads)

        async def run(eta: float) -> ScanPoint:
            async with semaphore:
                return await asyncio.to_thread(
                    self._evaluate_point, pot, eta, x_max, growth_threshold, cap, tol, measure_growth
                )

        logger.info(f"[ScanService] Scanning {n_grid} energies in [{eta_min}, {eta_max}]")
        points = await asyncio.gather(*(run(eta) for eta in grid))

        report = ScanReport(
            eta_min=eta_min,
            eta_max=eta_max,
            n_grid=n_grid,
            x_max=x_max,
            growth_threshold=growth_threshold,
            cap=cap,
            points=list(points),
            flagged_intervals=mask_to_intervals(grid, [p.flagged for p in points]),
        )
        logger.info(
            f"[ScanService] {sum(p.flagged for p in points)} flagged points in "
            f"{len(report.flagged_intervals)} intervals, {len(report.failed)} failures"
        )
        return report

    def scan_energies(self, *args, **kwargs) -> ScanReport:
        """Synchronous wrapper around scan_energies_async."""
        return asyncio.run(self.scan_energies_async(*args, **kwargs))


def divergence_set(
    pot: Potential, j: int, eta_grid: Sequence[float], cap: float
) -> list[tuple[float, float]]:
    """
    Maximal grid runs where the j-th small-divisor sum is infinite or >= cap.
    """
    if not 1 <= j <= pot.p - 1:
        raise ValueError(f"j must satisfy 1 <= j <= p-1 = {pot.p - 1}, got {j}")
    if cap <= 0:
        raise ValueError(f"cap must be positive, got {cap}")
    mask = []
    for eta in eta_grid:
        value = small_divisor_sum(pot, j, float(eta))
        mask.append(not value.finite or value.value >= cap)
    return mask_to_intervals(list(eta_grid), mask)


def _count_boxes(intervals: Sequence[tuple[float, float]], eps: float) -> int:
    boxes: set[int] = set()
    for lo, hi in intervals:
        first = math.floor(lo / eps + BOX_EDGE_SLACK)
        last = max(first, math.ceil(hi / eps - BOX_EDGE_SLACK) - 1)
        boxes.update(range(first, last + 1))
    return len(boxes)


def box_counting_dim(
    intervals: Sequence[tuple[float, float]], scales: Sequence[float]
) -> DimensionEstimate:
    """
    Box-counting dimension of a finite union of intervals.

    Boxes are [i eps, (i+1) eps); the slope of log N(eps) against log(1/eps)
    is fitted by least squares and reported with a 95% confidence half-width.

    Raises:
        DegenerateFitError: If fewer than 3 scales are given or they span
            less than two decades.
    """
    if len(scales) < 3:
        raise DegenerateFitError(f"need at least 3 scales, got {len(scales)}")
    if min(scales) <= 0:
        raise DegenerateFitError("scales must be positive")
    if max(scales) / min(scales) < 100:
        raise DegenerateFitError("scales must span at least two decades")

    counts = tuple(_count_boxes(intervals, eps) for eps in scales)
    if not any(counts):
        return DimensionEstimate(tuple(scales), counts, 0.0, 0.0, degenerate=True)

    fit = stats.linregress(np.log(1 / np.asarray(scales)), np.log(counts))
    width = float(stats.t.ppf(0.975, len(scales) - 2) * fit.stderr)
    logger.debug(f"[ScanService] Box-counting slope {fit.slope:.4f} ± {width:.2g}")
    return DimensionEstimate(tuple(scales), counts, float(fit.slope), width)


def box_counting_from_mask(
    grid: Sequence[float], mask: Sequence[bool], scales: Sequence[float]
) -> DimensionEstimate:
    """Box-counting dimension of a point mask on a uniform grid, read as cells [x_i, x_i + h)."""
    step = (grid[-1] - grid[0]) / (len(grid) - 1)
    return box_counting_dim(cells_to_intervals(grid, mask, step), scales)


def _power_integral(alpha: float, psi: float, limit: int) -> float:
    total = 0.0
    if psi > 0:
        if psi <= 1:
            total += integrate.quad(
                lambda x: 1.0, 0.0, psi, weight="alg", wvar=(0.0, -alpha), limit=limit
            )[0]
        else:
            total += integrate.quad(lambda x: (psi - x) ** -alpha, 0.0, 1.0, limit=limit)[0]
    if psi < 1:
        if psi >= 0:
            total += integrate.quad(
                lambda x: 1.0, psi, 1.0, weight="alg", wvar=(-alpha, 0.0), limit=limit
            )[0]
        else:
            total += integrate.quad(lambda x: (x - psi) ** -alpha, 0.0, 1.0, limit=limit)[0]
    return total


def holder_bound(alpha: float) -> float:
    """sup over psi of the integral of |eta - psi|^-alpha over [0, 1], attained at psi = 1/2."""
    return 2**alpha / (1 - alpha)


def holder_check(alpha: float, psi_grid: Sequence[float], n_quad: int = 200) -> tuple[float, float]:
    """
    Max over psi of the integral of |eta - psi|^-alpha d eta over [0, 1].

    The singularity is handled with algebraic-weight quadrature after
    splitting at psi. ``n_quad`` bounds the number of subintervals.

    Returns:
        (max_integral, 2^alpha / (1 - alpha)).
    """
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    if not psi_grid:
        raise ValueError("psi_grid is empty")
    best = max(_power_integral(alpha, float(psi), n_quad) for psi in psi_grid)
    return best, holder_bound(alpha)


def h_holder_check(J: int, alpha: float, phis: Sequence[float], n_quad: int = 200) -> tuple[float, float]:
    """
    Check that the integral of |h_J(eta; phis)|^alpha over [0, 1] is at most C_J D_{J alpha}.

    C_J is the J-th Catalan number and D_beta = 2^beta / (1 - beta).

    Returns:
        (integral, bound).
    """
    if J < 1 or len(phis) != J:
        raise ValueError(f"need J >= 1 frequencies, got J={J} and {len(phis)} phis")
    if not 0 < alpha or J * alpha >= 1:
        raise ValueError(f"need 0 < J * alpha < 1, got J={J}, alpha={alpha}")
    phis = [float(phi) for phi in phis]
    # h_J only has poles at sums of contiguous blocks of phis
    block_sums = {sum(phis[i:k]) for i in range(J) for k in range(i + 1, J + 1)}
    poles = sorted(s for s in block_sums if 0 < s < 1)

    def integrand(eta: float) -> float:
        try:
            return abs(float(eval_h(J, eta, phis))) ** alpha
        except PoleError:
            return 0.0

    value = integrate.quad(integrand, 0.0, 1.0, points=poles or None, limit=n_quad)[0]
    return value, catalan(J) * holder_bound(J * alpha)
