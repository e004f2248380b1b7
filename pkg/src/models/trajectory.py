"""
Sampled trajectories returned by the continuous and discrete integrators.

Arrays are owned by the trajectory and must not be mutated after it is
returned.
"""

from dataclasses import dataclass
from typing import Iterator

import numpy as np


@dataclass(frozen=True)
class IntegratorDiagnostics:
    steps: int
    nfev: int
    tol: float
    max_theta_jump: float = 0.0


@dataclass(frozen=True, eq=False)
class PruferTrajectory:
    """
    Modified Prüfer variables at the sample points, with E = eta^2 / 4.

    ``log_r[0]`` is 0 by normalization and ``theta`` is the continuous branch.
    """

    eta: float
    theta0: float
    x: np.ndarray
    log_r: np.ndarray
    theta: np.ndarray
    diagnostics: IntegratorDiagnostics

    @property
    def energy(self) -> float:
        return self.eta**2 / 4

    @property
    def samples(self) -> Iterator[tuple[float, float, float]]:
        return zip(self.x.tolist(), self.log_r.tolist(), self.theta.tolist())


@dataclass(frozen=True, eq=False)
class SolutionTrajectory:
    energy: float
    x: np.ndarray
    u: np.ndarray
    du: np.ndarray
    diagnostics: IntegratorDiagnostics

    @property
    def samples(self) -> Iterator[tuple[float, float, float]]:
        return zip(self.x.tolist(), self.u.tolist(), self.du.tolist())

    @property
    def quadratic(self) -> np.ndarray:
        """Q = u'^2 + E u^2, equal to (eta^2 / 4) R^2."""
        return self.du**2 + self.energy * self.u**2

    def wronskian(self, other: "SolutionTrajectory") -> np.ndarray:
        if self.x.shape != other.x.shape or not np.array_equal(self.x, other.x):
            raise ValueError("trajectories must share sample points")
        return self.u * other.du - self.du * other.u


@dataclass(frozen=True, eq=False)
class DiscreteTrajectory:
    """log r_n and theta_n for n = 0..N; c is 0 for OPUC and 1 for OPRL."""

    eta: float
    c: int
    log_r: np.ndarray
    theta: np.ndarray

    @property
    def samples(self) -> Iterator[tuple[int, float, float]]:
        return zip(range(len(self.log_r)), self.log_r.tolist(), self.theta.tolist())
