"""
Experiment configuration read from a TOML file.

Every section rejects unknown keys. Defaults are the documented desk-scale
values; every one of them can be overridden in the file.
"""

import math
from pathlib import Path
from typing import Literal, Optional

from pydantic import Field, PositiveFloat, PositiveInt, model_validator

from src.schemas.potential import PotentialSpec, TermSpec, WorkbenchSchemaModel


class ScanParams(WorkbenchSchemaModel):
    eta_min: PositiveFloat = 0.5
    eta_max: PositiveFloat = 3.0
    n_grid: int = Field(2048, ge=2)
    # the growth-flagged band around a resonance narrows like 1 / x_max
    x_max: PositiveFloat = 600.0
    growth_threshold: PositiveFloat = 1.0
    cap: PositiveFloat = 1e3
    tol: PositiveFloat = 1e-8
    measure_growth: bool = True
    # None: eight dyadic fractions of the eta range
    box_scales: Optional[tuple[PositiveFloat, ...]] = None

    @model_validator(mode="after")
    def _check_range(self) -> "ScanParams":
        if self.eta_min >= self.eta_max:
            raise ValueError("eta_min must be smaller than eta_max")
        return self

    def scales(self) -> tuple[float, ...]:
        if self.box_scales is not None:
            return self.box_scales
        width = self.eta_max - self.eta_min
        return tuple(width * 2.0**-k for k in range(2, 10))


class VerifyParams(WorkbenchSchemaModel):
    J_max: int = Field(5, ge=2, le=8)
    trials: PositiveInt = 100
    catalan_max: int = Field(12, ge=1)


class SimulateParams(WorkbenchSchemaModel):
    etas: tuple[PositiveFloat, ...] = (5.0,)
    x_max: PositiveFloat = 200.0
    tol: PositiveFloat = 1e-10
    theta0: float = 0.0
    n_samples: int = Field(2001, ge=2)
    route_tolerance: PositiveFloat = 1e-6
    osc_b: PositiveFloat = 50.0
    window_T: PositiveFloat = 2 * math.pi
    n_windows: int = Field(8, ge=1)


class BoundParams(WorkbenchSchemaModel):
    etas: tuple[PositiveFloat, ...] = (2.0,)
    a: float = Field(0.0, ge=0.0)
    composition_J_max: int = Field(3, ge=2, le=6)
    envelope_points: tuple[float, ...] = (0.0, 1.0, 10.0)


class DiscreteParams(WorkbenchSchemaModel):
    """
    Coefficients are given either as structured terms or as raw values.

    For ``kind = "opuc"`` use ``terms`` or ``values_re``/``values_im``; for
    ``kind = "oprl"`` use ``a_minus_one_terms`` and ``b_terms`` or raw
    ``a``/``b_next``.
    """

    kind: Literal["opuc", "oprl"] = "opuc"
    N: PositiveInt = 1000
    etas: tuple[float, ...] = (1.0,)
    theta0: float = 0.0
    terms: tuple[TermSpec, ...] = ()
    values_re: tuple[float, ...] = ()
    values_im: tuple[float, ...] = ()
    a_minus_one_terms: tuple[TermSpec, ...] = ()
    b_terms: tuple[TermSpec, ...] = ()
    a: tuple[PositiveFloat, ...] = ()
    b_next: tuple[float, ...] = ()
    szego_tolerance: PositiveFloat = 1e-9

    @model_validator(mode="after")
    def _check_source(self) -> "DiscreteParams":
        if self.values_im and len(self.values_im) != len(self.values_re):
            raise ValueError("values_im must match values_re in length")
        if len(self.a) != len(self.b_next):
            raise ValueError("a and b_next must have the same length")
        return self


class HolderParams(WorkbenchSchemaModel):
    alphas: tuple[float, ...] = (0.25, 0.5, 0.75)
    n_psi: int = Field(101, ge=1)
    n_quad: int = Field(200, ge=10)
    h_phis: tuple[float, ...] = (0.2, 0.3)

    @model_validator(mode="after")
    def _check_alphas(self) -> "HolderParams":
        if any(not 0 < alpha < 1 for alpha in self.alphas):
            raise ValueError("every alpha must lie in (0, 1)")
        return self


class ExperimentConfig(WorkbenchSchemaModel):
    potential: PotentialSpec
    out_dir: Optional[Path] = None
    seed: int = 0
    scan: ScanParams = Field(default_factory=ScanParams)
    verify: VerifyParams = Field(default_factory=VerifyParams)
    simulate: SimulateParams = Field(default_factory=SimulateParams)
    bound: BoundParams = Field(default_factory=BoundParams)
    discrete: DiscreteParams = Field(default_factory=DiscreteParams)
    holder: HolderParams = Field(default_factory=HolderParams)

    def psi_grid(self) -> list[float]:
        n = self.holder.n_psi
        return [0.5] if n == 1 else [i / (n - 1) for i in range(n)]

