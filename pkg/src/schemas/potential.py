"""
Pydantic schemas for envelopes, oscillatory terms and potential specs.

These are the records read from experiment files. Each envelope kind knows
its pointwise value, its total and tail variation, and its L^p tail integral
in closed form.
"""

import bisect
import math
from typing import Annotated, Literal, Union

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    PositiveFloat,
    ValidationInfo,
    field_validator,
    model_validator,
)


class WorkbenchSchemaModel(BaseModel):
    model_config = ConfigDict(
        extra="forbid",
        frozen=True,
        str_strip_whitespace=True,
        populate_by_name=True,
    )


class PowerDecayEnvelope(WorkbenchSchemaModel):
    """gamma(x) = (1 + x/x0)^(-exponent)."""

    kind: Literal["power-decay"] = "power-decay"
    x0: PositiveFloat = 1.0
    exponent: PositiveFloat

    def value(self, x: float) -> float:
        return (1.0 + x / self.x0) ** (-self.exponent)

    def variation(self) -> float:
        return 1.0

    def tail_variation(self, a: float) -> float:
        return self.value(a)

    def variation_on(self, lo: float, hi: float) -> float:
        return self.value(lo) - self.value(hi)

    def lp_integral(self, p: float, a: float = 0.0) -> float:
        power = self.exponent * p
        if power <= 1.0:
            return math.inf
        return self.x0 / (power - 1.0) * (1.0 + a / self.x0) ** (1.0 - power)


class ExponentialEnvelope(WorkbenchSchemaModel):
    """gamma(x) = exp(-rate * x)."""

    kind: Literal["exponential"] = "exponential"
    rate: PositiveFloat

    def value(self, x: float) -> float:
        return math.exp(-self.rate * x)

    def variation(self) -> float:
        return 1.0

    def tail_variation(self, a: float) -> float:
        return self.value(a)

    def variation_on(self, lo: float, hi: float) -> float:
        return self.value(lo) - self.value(hi)

    def lp_integral(self, p: float, a: float = 0.0) -> float:
        return math.exp(-self.rate * p * a) / (self.rate * p)


class StepTrainEnvelope(WorkbenchSchemaModel):
    """
    Piecewise constant envelope.

    gamma(x) = values[i] on [breakpoints[i], breakpoints[i+1]), with
    breakpoints[0] == 0 and the last value equal to 0 on [breakpoints[-1], inf).
    """

    kind: Literal["step-train"] = "step-train"
    breakpoints: tuple[float, ...]
    values: tuple[float, ...]

    @model_validator(mode="after")
    def _check_shape(self) -> "StepTrainEnvelope":
        if len(self.breakpoints) != len(self.values) or not self.breakpoints:
            raise ValueError("breakpoints and values must be non-empty and equal length")
        if self.breakpoints[0] != 0.0:
            raise ValueError("first breakpoint must be 0")
        if any(b1 <= b0 for b0, b1 in zip(self.breakpoints, self.breakpoints[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        if any(not math.isfinite(v) for v in self.values + self.breakpoints):
            raise ValueError("step-train entries must be finite")
        if self.values[-1] != 0.0:
            raise ValueError("last step-train value must be 0")
        return self

    def value(self, x: float) -> float:
        i = bisect.bisect_right(self.breakpoints, x) - 1
        return self.values[max(i, 0)]

    def _jumps(self) -> list[tuple[float, float]]:
        return [
            (b, abs(v1 - v0))
            for b, v0, v1 in zip(self.breakpoints[1:], self.values, self.values[1:])
        ]

    def variation(self) -> float:
        return sum(j for _, j in self._jumps())

    def tail_variation(self, a: float) -> float:
        return sum(j for b, j in self._jumps() if b > a)

    def variation_on(self, lo: float, hi: float) -> float:
        return sum(j for b, j in self._jumps() if lo < b <= hi)

    def lp_integral(self, p: float, a: float = 0.0) -> float:
        total = 0.0
        for b0, b1, v in zip(self.breakpoints, self.breakpoints[1:], self.values):
            length = b1 - max(b0, a)
            if length > 0:
                total += abs(v) ** p * length
        return total


class ZeroEnvelope(WorkbenchSchemaModel):
    kind: Literal["zero"] = "zero"

    def value(self, x: float) -> float:
        return 0.0

    def variation(self) -> float:
        return 0.0

    def tail_variation(self, a: float) -> float:
        return 0.0

    def variation_on(self, lo: float, hi: float) -> float:
        return 0.0

    def lp_integral(self, p: float, a: float = 0.0) -> float:
        return 0.0


Envelope = Annotated[
    Union[PowerDecayEnvelope, ExponentialEnvelope, StepTrainEnvelope, ZeroEnvelope],
    Field(discriminator="kind"),
]


class TermSpec(WorkbenchSchemaModel):
    """One oscillatory term c * exp(-i*phi*x) * gamma(x)."""

    c_re: float
    c_im: float = 0.0
    phi: float
    envelope: Envelope
    placeholder: bool = False

    @model_validator(mode="after")
    def _check_coefficient(self) -> "TermSpec":
        if not self.placeholder and self.c_re == 0.0 and self.c_im == 0.0:
            raise ValueError("coefficient must be nonzero unless placeholder = true")
        return self

    @property
    def c(self) -> complex:
        return complex(self.c_re, self.c_im)

    def value(self, x: float) -> complex:
        """beta(x) = c * exp(-i*phi*x) * gamma(x)."""
        return self.c * complex(math.cos(self.phi * x), -math.sin(self.phi * x)) * (
            self.envelope.value(x)
        )

    def conjugate(self) -> "TermSpec":
        return self.model_copy(update={"c_im": -self.c_im, "phi": -self.phi})


class PotentialSpec(WorkbenchSchemaModel):
    p: int = Field(ge=2)
    alpha: float
    symmetrize: bool = True
    terms: tuple[TermSpec, ...] = ()

    @field_validator("alpha")
    @classmethod
    def _check_alpha(cls, alpha: float, info: ValidationInfo) -> float:
        p = info.data.get("p")
        if p is None:
            return alpha
        if not 0.0 < alpha < 1.0 / (p - 1):
            raise ValueError(f"alpha must lie in (0, 1/(p-1)) = (0, {1.0 / (p - 1)})")
        return alpha
