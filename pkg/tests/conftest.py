"""
Shared pytest configuration and fixtures.

This file contains the sample potentials used across the unit tests.
"""

import pytest

from src.models.potential import Potential
from src.schemas.potential import (
    ExponentialEnvelope,
    PowerDecayEnvelope,
    StepTrainEnvelope,
    TermSpec,
)
from src.services.potential_service import build_potential
from src.services.prufer_service import PruferService


def term(c: complex, phi: float, envelope) -> TermSpec:
    c = complex(c)
    return TermSpec(c_re=c.real, c_im=c.imag, phi=phi, envelope=envelope)


@pytest.fixture
def zero_potential() -> Potential:
    """V = 0."""
    return build_potential([], p=2, alpha=0.5)


@pytest.fixture
def single_term_potential() -> Potential:
    """One unsymmetrized term c = 1/2, phi = 1, gamma = e^{-x}."""
    return build_potential(
        [term(0.5, 1.0, ExponentialEnvelope(rate=1.0))], p=2, alpha=0.5, symmetrize=False
    )


@pytest.fixture
def two_term_potential() -> Potential:
    """Unsymmetrized terms c = (1/2, 1/4), phi = (1/3, 1/9), gamma = (1+x)^-1."""
    envelope = PowerDecayEnvelope(exponent=1.0)
    return build_potential(
        [term(0.5, 1 / 3, envelope), term(0.25, 1 / 9, envelope)],
        p=2,
        alpha=0.5,
        symmetrize=False,
    )


@pytest.fixture
def wigner_von_neumann_potential() -> Potential:
    """V(x) = 4 cos(x) / (1 + x) as the conjugate pair c = 2 at phi = +-1."""
    envelope = PowerDecayEnvelope(exponent=1.0)
    return build_potential([term(2.0, 1.0, envelope), term(2.0, -1.0, envelope)], p=2, alpha=0.5)


@pytest.fixture
def mixed_potential() -> Potential:
    """A real p = 3 potential mixing exponential, power-decay and step-train envelopes."""
    return build_potential(
        [
            term(0.3, 0.7, ExponentialEnvelope(rate=0.05)),
            term(0.2 + 0.1j, 1.9, PowerDecayEnvelope(exponent=0.5)),
            term(
                0.25,
                2.6,
                StepTrainEnvelope(breakpoints=(0.0, 10.0, 30.0, 60.0), values=(1.0, 0.5, 0.25, 0.0)),
            ),
        ],
        p=3,
        alpha=0.4,
    )


@pytest.fixture
def prufer_service() -> PruferService:
    return PruferService(tol=1e-10)
