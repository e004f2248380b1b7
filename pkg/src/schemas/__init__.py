from src.schemas.config import ExperimentConfig
from src.schemas.potential import PotentialSpec, TermSpec

__all__ = ["ExperimentConfig", "PotentialSpec", "TermSpec"]
