"""
Tests for experiment configuration loading and validation.
"""

import pytest
from pydantic import ValidationError

from src.cli.config_loader import load_config
from src.schemas.config import DiscreteParams, ExperimentConfig, HolderParams, ScanParams
from src.utils.errors import ConfigError

MINIMAL = """
[potential]
p = 2
alpha = 0.5

[[potential.terms]]
c_re = 0.5
phi = 1.0
envelope = { kind = "power-decay", exponent = 1.0 }
"""


@pytest.fixture
def write_config(tmp_path):
    def write(text: str, name: str = "experiment.toml"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return write


def test_minimal_file_gets_defaults(write_config):
    cfg = load_config(write_config(MINIMAL))

    assert cfg.scan.n_grid == 2048
    assert cfg.simulate.tol == 1e-10
    assert cfg.scan.tol == 1e-8
    assert cfg.seed == 0
    assert cfg.out_dir is None
    assert cfg.potential.terms[0].envelope.kind == "power-decay"


def test_seed_override(write_config):
    assert load_config(write_config(MINIMAL), seed=42).seed == 42


def test_alpha_out_of_range_names_alpha(write_config):
    with pytest.raises(ConfigError) as exc_info:
        load_config(write_config(MINIMAL.replace("alpha = 0.5", "alpha = 1.0")))
    assert exc_info.value.key == "potential.alpha"
    assert "alpha" in str(exc_info.value)


@pytest.mark.parametrize(
    "extra, key",
    [
        ("foo = 1\n", "foo"),
        ("[scan]\nfoo = 1\n", "scan.foo"),
    ],
)
def test_unknown_key_is_rejected(write_config, extra, key):
    with pytest.raises(ConfigError) as exc_info:
        load_config(write_config(extra + MINIMAL if "[" not in extra else MINIMAL + extra))
    assert exc_info.value.key == key


def test_envelope_error_path_skips_kind_tag(write_config):
    text = MINIMAL.replace("exponent = 1.0", "exponent = -1.0")
    with pytest.raises(ConfigError) as exc_info:
        load_config(write_config(text))
    assert exc_info.value.key == "potential.terms.0.exponent"


def test_parse_error(write_config):
    with pytest.raises(ConfigError) as exc_info:
        load_config(write_config("[potential\np = 2\n"))
    assert exc_info.value.key is None
    assert "cannot parse" in str(exc_info.value)


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError, match="not found"):
        load_config(tmp_path / "missing.toml")


def test_missing_potential_section(write_config):
    with pytest.raises(ConfigError) as exc_info:
        load_config(write_config("seed = 1\n"))
    assert exc_info.value.key == "potential"


def test_scan_params_validation():
    with pytest.raises(ValidationError):
        ScanParams(eta_min=2.0, eta_max=1.0)
    with pytest.raises(ValidationError):
        ScanParams(n_grid=1)

    scales = ScanParams(eta_min=1.0, eta_max=3.0).scales()
    assert len(scales) == 8
    assert scales[0] / scales[-1] == pytest.approx(128.0)
    assert ScanParams(box_scales=(0.1, 0.01, 0.001)).scales() == (0.1, 0.01, 0.001)


def test_holder_and_discrete_params_validation():
    with pytest.raises(ValidationError):
        HolderParams(alphas=(0.5, 1.0))
    with pytest.raises(ValidationError):
        DiscreteParams(values_re=(0.1, 0.2), values_im=(0.1,))
    with pytest.raises(ValidationError):
        DiscreteParams(kind="oprl", a=(1.0,), b_next=())


def test_psi_grid():
    cfg = ExperimentConfig.model_validate({"potential": {"p": 2, "alpha": 0.5}})
    assert cfg.psi_grid()[0] == 0.0
    assert cfg.psi_grid()[-1] == 1.0
    assert len(cfg.psi_grid()) == 101

    single = cfg.model_copy(update={"holder": HolderParams(n_psi=1)})
    assert single.psi_grid() == [0.5]
