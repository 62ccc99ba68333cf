from pathlib import Path

import pytest

from attrition.config import ConfigError, load_config, parse_config

ROOT = Path(__file__).resolve().parents[1]

BASE = """\
[model]
type = price
types = 1, 2, 3
lambda = 0.35
F = 1

[scenario]
p_terminal = 0.01, 0.495, 0.495
sigma = 0.5
dt = 0.1
r = 0.1
t_bar = 10
"""


def test_parse_baseline():
    cfg = parse_config(BASE)
    assert cfg.model == "price" and cfg.model_params == {"lam": 0.35, "F": 1.0}
    assert cfg.steps == 100 and cfg.sigma_value() == 0.5 and cfg.tol == 1e-6
    assert cfg.output_dir is None and cfg.sweep_sigma == ()


def test_bundled_configs_load():
    for name in ("price_baseline", "labor", "bargaining"):
        assert load_config(ROOT / "configs" / f"{name}.ini").model in {"price", "labor", "bargaining"}


def test_sweep_and_per_period_sigma():
    text = BASE.replace("t_bar = 10", "t_bar = 0.3").replace("sigma = 0.5", "sigma = 0.1, 0.2, 0.3")
    text += "\n[sweep]\nsigma = 0.25, 0.5\ndt = 0.1, 0.05\n"
    cfg = parse_config(text)
    assert cfg.sigma_value() == [0.1, 0.2, 0.3]
    assert cfg.sweep_sigma == (0.25, 0.5) and cfg.sweep_dt == (0.1, 0.05)


@pytest.mark.parametrize(
    "old, new, line, field",
    [
        ("lambda = 0.35", "lambda = abc", 4, "model.lambda"),
        ("dt = 0.1", "dt = -0.1", 10, "scenario.dt"),
        ("t_bar = 10", "t_bar = 10.05", 12, "scenario.t_bar"),
        ("p_terminal = 0.01, 0.495, 0.495", "p_terminal = 0.5, 0.5", 8, "scenario.p_terminal"),
        ("p_terminal = 0.01, 0.495, 0.495", "p_terminal = 0.2, 0.2, 0.2", 8, "scenario.p_terminal"),
        ("sigma = 0.5", "sigma = 0.5, 0.5", 9, "scenario.sigma"),
        ("type = price", "type = auction", 2, "model.type"),
        ("types = 1, 2, 3", "types = 1, 3, 2", 3, "model.types"),
        ("F = 1", "F = 1\nfoo = 2", 6, "model.foo"),
    ],
)
def test_errors_name_line_and_field(old, new, line, field):
    with pytest.raises(ConfigError) as info:
        parse_config(BASE.replace(old, new))
    assert info.value.line == line and info.value.field == field
    assert f"line {line}" in str(info.value) and field in str(info.value)


def test_missing_field_and_section():
    with pytest.raises(ConfigError, match="scenario.r"):
        parse_config(BASE.replace("r = 0.1\n", ""))
    with pytest.raises(ConfigError, match=r"\[scenario\]"):
        parse_config(BASE.split("[scenario]")[0])


def test_unreadable_file(tmp_path):
    with pytest.raises(ConfigError, match="cannot read"):
        load_config(tmp_path / "absent.ini")
