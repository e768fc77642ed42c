import pytest

from levywalk.config import ConfigError, default_config, from_mapping, load_config
from levywalk.environment import Constant, Exponential, Pareto, UniformInterval


def test_default_config_reference_model():
    cfg = default_config()
    assert cfg.dist == Pareto(alpha=1.5, xmin=1.0)
    assert cfg.density.mean_abs == 1.0
    assert cfg.mode == "quenched"
    assert cfg.master_seed == 20260816
    assert cfg.moment_orders == (1, 2, 4)
    assert cfg.threads == 1


def test_empty_mapping_gives_defaults():
    cfg, ref = from_mapping({}), default_config()
    assert cfg.dist == ref.dist
    assert cfg.density.weight_at(1) == ref.density.weight_at(1)
    assert (cfg.master_seed, cfg.mode, cfg.t_max, cfg.walkers) == \
        (ref.master_seed, ref.mode, ref.t_max, ref.walkers)
    assert cfg.averaging_steps == ref.averaging_steps


def test_full_round_trip_through_toml(tmp_path):
    text = """
master_seed = 42
mode = "annealed"
t_max = 500.0
grid_points = 3
walkers = 250
environments = 12
threads = 2
out_dir = "results"
moment_orders = [2]
dump_trajectory = true

[gaps]
kind = "exponential"
rate = 2.0

[jumps]
preset = "lazy-srw"

[verify]
checks = ["remark2"]
[verify.tolerances]
"remark2.path" = 1e-11

[pvp]
n_steps = 5000

[averaging]
n_list = [10, 100]
"""
    path = tmp_path / "run.toml"
    path.write_text(text)
    cfg = load_config(path)
    assert cfg.master_seed == 42
    assert cfg.mode == "annealed"
    assert cfg.dist == Exponential(2.0)
    assert cfg.density.stay_weight == 0.5
    assert cfg.walkers == 250
    assert cfg.checks == ("remark2",)
    assert cfg.tolerances == {"remark2.path": 1e-11}
    assert cfg.pvp_steps == 5000
    assert cfg.averaging_steps == (10, 100)
    assert cfg.dump_trajectory is True


def test_gap_kinds_parse():
    assert from_mapping({"gaps": {"kind": "constant", "value": 2.0}}).dist == Constant(2.0)
    assert from_mapping({"gaps": {"kind": "uniform", "lo": 0.5, "hi": 1.5}}
                        ).dist == UniformInterval(0.5, 1.5)
    assert from_mapping({"gaps": {"kind": "pareto", "alpha": 1.2}}
                        ).dist == Pareto(alpha=1.2, xmin=1.0)


def test_custom_jump_weights():
    cfg = from_mapping({"jumps": {"weights": [[0, 0.4], [1, 0.2], [2, 0.1]]}})
    assert cfg.density.stay_weight == pytest.approx(0.4)
    assert cfg.density.max_jump == 2


def test_unknown_keys_are_rejected_with_dotted_paths():
    with pytest.raises(ConfigError, match="wat: unknown key"):
        from_mapping({"wat": 1})
    with pytest.raises(ConfigError, match=r"gaps\.scale: unknown key"):
        from_mapping({"gaps": {"kind": "pareto", "scale": 2.0}})
    with pytest.raises(ConfigError, match=r"pvp\.steps: unknown key"):
        from_mapping({"pvp": {"steps": 10}})


def test_type_and_range_errors():
    with pytest.raises(ConfigError, match="t_max"):
        from_mapping({"t_max": -1.0})
    with pytest.raises(ConfigError, match="walkers"):
        from_mapping({"walkers": "many"})
    with pytest.raises(ConfigError, match="mode"):
        from_mapping({"mode": "mixed"})
    with pytest.raises(ConfigError, match="moment_orders"):
        from_mapping({"moment_orders": [1, -2]})
    with pytest.raises(ConfigError, match="dump_trajectory"):
        from_mapping({"dump_trajectory": "yes"})


def test_jumps_preset_and_weights_are_exclusive():
    with pytest.raises(ConfigError, match="not both"):
        from_mapping({"jumps": {"preset": "srw", "weights": [[1, 0.5]]}})
    with pytest.raises(ConfigError, match="preset"):
        from_mapping({"jumps": {"preset": "levy"}})


def test_bad_jump_weights_surface_as_config_errors():
    # one-sided mass 0.6 -> full mass 1.2: not a distribution
    with pytest.raises(ConfigError, match="weights"):
        from_mapping({"jumps": {"weights": [[0, 0.0], [1, 0.6]]}})
    with pytest.raises(ConfigError, match=r"weights\[0\]"):
        from_mapping({"jumps": {"weights": [[0.5, 0.4]]}})


def test_gap_parameter_errors_surface_as_config_errors():
    with pytest.raises(ConfigError, match="gaps"):
        from_mapping({"gaps": {"kind": "pareto", "alpha": 1.0}})
    with pytest.raises(ConfigError, match="gaps"):
        from_mapping({"gaps": {"kind": "nope"}})


def test_averaging_list_must_increase():
    with pytest.raises(ConfigError, match="increasing"):
        from_mapping({"averaging": {"n_list": [100, 10]}})


def test_verify_section_validation():
    with pytest.raises(ConfigError, match="checks"):
        from_mapping({"verify": {"checks": "thm1"}})
    with pytest.raises(ConfigError, match="tolerances"):
        from_mapping({"verify": {"tolerances": {"thm1.ks": "tight"}}})
    with pytest.raises(ConfigError, match="nonnegative"):
        from_mapping({"verify": {"tolerances": {"thm1.ks": -0.1}}})


def test_missing_file_and_bad_toml(tmp_path):
    with pytest.raises(ConfigError, match="cannot read"):
        load_config(tmp_path / "absent.toml")
    broken = tmp_path / "broken.toml"
    broken.write_text("walkers = [unclosed")
    with pytest.raises(ConfigError, match="invalid TOML"):
        load_config(broken)
