import pytest

from respk.config import Config, ConfigError, is_prime, load_config


def test_defaults():
    cfg = load_config()
    assert cfg == Config()
    assert cfg.p == 2 and cfg.enum_cap == 10**6


def test_file_then_overrides(tmp_path, monkeypatch):
    path = tmp_path / "respk.conf"
    path.write_text("# caps\np: 3\nenum-cap: 500\nnormalizations: swap\n", encoding="utf-8")
    monkeypatch.setenv("RESPK_CONFIG", str(path))
    cfg = load_config()
    assert (cfg.p, cfg.enum_cap, cfg.normalizations) == (3, 500, ("swap",))
    assert load_config(p=5, enum_cap=None).p == 5


@pytest.mark.parametrize(
    "text", ["p: 4\n", "enum_cap: 0\n", "colour: blue\n", "p 3\n", "trunc_cap: many\n"]
)
def test_bad_files(tmp_path, text):
    path = tmp_path / "bad.conf"
    path.write_text(text, encoding="utf-8")
    with pytest.raises(ConfigError):
        load_config(str(path))


def test_is_prime():
    assert [n for n in range(20) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]
