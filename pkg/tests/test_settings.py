import json

import pytest

from itekit.errors import ConfigError
from itekit.settings import CACHE_ENV, digest, load_config, load_defaults, merge

PAIR = {
    "pair": {
        "m1": {"dimension": 2, "domain": {"cap": 1}, "warp": [0, 1], "index": [1]},
        "m2": {"dimension": 2, "domain": {"cap": 1}, "warp": [0, 1], "index": [2]},
        "zeta": [0],
    }
}


@pytest.fixture
def pair_file(tmp_path):
    path = tmp_path / "pair.json"
    path.write_text(json.dumps(PAIR), encoding="utf-8")
    return path


class TestSettings:
    # Tests that packaged defaults carry every tolerance
    def test_defaults(self, monkeypatch):
        monkeypatch.delenv("ITEKIT_ENV", raising=False)
        config = load_config()
        assert config.tolerances.ode_rel == 1e-10
        assert config.tolerances.root_rel == 1e-9
        assert config.tolerances.pole_tol == 1e-7
        assert config.tolerances.degeneracy_tol == 1e-8
        assert config.search.scan_divisions == 64
        assert config.search.l_max == 40
        assert config.threads == 1

    # Tests that the test profile lowers the search sizes
    def test_testing_profile(self):
        assert load_defaults("test")["search"]["l_max"] == 12

    # Tests that user values are merged over the defaults key by key
    def test_merge(self):
        merged = merge(load_defaults(), {"tolerances": {"root_rel": 1e-8}})
        assert merged["tolerances"]["root_rel"] == 1e-8
        assert merged["tolerances"]["ode_rel"] == 1e-10

    # Tests that unknown keys are refused before any computation
    @pytest.mark.parametrize(
        "user",
        [{"bogus": 1}, {"tolerances": {"bogus": 1}}, {"search": {"l_max": "many"}}, {"search": {"l_max": 2.5}}],
    )
    def test_schema(self, user):
        with pytest.raises(ConfigError):
            merge(load_defaults(), user)

    # Tests that a pair block builds a validated pair
    def test_pair(self, pair_file):
        config = load_config(pair_file)
        pair = config.pair()
        assert pair.case.value == "A21"
        assert [m.name for m in config.manifolds()] == ["m1", "m2"]

    # Tests that the digest ignores the thread count and cache directory
    def test_digest_plumbing(self, pair_file):
        one = load_config(pair_file, {"threads": 1})
        four = load_config(pair_file, {"threads": 4, "cache_dir": "/tmp/elsewhere"})
        assert one.digest == four.digest
        assert one.echo()["config_digest"] == digest(one.results)

    # Tests that cache directory precedence is flag, environment, config
    def test_cache_dir(self, pair_file, monkeypatch, tmp_path):
        config = load_config(pair_file, {"cache_dir": str(tmp_path / "cfg")})
        monkeypatch.setenv(CACHE_ENV, str(tmp_path / "env"))
        assert config.resolved_cache_dir(str(tmp_path / "flag")) == tmp_path / "flag"
        assert config.resolved_cache_dir() == tmp_path / "env"
        monkeypatch.delenv(CACHE_ENV)
        assert config.resolved_cache_dir() == tmp_path / "cfg"

    # Tests that TOML configs are read by suffix
    def test_toml(self, tmp_path):
        path = tmp_path / "run.toml"
        path.write_text("threads = 3\n[search]\nl_max = 5\n", encoding="utf-8")
        config = load_config(path)
        assert config.threads == 3
        assert config.search.l_max == 5

    # Tests that a missing file is a ConfigError
    def test_missing(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(tmp_path / "nope.json")
