import json

import pytest
from click.testing import CliRunner

from itekit import __version__
from itekit.cli.cli import cli, setup

setup()


def last_error(result):
    """The JSON error object, the last line of standard error."""

    return json.loads(result.stderr.strip().splitlines()[-1])


DISK = {"dimension": 2, "domain": {"cap": 1}, "warp": [0, 1], "index": [1]}


@pytest.fixture
def runner():
    try:
        return CliRunner(mix_stderr=False)
    except TypeError:
        return CliRunner()


@pytest.fixture
def write_config(tmp_path):
    def write(data, name="run.json"):
        path = tmp_path / name
        path.write_text(json.dumps(data), encoding="utf-8")
        return str(path)

    return write


@pytest.fixture
def pair_config(write_config):
    return write_config({"pair": {"m1": DISK, "m2": {**DISK, "index": [2]}}})


class TestCli:
    # Tests the version flag
    def test_version(self, runner):
        result = runner.invoke(cli, ["--version"])
        assert result.exit_code == 0
        assert result.output.strip() == f"itekit v{__version__}"

    # Tests that validate reports case and sign with the config echo
    def test_validate(self, runner, pair_config):
        result = runner.invoke(cli, ["--config", pair_config, "validate"])
        assert result.exit_code == 0
        data = json.loads(result.stdout)
        assert data["case"] == "A21"
        assert data["gamma"] == 1
        assert len(data["config_digest"]) == 64
        assert "threads" not in data["config"]

    # Tests that identical manifolds exit with code 2 and a JSON error
    def test_validate_identical(self, runner, write_config):
        path = write_config({"pair": {"m1": DISK, "m2": DISK}})
        result = runner.invoke(cli, ["--config", path, "validate"])
        assert result.exit_code == 2
        error = last_error(result)
        assert error["error"] == "assumption_violation"
        assert "message" in error

    # Tests that a missing config file exits with code 4
    def test_missing_config(self, runner, tmp_path):
        result = runner.invoke(cli, ["--config", str(tmp_path / "absent.json"), "validate"])
        assert result.exit_code == 4
        assert last_error(result)["error"] == "config_error"

    # Tests that the spectrum CSV starts with the digest line and is sorted by lambda
    def test_spectrum(self, runner, write_config, tmp_path):
        path = write_config({"manifold": DISK})
        out = tmp_path / "disk.csv"
        args = ["--config", path, "--cache-dir", str(tmp_path / "cache"), "--out", str(out)]
        result = runner.invoke(cli, args + ["spectrum", "--lambda-max", "30", "--l-max", "12"])
        assert result.exit_code == 0
        lines = out.read_text(encoding="utf-8").splitlines()
        assert lines[0].startswith("# config_digest=")
        assert lines[1] == "manifold,l,j,lambda,multiplicity"
        rows = [line.split(",") for line in lines[2:]]
        lambdas = [float(r[3]) for r in rows]
        assert lambdas == sorted(lambdas)
        assert lambdas[0] == pytest.approx(5.7831860, rel=1e-7)
        assert (tmp_path / "cache" / "spectra.db").exists()

    # Tests that thread count leaves the output unchanged
    def test_threads(self, runner, pair_config, tmp_path):
        args = ["--config", pair_config, "--cache-dir", str(tmp_path / "cache")]
        one = runner.invoke(cli, args + ["spectrum", "--lambda-max", "40", "--l-max", "12"])
        four = runner.invoke(cli, args + ["--threads", "4", "spectrum", "--lambda-max", "40", "--l-max", "12"])
        assert one.exit_code == four.exit_code == 0
        assert one.stdout == four.stdout

    # Tests the parameter-form symbol value at lambda = -1, xi = 1
    def test_symbol_value(self, runner, pair_config):
        result = runner.invoke(cli, ["--config", pair_config, "symbol", "--lambda=-1", "--xi", "1"])
        assert result.exit_code == 0
        data = json.loads(result.stdout)
        assert data["parameter"] is True
        assert data["symbols"][0]["value"] == pytest.approx(0.31783724519578205, abs=1e-12)

    # Tests that xi alone is refused
    def test_symbol_xi_only(self, runner, pair_config):
        result = runner.invoke(cli, ["--config", pair_config, "symbol", "--xi", "1"])
        assert result.exit_code == 4

    # Tests that a lambda on the cut is a symbol error
    def test_symbol_cut(self, runner, pair_config):
        result = runner.invoke(cli, ["--config", pair_config, "symbol", "--lambda", "2"])
        assert result.exit_code == 5
        assert last_error(result)["error"] == "branch_on_cut"

    # Tests the single-manifold recursion in text form
    def test_symbol_series(self, runner, write_config):
        path = write_config({"manifold": DISK})
        result = runner.invoke(cli, ["--config", path, "symbol", "--order", "2", "--format", "text"])
        assert result.exit_code == 0
        assert "E_2 =" in result.stdout

    # Tests the D-N sweep columns for a one-boundary pair
    def test_dtn_sweep(self, runner, pair_config, tmp_path):
        args = ["--config", pair_config, "--cache-dir", str(tmp_path / "cache")]
        result = runner.invoke(cli, args + ["dtn-sweep", "--modes", "0", "1", "--points", "5", "--interval", "0.5", "2"])
        assert result.exit_code == 0
        lines = result.stdout.splitlines()
        assert lines[1] == "l,lambda,m1_00,m2_00,mu1,pole1,pole2"
        assert len(lines) == 2 + 2 * 5

    # Tests the ITE listing with its multiplicity total and ambiguity count
    def test_ite(self, runner, pair_config, tmp_path):
        args = ["--config", pair_config, "--cache-dir", str(tmp_path / "cache")]
        result = runner.invoke(cli, args + ["ite", "--interval", "0.05", "8", "--l-max", "12", "--strict"])
        assert result.exit_code == 0
        data = json.loads(result.stdout)
        assert data["N_T"] == sum(r["multiplicity"] for r in data["records"])
        assert data["ambiguous"] == 0
        lams = [r["lambda"] for r in data["records"]]
        assert lams == sorted(lams)
        assert all(0.05 < x <= 8 for x in lams)
