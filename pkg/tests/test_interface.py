"""CLI, report round-trip, and the HTTP API."""
import json
import threading
import urllib.error
import urllib.request

import pytest

from retrovote.cli import build_parser, main, simulate_config_from_args
from retrovote.engine import run_simulation
from retrovote.model import BudgetMode, SimulationConfig
from retrovote.reportio import (
    config_from_dict,
    config_to_dict,
    report_from_dict,
    report_to_dict,
)
from retrovote.server import make_server, resolve_port


# --- CLI ---


def test_cli_simulate_happy_path(tmp_path, capsys):
    out = tmp_path / "report.json"
    code = main([
        "simulate", "--seed", "42", "--iterations", "20", "--voters", "10",
        "--projects", "6", "--out", str(out),
    ])
    assert code == 0
    document = json.loads(out.read_text())
    assert document["schema_version"] == "1"
    cells = [c for row in document["cells"].values() for c in row.values()]
    assert len(cells) == 9
    for cell in cells:
        assert sum(cell["histogram"]["counts"]) == 20
    stdout = capsys.readouterr().out
    assert "mean pairwise manipulation score" in stdout
    assert "quadratic" in stdout


def test_cli_rejects_infeasible_epsilon(capsys):
    code = main([
        "simulate", "--epsilon", "0.9", "--projects", "374",
        "--constant", "1000", "--voters", "133",
    ])
    assert code == 1
    assert "epsilon" in capsys.readouterr().err


def test_cli_defaults_match_reference_round():
    args = build_parser().parse_args(["simulate"])
    config = simulate_config_from_args(args)
    assert config == SimulationConfig()
    assert (config.n_voters, config.n_projects) == (133, 374)
    assert config.iterations == 10_000
    assert config.distribution.alpha == 2.5
    assert config.epsilon == 0.01
    assert config.normalization_constant == 1000.0


def test_cli_unwritable_output_is_io_failure(tmp_path, capsys):
    code = main([
        "simulate", "--iterations", "1", "--voters", "4", "--projects", "3",
        "--out", str(tmp_path / "missing" / "report.json"),
    ])
    assert code == 2


def test_cli_run_failure_exit_code(monkeypatch, capsys):
    from retrovote import cli as cli_module
    from retrovote.errors import SimulationFailed

    def explode(config, workers=1, fixed_preferences=None):
        raise SimulationFailed("synthetic")

    monkeypatch.setattr(cli_module, "run_simulation", explode)
    code = main(["simulate", "--iterations", "1", "--voters", "4", "--projects", "3"])
    assert code == 3


def test_cli_preferences_file_fixes_dimensions(tmp_path, capsys):
    path = tmp_path / "prefs.csv"
    path.write_text("a,b,c\n1,2,1\n3,1,1\n1,1,2\n2,2,1\n", encoding="utf-8")
    out = tmp_path / "report.json"
    code = main([
        "simulate", "--preferences", str(path), "--iterations", "5",
        "--out", str(out),
    ])
    assert code == 0
    document = json.loads(out.read_text())
    assert document["config"]["n_voters"] == 4
    assert document["config"]["n_projects"] == 3


def test_cli_bad_preferences_file_is_io_failure(tmp_path, capsys):
    path = tmp_path / "prefs.csv"
    path.write_text("a,b\n1,-2\n", encoding="utf-8")
    assert main(["simulate", "--preferences", str(path)]) == 2
    assert main(["simulate", "--preferences", str(tmp_path / "absent.csv")]) == 2


def test_cli_oracle_quadratic(capsys):
    assert main(["oracle", "quadratic-collusion", "--tokens", "100"]) == 0
    out = capsys.readouterr().out
    assert "1.4142136" in out
    assert "14.1421356" in out


def test_cli_oracle_mean_phantom(capsys):
    assert main(["oracle", "mean-phantom", "--n", "4", "--k", "1"]) == 0
    assert "0.8" in capsys.readouterr().out
    assert main(["oracle", "mean-phantom", "--k", "1",
                 "--allocs", "10,10,10,10"]) == 0
    out = capsys.readouterr().out
    assert "0.8" in out


def test_cli_oracle_median_phantom(capsys):
    assert main(["oracle", "median-phantom", "--allocs", "10,20,30,40,50",
                 "--k", "2"]) == 0
    out = capsys.readouterr().out
    assert "bound 30" in out
    assert "empirical 20" in out


# --- report round-trip ---


def test_report_round_trip_is_lossless():
    config = SimulationConfig(n_voters=9, n_projects=5, iterations=7, seed=123)
    report = run_simulation(config)
    document = json.loads(json.dumps(report_to_dict(report)))
    restored = report_from_dict(document)
    assert restored.config == report.config
    assert restored.cells == report.cells
    assert restored.iterations_completed == report.iterations_completed
    assert restored.runtime_seconds == report.runtime_seconds


def test_config_dict_round_trip_and_unknown_fields():
    config = SimulationConfig(seed=7)
    assert config_from_dict(config_to_dict(config)) == config
    assert config_from_dict({}) == SimulationConfig()
    with pytest.raises(ValueError):
        config_from_dict({"voters": 10})
    with pytest.raises(ValueError):
        config_from_dict({"distribution": {"kind": "pareto", "beta": 1}})
    with pytest.raises(ValueError):
        config_from_dict({"project_attack": {"mode": "x"}})


# --- HTTP API ---


@pytest.fixture(scope="module")
def api():
    server = make_server(0)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{server.server_address[1]}"
    server.shutdown()
    server.server_close()


def _get(base, path):
    try:
        with urllib.request.urlopen(base + path, timeout=30) as response:
            return response.status, json.loads(response.read())
    except urllib.error.HTTPError as error:
        return error.code, json.loads(error.read())


def _post(base, path, payload, raw=None):
    body = raw if raw is not None else json.dumps(payload).encode()
    request = urllib.request.Request(
        base + path, data=body, headers={"Content-Type": "application/json"}
    )
    try:
        with urllib.request.urlopen(request, timeout=120) as response:
            return response.status, json.loads(response.read())
    except urllib.error.HTTPError as error:
        return error.code, json.loads(error.read())


def test_health(api):
    status, payload = _get(api, "/api/health")
    assert status == 200
    assert payload == {"status": "ok"}


def test_defaults_echo_reference_parameters(api):
    status, payload = _get(api, "/api/defaults")
    assert status == 200
    assert payload["n_voters"] == 133
    assert payload["n_projects"] == 374
    assert payload["iterations"] == 10_000
    assert payload["epsilon"] == 0.01
    assert payload["distribution"] == {"kind": "pareto", "alpha": 2.5, "scale": 1.0}


def test_simulate_defaults_with_fifty_iterations(api):
    # paper-scale defaults, shortened to 50 iterations
    status, payload = _post(api, "/api/simulate", {"iterations": 50, "workers": 2})
    assert status == 200
    assert payload["schema_version"] == "1"
    assert payload["config"]["n_voters"] == 133
    cells = [c for row in payload["cells"].values() for c in row.values()]
    assert len(cells) == 9
    for cell in cells:
        assert sum(cell["histogram"]["counts"]) == 50


def test_simulate_internal_error_returns_opaque_id(api, monkeypatch):
    from retrovote import server as server_module

    def explode(config, workers=1):
        raise RuntimeError("synthetic crash")

    monkeypatch.setattr(server_module, "run_simulation", explode)
    status, payload = _post(api, "/api/simulate", {"iterations": 1})
    assert status == 500
    assert payload["error"] == "internal error"
    assert len(payload["id"]) == 32


def test_simulate_rejects_infeasible_epsilon(api):
    status, payload = _post(api, "/api/simulate", {
        "n_voters": 133, "n_projects": 374, "iterations": 1,
        "epsilon": 0.9,
    })
    assert status == 422
    assert payload["invariant"] == "epsilon_budget"


def test_simulate_rejects_malformed_json(api):
    status, payload = _post(api, "/api/simulate", None, raw=b"{not json")
    assert status == 400
    assert "malformed" in payload["error"]


def test_simulate_rejects_unknown_field(api):
    status, payload = _post(api, "/api/simulate", {"voters": 10})
    assert status == 422
    assert "unknown field" in payload["error"]


def test_simulate_rejects_oversized_requests(api):
    status, payload = _post(api, "/api/simulate", {"iterations": 20_001})
    assert status == 422
    assert payload["invariant"] == "iterations_bound"
    status, payload = _post(api, "/api/simulate", {"n_voters": 2_001, "iterations": 1})
    assert status == 422
    status, payload = _post(
        api, "/api/simulate", {"n_projects": 5_001, "iterations": 1}
    )
    assert status == 422


def test_unknown_path_is_404(api):
    status, payload = _get(api, "/api/nope")
    assert status == 404


def test_api_and_cli_agree(api, tmp_path):
    request = {"n_voters": 11, "n_projects": 7, "iterations": 25, "seed": 99}
    status, api_payload = _post(api, "/api/simulate", request)
    assert status == 200

    out = tmp_path / "cli.json"
    code = main([
        "simulate", "--voters", "11", "--projects", "7", "--iterations", "25",
        "--seed", "99", "--out", str(out),
    ])
    assert code == 0
    cli_payload = json.loads(out.read_text())
    assert cli_payload["cells"] == api_payload["cells"]
    assert cli_payload["config"] == api_payload["config"]


def test_resolve_port(monkeypatch):
    monkeypatch.delenv("RETROVOTE_PORT", raising=False)
    assert resolve_port() == 8080
    assert resolve_port(9001) == 9001
    monkeypatch.setenv("RETROVOTE_PORT", "8123")
    assert resolve_port() == 8123
    assert resolve_port(9001) == 9001
