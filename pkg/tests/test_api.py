import pytest

from main import main
from modules.common import RunConfig
from modules.workflow import WorkflowController
from web.api_server import IndSheafAPI

SCRIPT = 'emit "start";\ndim-hom(constant(pt), constant(pt), expect = 1);\n'


@pytest.fixture(autouse=True)
def isolated_dirs(tmp_path, monkeypatch):
    monkeypatch.setenv("INDSHEAF_LOG_DIR", str(tmp_path / "logs"))
    monkeypatch.setenv("INDSHEAF_OUTPUT_DIR", str(tmp_path / "output"))
    return tmp_path


@pytest.fixture
def client():
    api = IndSheafAPI(RunConfig())
    api.app.config["TESTING"] = True
    return api.app.test_client()


def test_health(client):
    response = client.get("/api/health")
    assert response.status_code == 200
    body = response.get_json()
    assert body["status"] == "healthy"
    assert body["workflow"]["config"]["field"] == "q"


def test_run_needs_a_script(client):
    response = client.post("/api/run", json={"field": "q"})
    assert response.status_code == 400
    assert response.get_json()["success"] is False


def test_run_script(client):
    response = client.post("/api/run", json={"script": SCRIPT, "field": "fp:7", "seed": 2})
    assert response.status_code == 200
    body = response.get_json()
    assert body["passed"] is True
    assert body["report"].startswith("# report field=fp:7 trunc=16 seed=2")
    assert "report_file" not in body


def test_run_reports_syntax_errors(client):
    response = client.post("/api/run", json={"script": "let = 1;"})
    assert response.status_code == 400
    body = response.get_json()
    assert (body["line"], body["column"]) == (1, 5)


def test_unknown_suite(client):
    response = client.post("/api/suite", json={"suite": "nonsense"})
    assert response.status_code == 400
    assert "unknown suite" in response.get_json()["error"]


def test_controller_saves_reports(isolated_dirs):
    result = WorkflowController(RunConfig()).process_script(SCRIPT, "demo")
    assert result["success"] and result["passed"]
    assert result["failed_records"] == []
    saved = isolated_dirs / "output" / "reports" / "report_demo.txt"
    assert result["report_file"] == str(saved)
    assert saved.read_text(encoding="utf-8") == result["report"]


def test_controller_lists_failed_records():
    result = WorkflowController(RunConfig()).process_script(
        'emit "a";\ndim-hom(constant(pt), constant(pt), expect = 3);', "bad", save=False)
    assert result["success"]
    assert not result["passed"]
    assert result["failed_records"] == [1]


def test_main_runs_a_script(isolated_dirs, capsys):
    script = isolated_dirs / "demo.ids"
    script.write_text(SCRIPT, encoding="utf-8")
    out = isolated_dirs / "demo_report.txt"
    assert main(["--script", str(script), "--out", str(out), "--seed", "4"]) == 0
    printed = capsys.readouterr().out
    assert printed.startswith("# report field=q trunc=16 seed=4")
    assert out.read_text(encoding="utf-8") == printed


def test_main_exit_codes(isolated_dirs):
    assert main([]) == 2
    assert main(["--script", str(isolated_dirs / "missing.ids")]) == 2
    failing = isolated_dirs / "failing.ids"
    failing.write_text("dim-hom(constant(pt), constant(pt), expect = 0);", encoding="utf-8")
    assert main(["--script", str(failing)]) == 1
