import json

import pytest

import config
from errors import PreconditionError

ENV_VARS = ("COMINIMAL_THREADS", "COMINIMAL_HORIZON", "COMINIMAL_TAIL_SPAN", "COMINIMAL_BUDGET",
            "COMINIMAL_REFINE_EXTRA", "COMINIMAL_REPORT_DIR")


@pytest.fixture(autouse=True)
def clean_env(monkeypatch, tmp_path):
    for name in ENV_VARS:
        monkeypatch.delenv(name, raising=False)
    monkeypatch.chdir(tmp_path)


def test_defaults():
    s = config.load_settings()
    assert s.horizon == 12
    assert s.tail_span == 16
    assert s.refine_budget == 64
    assert s.report_dir == "reports"
    assert 1 <= s.threads <= 8

def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("COMINIMAL_THREADS", "3")
    monkeypatch.setenv("COMINIMAL_HORIZON", "20")
    monkeypatch.setenv("COMINIMAL_REPORT_DIR", "out")
    s = config.load_settings()
    assert (s.threads, s.horizon, s.report_dir) == (3, 20, "out")

def test_bad_environment_value(monkeypatch):
    monkeypatch.setenv("COMINIMAL_BUDGET", "many")
    with pytest.raises(PreconditionError):
        config.load_settings()

def test_json_file_then_cli(tmp_path):
    path = tmp_path / "settings.json"
    path.write_text(json.dumps({"horizon": 14, "threads": 2}))
    s = config.load_settings(str(path), threads=5, horizon=None)
    assert s.horizon == 14
    assert s.threads == 5

def test_unknown_config_key(tmp_path):
    path = tmp_path / "settings.json"
    path.write_text(json.dumps({"horizon": 14, "depth": 3}))
    with pytest.raises(PreconditionError):
        config.load_settings(str(path))

def test_invalid_json(tmp_path):
    path = tmp_path / "settings.json"
    path.write_text("{horizon: 14")
    with pytest.raises(PreconditionError):
        config.load_settings(str(path))

def test_validation():
    with pytest.raises(PreconditionError):
        config.Settings(threads=0)
    with pytest.raises(PreconditionError):
        config.Settings(tail_span=4)
    with pytest.raises(PreconditionError):
        config.load_settings(refine_budget=-1)

@pytest.mark.parametrize("data", [{"threads": "4"}, {"horizon": 12.5}, {"tail_span": True}, {"report_dir": 3}])
def test_mistyped_config_value(tmp_path, data):
    path = tmp_path / "settings.json"
    path.write_text(json.dumps(data))
    with pytest.raises(PreconditionError):
        config.load_settings(str(path))

def test_config_must_be_an_object(tmp_path):
    path = tmp_path / "settings.json"
    path.write_text("[1, 2]")
    with pytest.raises(PreconditionError):
        config.load_settings(str(path))
