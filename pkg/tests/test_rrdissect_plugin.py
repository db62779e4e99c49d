import pytest

pytest.importorskip("edwh")

from invoke import Context  # noqa: E402
from invoke.exceptions import Exit  # noqa: E402

from edwh_rrdissect_plugin import rrdissect_plugin  # noqa: E402
from edwh_rrdissect_plugin.batch import CommandResult  # noqa: E402
from edwh_rrdissect_plugin.rr_base import default_jobs  # noqa: E402


def test_finish_returns_task_result():
    result = rrdissect_plugin._finish(CommandResult(0, ["{}"]), verbose=False)
    assert result == {"success": True, "code": 0, "records": ["{}"]}


def test_finish_raises_exit_with_code(capsys):
    with pytest.raises(Exit) as excinfo:
        rrdissect_plugin._finish(CommandResult(1), verbose=False)
    assert excinfo.value.code == 1
    assert "exit code 1" in capsys.readouterr().out


def test_expand_task(tmp_path, capsys):
    out = tmp_path / "g.txt"
    result = rrdissect_plugin.expand(Context(), "G", prec="6", out=str(out), format="text")
    assert result["success"]
    assert out.read_text().startswith("1 + t + t^2")
    capsys.readouterr()


def test_expand_task_unknown_series(capsys):
    with pytest.raises(Exit) as excinfo:
        rrdissect_plugin.expand(Context(), "nope", prec="6")
    assert excinfo.value.code == 2
    capsys.readouterr()


def test_program_exposes_tasks():
    names = set(rrdissect_plugin.program.namespace.task_names)
    assert {"expand", "verify", "partitions", "asympt", "setup"} <= names


def test_setup_offers_cpu_count_for_jobs(tmp_path, monkeypatch, capsys):
    offered = {}

    def fake_check_env(key, default, **kwargs):
        offered[key] = default
        return default

    monkeypatch.setattr(rrdissect_plugin.edwh, "check_env", fake_check_env)
    monkeypatch.setattr(rrdissect_plugin.ConfigManager, "get_config_path", staticmethod(lambda: tmp_path / "rrd.env"))
    result = rrdissect_plugin.setup(Context())
    assert result["success"]
    assert offered["RRD_JOBS"] == str(default_jobs())
    capsys.readouterr()
