"""Command-line behavior: parsing, reports, determinism, exit codes."""

import json
import math
from pathlib import Path

import pytest

from entroscale.cli import (
    EXIT_CONFIG,
    EXIT_OK,
    EXIT_WRONG_CASE,
    build_model,
    format_float,
    load_config,
    main,
    render_json,
)
from entroscale.entropy import LOG2
from entroscale.toeplitz import window_entropy

CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"
SHIPPED = sorted(CONFIG_DIR.glob("*.json"))

S_INF_XY_NESS = 0.36880743449394487


def write_config(tmp_path, payload, name="model.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


def xy_payload(**overrides):
    payload = {
        "hamiltonian": {"mu": 1, "c": {"2,1": 0.02, "3,0": 0.5, "3,1": 0.5}},
        "beta_L": 2.0,
        "beta_R": 5.0,
        "fermi": {"type": "fermi_dirac"},
    }
    payload.update(overrides)
    return payload


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestRendering:
    def test_float_formatting(self):
        assert format_float(0.36880743449394487) == "0.36880743449394487"
        assert format_float(1.0) == "1"
        assert format_float(-math.pi) == "-3.1415926535897931"

    def test_json_is_parseable_and_ordered(self):
        text = render_json({"b": [1.5, None], "a": {"x": True}})
        assert json.loads(text) == {"b": [1.5, None], "a": {"x": True}}
        assert text.index('"b"') < text.index('"a"')


class TestConfigParsing:
    @pytest.mark.parametrize("path", SHIPPED, ids=[p.stem for p in SHIPPED])
    def test_shipped_configs_build(self, path):
        build_model(load_config(str(path)))

    def test_shipped_configs_exist(self):
        assert len(SHIPPED) >= 6

    @pytest.mark.parametrize(
        "mangle, needle",
        [
            (lambda p: p.pop("beta_L"), "beta_L"),
            (lambda p: p["hamiltonian"]["c"].update({"x,1": 1.0}), "alpha,n"),
            (lambda p: p["hamiltonian"]["c"].update({"7,1": 1.0}), "hamiltonian"),
            (lambda p: p["fermi"].update({"type": "bogus"}), "fermi.type"),
            (lambda p: p.update({"beta_L": 9.0}), "temperatures"),
            (lambda p: p.update({"phase": {"lambda": [1], "gamma": 2}}), "phase.lambda"),
            (lambda p: p["hamiltonian"].update({"mu": 0}), "hamiltonian"),
        ],
    )
    def test_field_precise_errors(self, tmp_path, capsys, mangle, needle):
        payload = xy_payload()
        mangle(payload)
        code, _, err = run(
            capsys, "density", "--config", write_config(tmp_path, payload)
        )
        assert code == EXIT_CONFIG
        assert needle in err

    def test_invalid_json_reports_position(self, tmp_path, capsys):
        path = tmp_path / "broken.json"
        path.write_text('{"hamiltonian": }')
        code, _, err = run(capsys, "density", "--config", str(path))
        assert code == EXIT_CONFIG
        assert "line 1" in err

    def test_missing_file(self, capsys):
        code, _, err = run(capsys, "density", "--config", "/nonexistent.json")
        assert code == EXIT_CONFIG
        assert "cannot read" in err

    def test_step_set_intervals_validated(self, tmp_path, capsys):
        payload = xy_payload(fermi={"type": "step_set", "intervals": [[2.0]]})
        code, _, err = run(
            capsys, "density", "--config", write_config(tmp_path, payload)
        )
        assert code == EXIT_CONFIG
        assert "intervals" in err


class TestClassify:
    def test_xy_reports_partition(self, capsys):
        code, out, _ = run(
            capsys, "classify", "--config", str(CONFIG_DIR / "xy_ness.json")
        )
        assert code == EXIT_OK
        report = json.loads(out)
        assert report["case"] == "Case2"
        assert report["has_symbol"] is True
        assert len(report["partition"]["pi_L"]) == 2
        assert report["zero_set"] == []

    def test_case3_config(self, capsys):
        code, out, _ = run(
            capsys, "classify", "--config", str(CONFIG_DIR / "case3_sine.json")
        )
        assert json.loads(out)["case"] == "Case3"
        assert code == EXIT_OK

    def test_case1_gets_refusal_note(self, tmp_path, capsys):
        payload = xy_payload(hamiltonian={"mu": 1, "c": {"3,0": 1.0}})
        code, out, _ = run(
            capsys, "classify", "--config", write_config(tmp_path, payload)
        )
        assert code == EXIT_OK
        report = json.loads(out)
        assert report["case"] == "Case1"
        assert report["partition"] is None
        assert "unavailable" in report["note"]

    def test_case6_is_named(self, tmp_path, capsys):
        payload = xy_payload(hamiltonian={"mu": 1, "c": {"0,1": 1.0, "1,1": 1.0}})
        _, out, _ = run(
            capsys, "classify", "--config", write_config(tmp_path, payload)
        )
        assert json.loads(out)["case"] == "Case6"


class TestDensity:
    def test_xy_ness_report(self, capsys):
        code, out, _ = run(
            capsys, "density", "--config", str(CONFIG_DIR / "xy_ness.json")
        )
        assert code == EXIT_OK
        report = json.loads(out)
        assert report["s_infinity"] == pytest.approx(S_INF_XY_NESS, abs=1e-9)
        assert report["vanishing"]["vanishing"] is False
        assert report["split"]["pi_L"] + report["split"]["pi_R"] == pytest.approx(
            report["s_infinity"], abs=1e-9
        )

    def test_ground_state_vanishes(self, capsys):
        _, out, _ = run(
            capsys, "density", "--config", str(CONFIG_DIR / "xy_ground.json")
        )
        report = json.loads(out)
        assert report["s_infinity"] <= 1e-12
        assert report["vanishing"]["vanishing"] is True

    def test_half_constant_hits_log2(self, capsys):
        _, out, _ = run(
            capsys, "density", "--config", str(CONFIG_DIR / "half_constant.json")
        )
        assert json.loads(out)["s_infinity"] == pytest.approx(LOG2, abs=1e-12)

    def test_step_set_config_vanishes(self, capsys):
        _, out, _ = run(
            capsys, "density", "--config", str(CONFIG_DIR / "step_set_vanishing.json")
        )
        report = json.loads(out)
        assert report["s_infinity"] == 0.0
        assert report["vanishing"]["vanishing"] is True

    def test_wrong_case_exit(self, tmp_path, capsys):
        payload = xy_payload(hamiltonian={"mu": 1, "c": {"3,0": 1.0}})
        code, _, err = run(
            capsys, "density", "--config", write_config(tmp_path, payload)
        )
        assert code == EXIT_WRONG_CASE
        assert "Case1" in err

    def test_out_file(self, tmp_path, capsys):
        target = tmp_path / "report.json"
        code, out, _ = run(
            capsys,
            "density",
            "--config",
            str(CONFIG_DIR / "xy_ness.json"),
            "--out",
            str(target),
        )
        assert code == EXIT_OK
        assert out == ""
        assert json.loads(target.read_text())["s_infinity"] > 0

    def test_csv_format_is_rejected(self, capsys):
        code, _, err = run(
            capsys,
            "density",
            "--config",
            str(CONFIG_DIR / "xy_ness.json"),
            "--format",
            "csv",
        )
        assert code == EXIT_CONFIG
        assert "json" in err


class TestSweep:
    def test_csv_shape_and_values(self, capsys):
        code, out, _ = run(
            capsys,
            "sweep",
            "--config",
            str(CONFIG_DIR / "xy_ness.json"),
            "--nu-list",
            "2,4,8",
        )
        assert code == EXIT_OK
        lines = out.strip().split("\n")
        assert lines[0] == "nu,S_nu,S_nu_per_nu,s_infinity,gap,S_nu_bits"
        assert [row.split(",")[0] for row in lines[1:]] == ["2", "4", "8"]
        from entroscale.cli import load_config as _load

        model = build_model(_load(str(CONFIG_DIR / "xy_ness.json")))
        for row in lines[1:]:
            nu, s_nu = row.split(",")[:2]
            expected = window_entropy(model, int(nu)).S
            assert s_nu == format_float(expected)

    def test_nu_flags_merge_and_dedupe(self, capsys):
        code, out, _ = run(
            capsys,
            "sweep",
            "--config",
            str(CONFIG_DIR / "xy_ness.json"),
            "--nu",
            "4",
            "2",
            "--nu-list",
            "4,8",
        )
        assert code == EXIT_OK
        assert [row.split(",")[0] for row in out.strip().split("\n")[1:]] == [
            "2",
            "4",
            "8",
        ]

    def test_byte_determinism(self, capsys, monkeypatch):
        args = (
            "sweep",
            "--config",
            str(CONFIG_DIR / "xy_ness.json"),
            "--nu-list",
            "2,4,8,16",
        )
        _, first, _ = run(capsys, *args)
        monkeypatch.setenv("ENTROSCALE_THREADS", "1")
        _, serial, _ = run(capsys, *args)
        monkeypatch.setenv("ENTROSCALE_THREADS", "4")
        _, parallel, _ = run(capsys, *args)
        assert first == serial == parallel

    def test_half_constant_rows_are_exact(self, capsys):
        _, out, _ = run(
            capsys,
            "sweep",
            "--config",
            str(CONFIG_DIR / "half_constant.json"),
            "--nu-list",
            "2,8",
        )
        rows = [row.split(",") for row in out.strip().split("\n")[1:]]
        assert rows[0][1] == format_float(2 * LOG2)
        assert rows[1][1] == format_float(8 * LOG2)

    def test_gap_shrinks_with_window(self, capsys):
        _, out, _ = run(
            capsys,
            "sweep",
            "--config",
            str(CONFIG_DIR / "xy_ness.json"),
            "--nu-list",
            "16,64",
        )
        rows = [row.split(",") for row in out.strip().split("\n")[1:]]
        gaps = [float(row[4]) for row in rows]
        assert gaps[1] < gaps[0]

    def test_json_format(self, capsys):
        code, out, _ = run(
            capsys,
            "sweep",
            "--config",
            str(CONFIG_DIR / "xy_ness.json"),
            "--nu-list",
            "2,4",
            "--format",
            "json",
        )
        assert code == EXIT_OK
        rows = json.loads(out)["rows"]
        assert [row["nu"] for row in rows] == [2, 4]
        assert rows[0]["S_nu_bits"] == pytest.approx(rows[0]["S_nu"] / LOG2)

    def test_requires_windows(self, capsys):
        code, _, err = run(
            capsys, "sweep", "--config", str(CONFIG_DIR / "xy_ness.json")
        )
        assert code == EXIT_CONFIG
        assert "--nu" in err

    def test_rejects_tiny_windows(self, capsys):
        code, _, err = run(
            capsys,
            "sweep",
            "--config",
            str(CONFIG_DIR / "xy_ness.json"),
            "--nu-list",
            "1,4",
        )
        assert code == EXIT_CONFIG
        assert ">= 2" in err

    def test_bad_thread_env(self, capsys, monkeypatch):
        monkeypatch.setenv("ENTROSCALE_THREADS", "many")
        code, _, err = run(
            capsys,
            "sweep",
            "--config",
            str(CONFIG_DIR / "xy_ness.json"),
            "--nu-list",
            "2,4",
        )
        assert code == EXIT_CONFIG
        assert "ENTROSCALE_THREADS" in err


class TestOracle:
    def test_xy_pass_report(self, capsys):
        code, out, _ = run(
            capsys,
            "oracle",
            "--config",
            str(CONFIG_DIR / "xy_ness.json"),
            "--nu",
            "3",
        )
        assert code == EXIT_OK
        report = json.loads(out)
        assert report["verdict"] == "PASS"
        routes = report["entropy_routes"]
        spread = max(routes.values()) - min(routes.values())
        assert spread < 1e-8
        assert report["spectrum_deviation"] < 1e-8
        assert report["suites"]["matrix_unit_residual"] < 1e-12

    def test_half_constant_identity_deviation(self, capsys):
        _, out, _ = run(
            capsys,
            "oracle",
            "--config",
            str(CONFIG_DIR / "half_constant.json"),
            "--nu",
            "2",
        )
        report = json.loads(out)
        assert report["identity_deviation"] < 1e-12

    @pytest.mark.parametrize("nu", ["1", "25"])
    def test_window_bounds_are_usage_errors(self, capsys, nu):
        code, _, err = run(
            capsys,
            "oracle",
            "--config",
            str(CONFIG_DIR / "xy_ness.json"),
            "--nu",
            nu,
        )
        assert code == EXIT_CONFIG
        assert "--nu" in err

    def test_wrong_case_exit(self, tmp_path, capsys):
        payload = xy_payload(hamiltonian={"mu": 1, "c": {"3,0": 1.0}})
        code, _, _ = run(
            capsys,
            "oracle",
            "--config",
            write_config(tmp_path, payload),
            "--nu",
            "2",
        )
        assert code == EXIT_WRONG_CASE


class TestUsage:
    def test_unknown_command(self):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == 2

    def test_config_flag_required(self):
        with pytest.raises(SystemExit) as exc:
            main(["density"])
        assert exc.value.code == 2
