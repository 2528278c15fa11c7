import datetime as dt
import json

from dayahead import cli, regress
from dayahead.ingest import LOAD_KIND, parse_csv, serialize_csv
from dayahead.regress import ModelForecast

from conftest import profile
from fixtures import recoherence_fixture_records

CV_JSON = json.dumps({
    "lvl1_5pct": 5.5, "lvl1_10pct": 4.8, "lvl2_5pct": 12.0,
    "lvl2_10pct": 10.5, "lvl3_5pct": 18.0,
})


def write_cv(tmp_path):
    path = tmp_path / "cv.json"
    path.write_text(CV_JSON)
    return str(path)


def synth_to(tmp_path, name, days=14, seed=6, extra=()):
    out = tmp_path / name
    code = cli.main([
        "synth", "--days", str(days), "--seed", str(seed),
        "--out", str(out), *extra,
    ])
    assert code == 0
    return out


def split_forecast_inputs(tmp_path, dataset_path):
    """Split a dataset CSV into history (all but last day) and a
    temperature-forecast file for the last day."""
    records = parse_csv(dataset_path.read_text())
    target = records[-1].date
    history = [r for r in records if r.date < target]
    forecast = [r._replace(load_mw=None) for r in records if r.date == target]
    hist_path = tmp_path / "history.csv"
    fc_path = tmp_path / "forecast.csv"
    hist_path.write_text(serialize_csv(history))
    fc_path.write_text(serialize_csv(forecast))
    return hist_path, fc_path, target


def test_synth_deterministic_byte_identical(tmp_path):
    a = synth_to(tmp_path, "a.csv", days=14, seed=1)
    b = synth_to(tmp_path, "b.csv", days=14, seed=1)
    assert a.read_bytes() == b.read_bytes()


def test_synth_validation_exit_code(tmp_path, capsys):
    code = cli.main(["synth", "--days", "0", "--seed", "1",
                     "--out", str(tmp_path / "x.csv")])
    assert code == 2
    assert "error" in capsys.readouterr().err


def test_synth_stdout_only_payload(capsys):
    code = cli.main(["synth", "--days", "1", "--seed", "5", "--out", "-"])
    out, err = capsys.readouterr()
    assert code == 0
    assert out.startswith("date,hour,load_mw,temp_c\n")
    assert err == ""


def test_forecast_happy_path(tmp_path, capsys):
    data = synth_to(tmp_path, "data.csv")
    hist, fc, target = split_forecast_inputs(tmp_path, data)
    out = tmp_path / "report.json"
    code = cli.main([
        "forecast", "--history", str(hist), "--temp-forecast", str(fc),
        "--target-date", target.isoformat(),
        "--critical-values", write_cv(tmp_path),
        "--out", str(out),
    ])
    captured = capsys.readouterr()
    assert code == 0
    assert captured.out == ""
    report = json.loads(out.read_text())
    assert report["target_date"] == target.isoformat()
    assert len(report["ensemble"]) == 24
    assert report["meta"]["p_v"] == 0.8803
    assert report["meta"]["config"]["method"] == "exact-ml"
    assert "nan" not in out.read_text().lower()


def test_forecast_writes_stdout_with_dash(tmp_path, capsys):
    data = synth_to(tmp_path, "data.csv")
    hist, fc, target = split_forecast_inputs(tmp_path, data)
    code = cli.main([
        "forecast", "--history", str(hist), "--temp-forecast", str(fc),
        "--target-date", target.isoformat(),
        "--critical-values", write_cv(tmp_path),
        "--out", "-", "--method", "ols", "--koyck", "fixed=0.3",
    ])
    out, _ = capsys.readouterr()
    assert code == 0
    report = json.loads(out)
    assert report["meta"]["config"]["koyck"] == "fixed=0.3"


def test_forecast_missing_critical_values(tmp_path, capsys):
    data = synth_to(tmp_path, "data.csv")
    hist, fc, target = split_forecast_inputs(tmp_path, data)
    code = cli.main([
        "forecast", "--history", str(hist), "--temp-forecast", str(fc),
        "--target-date", target.isoformat(),
        "--critical-values", str(tmp_path / "absent.json"),
    ])
    assert code == 2
    assert "cannot read" in capsys.readouterr().err


def test_forecast_bad_koyck_flag(tmp_path, capsys):
    data = synth_to(tmp_path, "data.csv")
    hist, fc, target = split_forecast_inputs(tmp_path, data)
    code = cli.main([
        "forecast", "--history", str(hist), "--temp-forecast", str(fc),
        "--target-date", target.isoformat(),
        "--critical-values", write_cv(tmp_path),
        "--koyck", "fixed=1.5",
    ])
    assert code == 2


def test_forecast_recoherence_fixture_exits_3_naming_eq8(tmp_path, capsys):
    target = dt.date(2004, 5, 10)
    records = recoherence_fixture_records(target)
    history = [r for r in records if r.load_mw is not None]
    forecast = [r for r in records if r.load_mw is None]
    hist_path = tmp_path / "history.csv"
    fc_path = tmp_path / "forecast.csv"
    hist_path.write_text(serialize_csv(history))
    fc_path.write_text(serialize_csv(forecast))
    out = tmp_path / "report.json"
    code = cli.main([
        "forecast", "--history", str(hist_path), "--temp-forecast", str(fc_path),
        "--target-date", target.isoformat(),
        "--critical-values", write_cv(tmp_path),
        "--out", str(out),
    ])
    captured = capsys.readouterr()
    assert code == 3
    assert "Eq. (8)" in captured.err
    assert captured.out == ""
    assert not out.exists()


def test_forecast_sigma_fixture_exits_3_naming_eq13(tmp_path, capsys, monkeypatch):
    # Injected forecasts: model c's centered prediction is exactly
    # orthogonal to model b's (disjoint supports), so theta2 = 0 while
    # theta1 stays generic; the chain must abort at the evolution moments.
    data = synth_to(tmp_path, "data.csv")
    hist, fc, target = split_forecast_inputs(tmp_path, data)

    def injected(window, fits):
        base = [100.0] * 24
        va, vb, vc = list(base), list(base), list(base)
        va[0], va[1] = 140.0, 60.0
        vb[0], vb[1] = 150.0, 50.0
        vc[2], vc[3] = 160.0, 40.0
        return {
            m: ModelForecast(m, None, profile(window.target_date, v, LOAD_KIND))
            for m, v in (("a", va), ("b", vb), ("c", vc))
        }

    monkeypatch.setattr(regress, "forecast_day", injected)
    out = tmp_path / "report.json"
    code = cli.main([
        "forecast", "--history", str(hist), "--temp-forecast", str(fc),
        "--target-date", target.isoformat(),
        "--critical-values", write_cv(tmp_path),
        "--out", str(out),
    ])
    captured = capsys.readouterr()
    assert code == 3
    assert "Eq. (13)" in captured.err
    assert captured.out == ""
    assert not out.exists()


def test_backtest_row_count_and_determinism(tmp_path):
    data = synth_to(tmp_path, "data.csv", days=40, seed=1)
    records = parse_csv(data.read_text())
    start = records[0].date + dt.timedelta(days=9)
    end = records[-1].date
    assert (end - start).days + 1 == 31
    outputs = []
    for name in ("r1.csv", "r2.csv"):
        out = tmp_path / name
        code = cli.main([
            "backtest", "--data", str(data),
            "--from", start.isoformat(), "--to", end.isoformat(),
            "--critical-values", write_cv(tmp_path),
            "--report", str(out), "--method", "ols",
        ])
        assert code == 0
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1]
    lines = outputs[0].decode().strip().split("\n")
    scored = [ln for ln in lines[1:] if not ln.startswith("#")
              and not ln.startswith("year_month")]
    day_rows = [ln for ln in scored if ln.count(",") == 6]
    assert len(day_rows) == 31


def test_backtest_from_after_to(tmp_path, capsys):
    data = synth_to(tmp_path, "data.csv")
    code = cli.main([
        "backtest", "--data", str(data),
        "--from", "2004-01-20", "--to", "2004-01-10",
        "--critical-values", write_cv(tmp_path),
        "--report", str(tmp_path / "r.csv"),
    ])
    assert code == 2
    assert "from_date" in capsys.readouterr().err


def test_backtest_partially_degenerate_dataset_exits_zero(tmp_path):
    from fixtures import recoherence_backtest_records

    degenerate = dt.date(2004, 5, 10)
    records = recoherence_backtest_records(degenerate, tail_days=1)
    data = tmp_path / "data.csv"
    data.write_text(serialize_csv(records))
    out = tmp_path / "bt.csv"
    code = cli.main([
        "backtest", "--data", str(data),
        "--from", degenerate.isoformat(),
        "--to", (degenerate + dt.timedelta(days=1)).isoformat(),
        "--critical-values", write_cv(tmp_path),
        "--report", str(out),
    ])
    assert code == 0
    text = out.read_text()
    assert "aborted:eq8" in text
    trailer = text.strip().split("\n")[-1]
    assert trailer.endswith(",1")  # one excluded day reported


def test_synth_output_feeds_backtest_unmodified(tmp_path):
    data = synth_to(tmp_path, "data.csv", days=12, seed=4)
    records = parse_csv(data.read_text())
    target = records[-1].date
    out = tmp_path / "bt.csv"
    code = cli.main([
        "backtest", "--data", str(data),
        "--from", target.isoformat(), "--to", target.isoformat(),
        "--critical-values", write_cv(tmp_path),
        "--report", str(out),
    ])
    assert code == 0
    assert out.read_text().count("ok") >= 1
