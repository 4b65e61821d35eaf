import json

import pytest

from rusforge.angles import Angle, AngleParseError
from rusforge.cli import main, parse_root2
from rusforge.ring import Root2Int


@pytest.mark.parametrize(
    "text,value",
    [("pi/64", 0.04908738521234052), ("-pi/4", -0.7853981633974483), ("3*pi/8", 1.1780972450961724), ("0.3137", 0.3137), ("pi/2^5", 0.09817477042468103), ("pi/4 + 0.1", 0.8853981633974483)],
)
def test_angle_grammar(text, value):
    assert float(Angle.parse(text)) == pytest.approx(value)


def test_angle_eighth_turns():
    assert Angle.parse("pi/4").eighth_turns() == 1
    assert Angle.parse("-3*pi/4").eighth_turns() == -3
    assert Angle.parse("pi/8").eighth_turns() is None
    with pytest.raises(AngleParseError):
        Angle.parse("pi/")


def test_parse_root2():
    assert parse_root2("1270080+211680*sqrt2") == Root2Int(1270080, 211680)
    assert parse_root2("5-2sqrt2") == Root2Int(5, -2)
    assert parse_root2("7") == Root2Int(7, 0)
    assert parse_root2("sqrt2") == Root2Int(0, 1)


def test_synth_and_verify_roundtrip(tmp_path, capsys):
    out = tmp_path / "run"
    assert main(["synth", "--theta", "0.3137", "--epsilon", "1e-6", "--seed", "2", "--out", str(out)]) == 0
    data = json.loads((out / "protocol.json").read_text())
    assert data["seed"] == 2
    assert (out / "listing.txt").read_text().strip()
    assert json.loads((out / "report.json").read_text())["pass"]
    assert main(["verify", str(out / "protocol.json")]) == 0


def test_verify_fails_on_tampered_protocol(tmp_path):
    out = tmp_path / "run"
    main(["synth", "--theta", "0.3137", "--epsilon", "1e-6", "--seed", "2", "--out", str(out)])
    data = json.loads((out / "protocol.json").read_text())
    data["failure"] = "X"
    (out / "protocol.json").write_text(json.dumps(data))
    assert main(["verify", str(out / "protocol.json")]) == 1


def test_synth_quarter_turn(capsys):
    assert main(["synth", "--theta", "pi/4", "--epsilon", "1e-3"]) == 0
    assert "design T-count   1" in capsys.readouterr().out


def test_synth_is_reproducible(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        main(["synth", "--theta", "1.1", "--epsilon", "1e-8", "--seed", "5", "--out", str(d)])
    ja = json.loads((a / "protocol.json").read_text())
    jb = json.loads((b / "protocol.json").read_text())
    ja.pop("info"), jb.pop("info")
    assert ja == jb


def test_bench_requires_seed(monkeypatch, capsys):
    monkeypatch.delenv("RUS_FORGE_SEED", raising=False)
    assert main(["bench", "--mode", "fourier", "--count", "1", "--epsilons", "1e-3"]) == 2
    monkeypatch.setenv("RUS_FORGE_SEED", "4")
    assert main(["bench", "--mode", "fourier", "--count", "1", "--epsilons", "1e-3", "--workers", "1"]) == 0


def test_bench_csv_output(tmp_path):
    out = tmp_path / "b.csv"
    args = ["bench", "--mode", "fourier", "--count", "2", "--epsilons", "1e-3,1e-4", "--seed", "1", "--workers", "1", "--no-wall-time", "--out", str(out)]
    assert main(args) == 0
    first = out.read_text()
    main(args)
    assert out.read_text() == first
    assert (tmp_path / "b.summary.json").exists()


def test_norm_solve_command(capsys):
    assert main(["norm-solve", "1270080+211680*sqrt2"]) == 0
    text = capsys.readouterr().out
    assert "2^5 * 3^3 * 5 * 7^2 * (2+sqrt2) * (5-2sqrt2)" in text
    assert main(["norm-solve", "7"]) == 1


def test_density_command(capsys):
    assert main(["density", "--ell", "1"]) == 0
    assert json.loads(capsys.readouterr().out)["ell"] == 1


def test_bad_epsilon():
    with pytest.raises(SystemExit):
        main(["synth", "--theta", "0.1", "--epsilon", "2"])
