import json
from pathlib import Path
from typing import List

import pytest

import devfuse
from devfuse._main import dispatch
from devfuse.image import save_image, synthetic_images


@pytest.fixture
def image_dir(tmp_path: Path) -> Path:
    directory = tmp_path / "images"
    directory.mkdir()
    for img in synthetic_images(2, 16, 16, seed=4):
        save_image(img.image, directory / img.name)
    return directory


@pytest.fixture
def preferences(tmp_path: Path) -> Path:
    path = tmp_path / "prefs.json"
    path.write_text(
        json.dumps(
            {
                "alternatives": 2,
                "experts": [
                    {"name": "ana", "matrix": [[0.5, 0.0], [1.0, 0.5]]},
                    {"name": "ben", "matrix": [[0.5, 1.0], [0.0, 0.5]]},
                ],
            }
        )
    )
    return path


def config_line(stderr: str) -> dict:
    return json.loads(stderr.splitlines()[0])


def lines(path: Path) -> List[str]:
    return path.read_text().splitlines()


def test_version(capsys: pytest.CaptureFixture[str]):
    assert dispatch(["--version"]) == 0
    assert devfuse.__version__ in capsys.readouterr().out


def test_fuse(image_dir: Path, tmp_path: Path, capsys: pytest.CaptureFixture[str]):
    out = tmp_path / "report.csv"
    args = ["fuse", "--input", str(image_dir), "--methods", "md,mean"]
    args += ["--eps", "1,32", "--window", "4", "--out", str(out)]
    assert dispatch(args) == 0

    captured = capsys.readouterr()
    config = config_line(captured.err)
    assert config["command"] == "fuse"
    assert config["methods"] == ["md", "mean"]
    assert config["eps"] == [1.0, 32.0]
    assert config["seed"] == 0
    assert config["version"] == devfuse.__version__

    table = captured.out.splitlines()
    assert table[0].split() == ["method", "eps", "ssim", "mse"]
    assert [row.split()[0] for row in table[1:]] == ["md", "md", "mean"]
    assert [row.split()[1] for row in table[1:3]] == ["1", "32"]

    rows = lines(out)
    assert rows[0] == "image,method,r,eps,ssim,mse,time_ns"
    assert len(rows) == 1 + 2 * 3


def test_fuse_empty_directory(tmp_path: Path, capsys: pytest.CaptureFixture[str]):
    args = ["fuse", "--input", str(tmp_path), "--out", str(tmp_path / "r.csv")]
    assert dispatch(args) == 1
    err = capsys.readouterr().err
    assert "Error: no decodable images" in err
    assert not (tmp_path / "r.csv").exists()


@pytest.mark.parametrize(
    "args, message",
    [
        (["nope"], "No such command"),
        (["fuse"], "Missing option"),
        (["fuse", "--input", ".", "--eps", "1,x"], "comma separated list"),
        (["fuse", "--input", ".", "--r", "1"], "--r"),
        (["fuse", "--input", ".", "--methods", "md,bicubic"], "Unknown reduction method"),
        (["fuse", "--input", ".", "--eps", "0.5"], "epsilon"),
        (["bench", "--windows", "0"], "--windows"),
    ],
)
def test_usage_errors(
    args: List[str],
    message: str,
    tmp_path: Path,
    monkeypatch: pytest.MonkeyPatch,
    capsys: pytest.CaptureFixture[str],
):
    monkeypatch.chdir(tmp_path)
    synthetic = synthetic_images(1, 8, 8)[0]
    save_image(synthetic.image, tmp_path / synthetic.name)
    assert dispatch(args) == 1
    assert message in capsys.readouterr().err


def test_seed_from_environment(
    monkeypatch: pytest.MonkeyPatch, tmp_path: Path, capsys: pytest.CaptureFixture[str]
):
    out = tmp_path / "bench.csv"
    args = ["bench", "--r-list", "2", "--windows", "3", "--repeat", "1", "--out", str(out)]

    monkeypatch.setenv("DEVFUSE_SEED", "7")
    assert dispatch(args) == 0
    assert config_line(capsys.readouterr().err)["seed"] == 7

    monkeypatch.setenv("DEVFUSE_SEED", "seven")
    assert dispatch(args) == 1
    assert "DEVFUSE_SEED must be an integer" in capsys.readouterr().err


def test_sweep_eps(image_dir: Path, tmp_path: Path, capsys: pytest.CaptureFixture[str]):
    out = tmp_path / "sweep.csv"
    args = ["sweep-eps", "--input", str(image_dir), "--eps", "1,32"]
    args += ["--methods", "md", "--out", str(out), "--threads", "2"]
    assert dispatch(args) == 0
    assert capsys.readouterr().out.splitlines() == ["1\t2", "32\t2"]
    assert lines(out) == ["eps,count", "1.0,2", "32.0,2"]


def test_bench(tmp_path: Path, capsys: pytest.CaptureFixture[str]):
    out = tmp_path / "bench.csv"
    args = ["bench", "--r-list", "2,3", "--windows", "5", "--repeat", "1"]
    assert dispatch(args + ["--out", str(out)]) == 0
    stdout = capsys.readouterr().out
    assert "r=2 speedup" in stdout
    assert "r=3 speedup" in stdout
    rows = lines(out)
    assert rows[0] == "r,method,windows,time_ns,speedup"
    assert [row.split(",")[:3] for row in rows[1:]] == [
        ["2", "md", "5"],
        ["2", "penalty", "5"],
        ["3", "md", "5"],
        ["3", "penalty", "5"],
    ]


def test_pool_grad_check(capsys: pytest.CaptureFixture[str]):
    assert dispatch(["pool-grad-check", "--trials", "20", "--seed", "3"]) == 0
    stdout = capsys.readouterr().out
    assert "max relative error (inputs)" in stdout
    assert stdout.splitlines()[-1] == "PASS"

    assert dispatch(["pool-grad-check", "--trials", "2", "--tolerance", "1e-30"]) == 2
    captured = capsys.readouterr()
    assert captured.out.splitlines()[-1] == "FAIL"
    assert "Error: Gradient check failed" in captured.err


def test_decide(preferences: Path, tmp_path: Path, capsys: pytest.CaptureFixture[str]):
    assert dispatch(["decide", "--input", str(preferences)]) == 0
    result = json.loads(capsys.readouterr().out)
    assert result["collective"][0][1] == pytest.approx(2 / 3, abs=1e-12)
    assert result["ranking"] == [1, 2]

    weights = tmp_path / "weights.json"
    weights.write_text(json.dumps({"ben": 1, "ana": 3}))
    out = tmp_path / "decision.json"
    args = ["decide", "--input", str(preferences), "--weights", str(weights)]
    assert dispatch(args + ["--out", str(out)]) == 0
    assert capsys.readouterr().out.strip() == "ranking: 2 1"
    assert json.loads(out.read_text())["ranking"] == [2, 1]

    assert dispatch(["decide", "--input", str(preferences), "--diagonal", "0"]) == 1
    assert "diagonal" in capsys.readouterr().err


@pytest.mark.parametrize(
    "content, message",
    [
        ({"experts": [{"name": "a"}]}, "expert 1 needs a 'matrix'"),
        ({"experts": [{"matrix": [0.5, 0.5]}]}, "expert 1 needs a 'matrix'"),
        ({"experts": ["a"]}, "expert 1 needs a 'matrix'"),
        ({"experts": "x"}, "'experts' must be a list"),
        (
            {"alternatives": "2", "experts": [{"matrix": [[0.5]]}]},
            "'alternatives' must be an integer",
        ),
        ([1, 2], "expected an object"),
    ],
)
def test_decide_malformed_input(
    content: object, message: str, tmp_path: Path, capsys: pytest.CaptureFixture[str]
):
    path = tmp_path / "prefs.json"
    path.write_text(json.dumps(content))
    assert dispatch(["decide", "--input", str(path)]) == 1
    err = capsys.readouterr().err.strip().splitlines()
    assert err[-1].startswith("Error: ")
    assert message in err[-1]


def test_selftest(capsys: pytest.CaptureFixture[str]):
    assert dispatch(["selftest", "--cases", "20", "--log-level", "info"]) == 0
    captured = capsys.readouterr()
    names = [line.split(":")[0] for line in captured.out.splitlines()]
    assert names == [
        "oracle",
        "idempotency",
        "internality",
        "symmetry",
        "epsilon-limit",
        "pooling",
    ]
    assert "Running the oracle suite" in captured.err
