import io
import json

import pandas as pd
import pytest

from mobius_frobenius.cli import main

CURVE = "elliptic 5^1 a=[1] b=[0]"


def _run(*argv, tmp_path=None):
    out = io.StringIO()
    args = list(argv)
    if tmp_path is not None:
        args += ["--cache-path", str(tmp_path / "counts.json")]
    code = main(args, out)
    return code, out.getvalue()


def _csv(text):
    header, _, body = text.partition("\n")
    return header, pd.read_csv(io.StringIO(body), dtype=str, keep_default_na=False)


def test_curve_zeta_json(tmp_path):
    code, text = _run("curve-zeta", "--curve", CURVE, tmp_path=tmp_path)
    assert code == 0
    data = json.loads(text)
    assert data["P"] == ["1", "-2", "5"]
    assert data["ordinary"] is True
    assert data["curve"] == "elliptic 5^1/[0,1] a=[1] b=[0]"


def test_curve_zeta_with_spectrum(tmp_path):
    code, text = _run("curve-zeta", "--curve", CURVE, "--spectrum", tmp_path=tmp_path)
    assert code == 0
    spectrum = json.loads(text)["spectrum"]
    assert spectrum["angles"][0].startswith("0.176208")
    assert spectrum["multiplicities"] == [1, 1]


def test_curve_count_csv(tmp_path):
    code, text = _run("curve-count", "--curve", CURVE, "--n-max", "3", tmp_path=tmp_path)
    assert code == 0
    header, frame = _csv(text)
    assert header.startswith("# command=curve-count; precision_bits=128")
    assert list(frame.columns) == ["n", "count", "trace", "normalised_trace"]
    assert list(frame["trace"]) == ["2", "-6", "-22"]


def test_output_is_reproducible(tmp_path):
    first = _run("curve-angles", "--curve", CURVE, tmp_path=tmp_path)
    second = _run("curve-angles", "--curve", CURVE, tmp_path=tmp_path)
    assert first == second
    assert (tmp_path / "counts.json").exists()


def test_mobius_sum_rational_alpha(tmp_path):
    code, text = _run("mobius-sum", "--alpha", "0", "--N", "10,100,1000", tmp_path=tmp_path)
    assert code == 0
    _, frame = _csv(text)
    assert [float(v) for v in frame["value"]] == [-1.0, 1.0, 2.0]
    assert "imag" in frame.columns


def test_mobius_sum_curve_both_methods(tmp_path):
    code, text = _run("mobius-sum", "--curve", CURVE, "--N", "1000", tmp_path=tmp_path)
    assert code == 0
    _, frame = _csv(text)
    assert list(frame["method"]) == ["direct", "swapped"]
    direct, swapped = (float(v) for v in frame["value"])
    bound = sum(float(v) for v in frame["error_bound"])
    assert abs(direct - swapped) <= bound


def test_mobius_sum_profile_json(tmp_path):
    code, text = _run(
        "mobius-sum", "--curve", CURVE, "--N", "100,200", "--profile-B", "1,2", "--format", "json",
        tmp_path=tmp_path,
    )
    assert code == 0
    data = json.loads(text)
    assert data["header"]["command"] == "mobius-sum"
    assert len(data["rows"]) == 4


def test_mobius_sum_angle_reference(tmp_path):
    code, text = _run("mobius-sum", "--alpha", f"angle 0 of curve {CURVE}", "--N", "500", tmp_path=tmp_path)
    assert code == 0
    _, frame = _csv(text)
    assert len(frame) == 1


def test_bounds_json(tmp_path):
    code, text = _run("bounds", "--q", "5", "--g", "1", "--d", "2,4", "--N", "1000000")
    assert code == 0
    data = json.loads(text)
    assert set(data["C2"]) == {"2", "4"}
    assert float(data["gamma"]) == pytest.approx(float(data["gamma_from_kappa"]))
    assert data["rhs"]["dirichlet_M"] == "1000000"


def test_approx_dirichlet(tmp_path):
    code, text = _run("approx", "--alpha", "1.41421356237309504880168872", "--N", "10,100")
    assert code == 0
    _, frame = _csv(text)
    assert list(frame["s"]) == ["5", "70"]
    assert list(frame["r"]) == ["7", "99"]


def test_kloosterman_command():
    code, text = _run("kloosterman", "--q", "3", "--a", "1", "--n-max", "4", "--mobius-N", "100", "--kappa", "2")
    assert code == 0
    assert text.count("# command=kloosterman") == 2
    body = text.split("# command=kloosterman")[1]
    _, frame = _csv("#" + body)
    assert float(frame["T_n_direct"][0]) == pytest.approx(-1)
    assert float(frame["T_n_direct"][1]) == pytest.approx(5)


def test_domain_errors_exit_with_one(tmp_path, capsys):
    code, _ = _run("curve-count", "--curve", "elliptic 5^1 a=[0] b=[0]", tmp_path=tmp_path)
    assert code == 1
    assert "SingularCurve:" in capsys.readouterr().err
    code, _ = _run("approx", "--alpha", "1/3", "--N", "10")
    assert code == 1
    assert "RationalDetected:" in capsys.readouterr().err
    code, _ = _run("curve-count", "--curve", CURVE, "--n-max", "4", "--budget", "100", tmp_path=tmp_path)
    assert code == 1
    assert "BudgetExceeded:" in capsys.readouterr().err


def test_usage_errors_exit_with_two(capsys):
    assert _run()[0] == 2
    assert _run("curve-zeta")[0] == 2
    assert _run("bounds", "--q", "5", "--g", "1", "--format", "xml")[0] == 2
    assert _run("bounds", "--q", "5", "--g", "1", "--precision-bits", "16")[0] == 2
    capsys.readouterr()


@pytest.mark.parametrize(
    "argv",
    [
        ("curve-count", "--curve", "elliptic 5^1 a=[1,] b=[0]"),
        ("curve-zeta", "--curve", "hyperelliptic 5^1 f=[1,x]"),
        ("curve-angles", "--curve", "elliptic 5^1 a=[1] b=[0.5]"),
        ("curve-count", "--curve", "ellipse 5^1 a=1 b=1"),
        ("mobius-sum", "--alpha", "angle 0 of curve elliptic 5^1 a=[1,] b=[0]", "--N", "100"),
    ],
)
def test_malformed_curve_spec_is_a_usage_error(tmp_path, capsys, argv):
    code, text = _run(*argv, tmp_path=tmp_path)
    assert code == 2
    assert text == ""
    err = capsys.readouterr().err
    assert "error:" in err
    assert "hyperelliptic <field> f=[<coeff>,...]" in err
    assert "Traceback" not in err


@pytest.mark.parametrize(
    "argv",
    [
        ("curve-count", "--curve", "hyperelliptic 3^1 f=[1,2,0,0,0,1]", "--n-max", "5"),
        ("mobius-sum", "--curve", CURVE, "--N", "1000,20000"),
        ("kloosterman", "--q", "5", "--a", "1", "--n-max", "4", "--mobius-N", "5000", "--kappa", "2"),
    ],
)
def test_output_does_not_depend_on_worker_count(tmp_path, argv):
    single = _run(*argv, "--workers", "1", tmp_path=tmp_path)
    threaded = _run(*argv, "--workers", "4", tmp_path=tmp_path)
    assert single[0] == 0
    assert single == threaded
