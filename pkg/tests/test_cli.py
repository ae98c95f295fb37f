import shutil
import subprocess

import pytest

from respk.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_free_separate_writes_verifiable_certificate(tmp_path, capsys):
    cert = tmp_path / "xy.cert"
    code, out, _ = run(capsys, "free", "separate", "-g", "x*y", "-h", "x^-1*y", "-p", "2", "-o", str(cert))
    assert code == 0 and cert.exists()
    code, out, _ = run(capsys, "verify", str(cert))
    assert code == 0 and "pass" in out


def test_free_conjugate_inputs(capsys):
    code, out, _ = run(capsys, "free", "separate", "-g", "x*y", "-h", "y*x")
    assert code == 2 and "conjugate" in out


def test_free_residual_and_order_witness(capsys):
    code, out, _ = run(capsys, "free", "residual", "-g", "x^-1*y^-1*x*y", "-p", "2")
    assert code == 0 and "target: U(2,3)" in out
    code, out, _ = run(capsys, "free", "order-witness", "-g", "x", "-e", "2", "-p", "2")
    assert code == 0 and "target: U(1,3)" in out


def test_free_cap_exceeded(capsys):
    code, _, err = run(capsys, "free", "residual", "-g", "x^8", "-p", "2", "--trunc-cap", "3")
    assert code == 3 and "cap exceeded" in err


def test_double_coset(tmp_path, capsys):
    cert = tmp_path / "dc.cert"
    code, _, _ = run(capsys, "free", "double-coset", "-n", "1", "-g", "x1", "-h", "y1", "-o", str(cert))
    assert code == 0
    assert run(capsys, "verify", str(cert))[0] == 0


def test_surface_commands(tmp_path, capsys):
    cert = tmp_path / "s.cert"
    code, _, _ = run(capsys, "surface", "separate", "--genus", "2", "-g", "x1*x'1", "-h", "y1*y'1", "-o", str(cert))
    assert code == 0
    code, out, _ = run(capsys, "surface", "conjugate", "--genus", "2", "-g", "x1*x'1", "-h", "x'1*x1")
    assert code == 2 and "conjugator" in out
    code, out, _ = run(capsys, "surface", "conjugate", "--genus", "2", "-g", "x1*x'1", "-h", "y1*y'1")
    assert code == 0 and "no" in out
    code, _, err = run(capsys, "surface", "separate", "--genus", "2", "-g", "x1", "-h", "y1")
    assert code == 1 and "normalization failed" in err


def test_lab_commands(capsys):
    code, out, _ = run(capsys, "lab", "series", "--group", "D8", "-p", "2")
    assert code == 0 and "series_orders: 8,2,1" in out
    code, out, _ = run(capsys, "lab", "aut", "--group", "C4", "-p", "2")
    assert "aut_order: 2" in out and "ip_order: 2" in out
    code, out, _ = run(capsys, "lab", "claims", "--group", "Q8", "-p", "2", "--depth", "2")
    assert code == 0


def test_verify_directory_and_failures(tmp_path, capsys):
    good = tmp_path / "a.cert"
    run(capsys, "free", "separate", "-g", "x", "-h", "y", "-o", str(good))
    assert run(capsys, "verify", "--all", str(tmp_path))[0] == 0
    bad = tmp_path / "b.cert"
    bad.write_text(good.read_text().replace("image y: 0", "image y: 1"))
    code, out, _ = run(capsys, "verify", "--all", str(tmp_path))
    assert code == 4 and "image of h" in out
    trunc = tmp_path / "c.cert"
    trunc.write_text("\n".join(good.read_text().splitlines()[:5]))
    code, out, _ = run(capsys, "verify", str(trunc))
    assert code == 4 and "line" in out
    assert run(capsys, "verify")[0] == 1


def test_bad_input_and_config(tmp_path, monkeypatch, capsys):
    assert run(capsys, "free", "separate", "-g", "x*q", "-h", "y", "--generators", "x,y")[0] == 1
    assert run(capsys, "free", "residual", "-g", "x", "-p", "4")[0] == 1
    conf = tmp_path / "c.conf"
    conf.write_text("p: 3\n")
    monkeypatch.setenv("RESPK_CONFIG", str(conf))
    code, out, _ = run(capsys, "free", "residual", "-g", "x")
    assert code == 0 and "U(1,2)" in out


def test_help_is_available(capsys):
    with pytest.raises(SystemExit) as info:
        main(["free", "separate", "--help"])
    assert info.value.code == 0
    assert "-g" in capsys.readouterr().out


@pytest.mark.skipif(shutil.which("respk") is None, reason="console script not installed")
def test_console_script():
    out = subprocess.run(["respk", "surface", "conjugate", "--genus", "2", "-g", "x1", "-h", "x1"],
                         capture_output=True, text=True)
    assert out.returncode == 2
