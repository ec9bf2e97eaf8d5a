import pytest

from crosslayer.cli import main


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return tmp_path


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_keygen_encrypt_decrypt(workdir, capsys):
    (workdir / "pt.txt").write_text("398\n453\n\n376\n# comment\n200\n", encoding="utf-8")
    assert run(capsys, "keygen", "--out", "k.ini")[0] == 0
    assert run(capsys, "encrypt", "--key", "k.ini", "--in", "pt.txt", "--out", "f.csv")[0] == 0
    code, out, _ = run(capsys, "decrypt", "--key", "k.ini", "--in", "f.csv")
    assert code == 0 and out == "398\n453\n376\n200\n"


@pytest.mark.parametrize("cascade", ["tab4x23", "lin4x23", "random"])
def test_other_cascades(workdir, capsys, cascade):
    (workdir / "pt.txt").write_text("1\n2\n3\n", encoding="utf-8")
    assert run(capsys, "keygen", "--cascade", cascade, "--seed", "4", "--mode", "bits",
               "--out", "k.ini")[0] == 0
    run(capsys, "encrypt", "--key", "k.ini", "--in", "pt.txt", "--out", "f.csv")
    assert run(capsys, "decrypt", "--key", "k.ini", "--in", "f.csv")[1] == "1\n2\n3\n"


def test_verify(capsys):
    code, out, _ = run(capsys, "verify")
    assert code == 0
    assert out.splitlines()[-1] == "11/11 golden checks passed"


def test_analyze_ber_rows(capsys):
    code, out, _ = run(capsys, "analyze", "ber", "--code", "4,4,2", "--snr-db", "0:20:1")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "snr_db,pb_k4" and len(lines) == 22
    code, out, _ = run(capsys, "analyze", "ber", "--snr-db", "0,10")
    assert out.splitlines()[0] == "snr_db,pb_k2,pb_k4"


def test_analyze_attack_and_throughput(capsys):
    out = run(capsys, "analyze", "attack", "--stages", "2:4:1")[1]
    assert len(out.splitlines()) == 4
    out = run(capsys, "analyze", "throughput", "--pe", "0,0.5", "--block-bits", "8")[1]
    assert out.splitlines()[1:] == ["0,1,1", "0.5,0.00390625,0"]


def test_exit_codes(workdir, capsys):
    assert run(capsys, "keygen", "--bogus")[0] == 2
    assert run(capsys, "keygen", "--primes", "13")[0] == 2
    assert run(capsys)[0] == 2
    code, _, err = run(capsys, "decrypt", "--key", "missing.ini", "--in", "x")
    assert code == 1 and "error" in err
    assert run(capsys, "keygen", "--primes", "15,37")[0] == 1
    assert run(capsys, "analyze", "attack", "--p", "5")[0] == 1
    (workdir / "pt.txt").write_text("900\n", encoding="utf-8")
    run(capsys, "keygen", "--out", "k.ini")
    code, _, err = run(capsys, "encrypt", "--key", "k.ini", "--in", "pt.txt")
    assert code == 1 and "[rsa]" in err
    (workdir / "pt.txt").write_text("abc\n", encoding="utf-8")
    assert run(capsys, "encrypt", "--key", "k.ini", "--in", "pt.txt")[0] == 1
