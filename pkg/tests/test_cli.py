import json
import subprocess
import sys

import pytest

from qbailey import corpus
from qbailey.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_expand_partitions(capsys):
    code, out, _ = run(capsys, "expand", "1/poch(q;q;inf)", "-N", "6")
    assert code == 0
    assert out.strip() == "1 1 2 3 5 7 11"


def test_expand_rr1_product(capsys):
    code, out, _ = run(capsys, "expand", "triple(2,5)/poch(q;q;inf)", "-N", "8")
    assert out.split() == ["1", "1", "1", "1", "2", "2", "3", "3", "4"]


def test_expand_bivariate(capsys):
    code, out, _ = run(capsys, "expand", "1/poch(a*q;q;inf)", "-N", "3", "-M", "2")
    assert code == 0
    assert out.splitlines() == ["q^0: a^0:1", "q^1: a^1:1", "q^2: a^1:1 a^2:1", "q^3: a^1:1 a^2:1"]


def test_expand_errors(capsys):
    code, _, err = run(capsys, "expand", "q^(1/2)", "-N", "3")
    assert code != 0 and "NonIntegerExponent" in err
    code, _, err = run(capsys, "expand", "poch(q;", "-N", "3")
    assert code == 2 and "syntax error" in err
    code, _, _ = run(capsys, "expand", "q^(n)", "-N", "3")
    assert code == 2


def test_usage_error(capsys):
    with pytest.raises(SystemExit) as info:
        main(["family", "-d", "1"])
    assert info.value.code == 2


def test_verify_single_family_file(capsys):
    path = corpus.corpus_path("family_1_4_4.qs")
    code, out, _ = run(capsys, "verify", path, "-N", "60")
    assert code == 0
    assert out.strip().splitlines()[-1] == "7/7 equal"


def test_verify_perturbed_file(tmp_path, capsys):
    text = corpus.corpus_text("classical.qs").replace("q^(n^2) / poch", "q^(n^2 + 1) / poch", 1)
    path = tmp_path / "bad.qs"
    path.write_text(text)
    code, out, _ = run(capsys, "verify", str(path), "-N", "30", "--json")
    assert code == 1
    rows = [json.loads(line) for line in out.splitlines()]
    assert [r["verdict"] for r in rows] == ["mismatch", "equal", "equal", "equal"]
    assert rows[0]["mismatch"]["q_exponent"] == 0


def test_verify_missing_file(capsys):
    code, _, err = run(capsys, "verify", "/nonexistent/file.qs")
    assert code == 2


def test_verify_text_and_json_agree_across_jobs(capsys):
    path = corpus.corpus_path("family_2_2_4.qs")
    _, text, _ = run(capsys, "verify", path, "-N", "30")
    _, js, _ = run(capsys, "verify", path, "-N", "30", "--json", "--jobs", "3")
    names = [line.split(":")[0] for line in text.splitlines()[:-1]]
    rows = [json.loads(line) for line in js.splitlines()]
    assert names == [r["name"] for r in rows]
    assert all(r["verdict"] == "equal" for r in rows)


def test_family_text(capsys):
    code, out, _ = run(capsys, "family", "-d", "1", "-e", "1", "-k", "2", "-N", "20")
    assert code == 0
    assert "K=2, modulus 5" in out
    assert "Q_2(1) = (q^2, q^3, q^5; q^5)_inf / (q^1; q^1)_inf" in out


def test_family_json(capsys):
    code, out, _ = run(capsys, "family", "-d", "3", "-e", "1", "-k", "4", "-N", "20", "--products", "--json")
    data = json.loads(out)
    assert code == 0 and data["K"] == 4 and data["modulus"] == 27
    assert [c["name"] for c in data["checks"]][-1] == "products"


def test_family_modulus_eleven(capsys):
    code, out, _ = run(capsys, "family", "-d", "1", "-e", "2", "-k", "4", "-N", "20", "--residuals")
    assert code == 0 and "K=5, modulus 11" in out


def test_bailey_closed_forms(capsys):
    for d, e, k in [(1, 3, 1), (2, 2, 2)]:
        code, out, _ = run(capsys, "bailey", "-d", str(d), "-e", str(e), "-k", str(k), "--n-max", "8", "-N", "20")
        assert code == 0 and "equal" in out


def test_bailey_without_closed_form(capsys):
    code, out, _ = run(capsys, "bailey", "-d", "1", "-e", "1", "-k", "2", "--n-max", "4", "-N", "15", "--json")
    data = json.loads(out)
    assert code == 0 and data["closed_form"] is None and data["wbl_equal"]


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "qbailey", "expand", "poch(q;q;3)", "-N", "6"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.split() == ["1", "-1", "-1", "0", "1", "1", "-1"]
