import json

import pytest

from hyperposet.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_chi(capsys):
    code, out = run(capsys, "chi", "--n", "4")
    assert code == 0 and out.out == "s^2 - 12*s + 20\n"
    code, out = run(capsys, "chi", "--n", "4", "--method", "triangular", "--format", "tsv")
    assert out.out == "4\t1,-12,20\n"


def test_mobius_hat_and_tau(capsys):
    assert run(capsys, "mobius-hat", "--n", "7")[1].out == "7776\n"
    assert run(capsys, "--format", "tsv", "tau", "--n", "4")[1].out == "4\t1,12,20\n"


def test_deterministic(capsys):
    first = run(capsys, "char", "--which", "HAL", "--degree", "4", "--format", "json")[1].out
    second = run(capsys, "char", "--which", "HAL", "--degree", "4", "--format", "json")[1].out
    assert first == second
    assert json.loads(first)["degree"] == 4


@pytest.mark.parametrize("which", ["HA", "HAC", "HAL", "WHPP", "CE", "M"])
def test_char(capsys, which):
    code, out = run(capsys, "char", "--which", which, "--degree", "3")
    assert code == 0 and "p1^3" in out.out


def test_enumerate_and_cache(capsys, tmp_path):
    code, out = run(capsys, "enumerate", "--family", "hypertree", "--n", "3")
    assert out.out.splitlines() == ["3|123", "3|12,13", "3|12,23", "3|13,23"]
    code, out = run(capsys, "enumerate", "--family", "forest", "--n", "3", "--dump", str(tmp_path))
    assert code == 0
    code, out = run(capsys, "enumerate", "--load", str(tmp_path / "forest_3.txt"), "--count")
    assert out.out == "forest\t3\t16\n"


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as info:
        main(["chi", "--n", "4", "--bogus"])
    assert info.value.code == 2
    code, out = run(capsys, "enumerate", "--family", "hypertree", "--n", "9")
    assert code == 2 and "n <= 7" in out.err
    code, out = run(capsys, "chi", "--n", "3", "--order", "40")
    assert code == 2


def test_verify_identities(capsys):
    code, out = run(capsys, "verify", "--suite", "identities")
    names = [line.split("\t")[0] for line in out.out.splitlines()]
    assert code == 0
    assert {"koszul_comm", "poisson", "koszul_perm_left", "vertebres", "somme1"} <= set(names)
    assert all(line.split("\t")[1] == "PASS" for line in out.out.splitlines())


def test_verify_fail_exit_code(capsys, monkeypatch):
    from hyperposet import cli
    from hyperposet.report import Check

    monkeypatch.setattr(cli, "series_checks", lambda cfg: [Check("broken", False, 3, "x")])
    code, out = run(capsys, "verify", "--suite", "series")
    assert code == 1 and out.out == "broken\tFAIL\tdegree=3\tx\n"


def test_report(capsys):
    code, out = run(capsys, "report", "--conjecture", "--n", "3")
    assert code == 0
    assert json.loads(out.out)["dimension_check"] is True
