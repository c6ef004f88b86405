import json

import pytest

from qosc.cli import main


def run_cli(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_verify_relations(capsys):
    code, rep = run_cli(
        capsys,
        ["verify-relations", "--epsilon", "1,0,1,0,1", "--module", "W", "--cutoff", "4"],
    )
    assert code == 0
    assert rep["schema"] == "qosc/1" and rep["pass"]
    assert len(rep["checks"]) > 100


def test_rmatrix_report(capsys):
    code, rep = run_cli(
        capsys, ["rmatrix", "--flavor", "c", "--sigma", "+,+", "--m", "2", "--cutoff", "5"]
    )
    assert code == 0 and rep["pass"]
    comps = [tuple(c["component"]) for c in rep["checks"]]
    assert (2,) in comps
    assert rep["declared_poles"][:2] == [2, 6]


def test_fuse_and_admissibility(capsys):
    code, rep = run_cli(
        capsys,
        ["fuse", "--flavor", "c", "--sigma", "+,+", "--c", "q^-6,1", "--m", "2", "--cutoff", "5"],
    )
    assert code == 0 and rep["pass"]
    content = rep["checks"][0]["hw_content"]
    assert set(content) == {"()", "(2,)"}
    code, rep = run_cli(
        capsys,
        ["fuse", "--flavor", "c", "--sigma", "+,+", "--c", "q^2,1", "--m", "2", "--cutoff", "5"],
    )
    assert code == 1 and not rep["pass"]
    assert rep["checks"][0]["offending"] == [0, 1, 2]


def test_decompose_table(capsys):
    code, rep = run_cli(
        capsys,
        ["decompose", "--flavor", "c", "--factors", "+,+", "--cutoff", "6"],
    )
    assert code == 0
    table = {tuple(row["lambda"]): row["mult"] for row in rep["checks"][0]["table"]}
    assert table == {(): 1, (2,): 1, (4,): 1, (6,): 1}


def test_hwv(capsys):
    code, rep = run_cli(
        capsys,
        ["hwv", "--factors", "+,+", "--weight", "2*L+1*d4+1*d5", "--cutoff", "6"],
    )
    assert code == 0
    assert rep["checks"][0]["dimension"] == 1


def test_appendix_check(capsys):
    code, rep = run_cli(
        capsys,
        ["appendix-check", "--which", "C", "--m", "2", "--l", "1,1", "--rmax", "1", "--smax", "0"],
    )
    assert code == 0 and rep["pass"]


def test_reports_are_deterministic(capsys):
    argv = ["rmatrix", "--flavor", "c", "--sigma=-,-", "--m", "2", "--cutoff", "4"]
    main(argv)
    first = capsys.readouterr().out
    main(argv)
    second = capsys.readouterr().out
    assert first == second


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["rmatrix", "--flavor", "x"])
    assert exc.value.code == 2
