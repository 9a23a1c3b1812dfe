import json

import pytest
from click.testing import CliRunner

from suite import CENTER, valley_surface
from tsystem.cli import main
from tsystem.laurent import parse, render
from tsystem.oracle import Instance, solve_oracle

FIRST_STEP = "c[0,0]*t[-1,0]*t[0,0]^-1*t[1,0] + t[0,-1]*t[0,0]^-1*t[0,1]"


@pytest.fixture
def run():
    runner = CliRunner()

    def invoke(*args):
        return runner.invoke(main, [str(a) for a in args])

    return invoke


@pytest.fixture
def valley_file(tmp_path):
    path = tmp_path / "valley.json"
    path.write_text(valley_surface().to_json())
    return path


def test_compute_oracle(run):
    result = run("compute", "--point", 0, 0, 1, "--surface", "fund", "--method", "oracle")
    assert result.exit_code == 0
    assert parse(result.output.strip()) == parse(FIRST_STEP)
    assert result.output.strip() == render(parse(FIRST_STEP))


def test_compute_all(run):
    result = run("compute", "--point", 0, 0, 1, "--method", "all")
    assert result.exit_code == 0
    lines = result.output.strip().splitlines()
    assert lines == [render(parse(FIRST_STEP)), "5/5 methods agree"]


def test_compute_json(run):
    result = run("compute", "--point", 0, 0, 1, "--method", "all", "--format", "json")
    payload = json.loads(result.output)
    assert payload["point"] == [0, 0, 1]
    assert payload["agreement"] == "5/5"
    assert parse(payload["polynomial"]) == parse(FIRST_STEP)
    assert len(payload["terms"]) == 2


def test_compute_surface_file(run, valley_file):
    result = run("compute", "--point", 0, 0, 3, "--surface", valley_file, "--method", "network")
    assert result.exit_code == 0
    assert parse(result.output.strip()) == solve_oracle(Instance(valley_surface(), CENTER))


def test_out_of_scope_point(run):
    result = run("compute", "--point", 0, 0, -3, "--surface", "fund")
    assert result.exit_code == 2
    assert "k_0 >= k(i_0,j_0)" in result.output


@pytest.mark.parametrize(
    "args",
    [
        ("compute", "--point", 0, 0, 2),
        ("compute", "--point", 0, 0, 1, "--surface", "no-such-file.json"),
        ("specialize", "--scheme", "pentagram", "--n", 9, "--kappa", 2),
        ("specialize", "--scheme", "speyer", "--point", 0, 0, 3, "--surface", "VALLEY"),
    ],
)
def test_user_errors_exit_2(run, valley_file, args):
    args = tuple(valley_file if a == "VALLEY" else a for a in args)
    result = run(*args)
    assert result.exit_code == 2, result.output


def test_export_graph_and_closure(run, valley_file, tmp_path):
    for what, header in (("graph", "graph G {"), ("closure", "graph Gbar {")):
        result = run("export", what, "--point", 0, 0, 3, "--surface", valley_file)
        assert result.exit_code == 0
        assert result.output.startswith(header)
    out = tmp_path / "g.dot"
    result = run("export", "closure", "--point", 0, 0, 3, "--surface", valley_file, "--output", out)
    assert result.exit_code == 0 and result.output == ""
    assert out.read_text().startswith("graph Gbar {")


def test_export_matchings(run):
    result = run("export", "matchings", "--point", 0, 0, 3)
    lines = result.output.splitlines()
    assert lines[0] == "matchings 64"
    assert len(lines) == 65


def test_export_network(run):
    result = run("export", "network", "--point", 0, 0, 1)
    lines = result.output.splitlines()
    assert lines[0] == "rows -2..1"
    count = int(lines[1].split()[1])
    assert len(lines) == 2 + count
    assert all("anchor row" in line for line in lines[2:])


def test_specialize_schemes(run):
    result = run("specialize", "--scheme", "speyer", "--point", 0, 0, 1)
    assert parse(result.output.strip()) == parse(
        "B[0,0]*D[0,0]*t[-1,0]*t[0,0]^-1*t[1,0] + A[0,0]*C[0,0]*t[0,-1]*t[0,0]^-1*t[0,1]"
    )
    result = run("specialize", "--scheme", "lambda", "--point", 0, 0, 1, "--format", "json")
    payload = json.loads(result.output)
    assert parse(payload["polynomial"]) == parse("lam[0]*t[-1,0]*t[0,0]^-1*t[1,0] + mu[0]*t[0,-1]*t[0,0]^-1*t[0,1]")


def test_specialize_pentagram(run):
    result = run("specialize", "--scheme", "pentagram", "--n", 9, "--kappa", 4, "--index", 2)
    assert result.exit_code == 0
    lines = result.output.splitlines()
    assert lines[0].startswith("p^(1)[2] = ")
    assert lines[1] == "q^(1)[2] = p[2]^-1"
    result = run("specialize", "--scheme", "pentagram", "--n", 9, "--kappa", 3, "--step", 0, "--format", "json")
    payload = json.loads(result.output)
    assert [v["p"] for v in payload["values"]] == [f"p[{i}]" for i in range(1, 10)]


def test_specialize_requires_its_options(run):
    assert run("specialize", "--scheme", "pentagram", "--n", 9).exit_code == 2
    assert run("specialize", "--scheme", "lambda").exit_code == 2
