import json

import pytest

from gposition.cli import main
from gposition.graph import cycle_graph, format_edge_list, path_graph, star_graph
from gposition.product import cartesian_product, format_product_spec


@pytest.fixture
def write(tmp_path):
    def _write(name, text):
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return _write


def run_json(capsys, argv):
    code = main(argv + ["--json"])
    out, err = capsys.readouterr()
    return code, json.loads(out), err


def test_gp_grid(write, capsys):
    grid = cartesian_product(path_graph(3), path_graph(3)).materialized
    code, rep, _ = run_json(capsys, ["gp", write("g.txt", format_edge_list(grid))])
    assert code == 0 and rep["gp_number"] == 4
    assert list(rep) == ["command", "input", "gp_number", "witness", "proven_optimal", "nodes_expanded", "elapsed_ms"]


def test_gp_star_and_cycle(write, capsys):
    code, rep, _ = run_json(capsys, ["gp", write("s.txt", format_edge_list(star_graph(3)))])
    assert (code, rep["gp_number"], rep["witness"]) == (0, 3, [1, 2, 3])
    code, rep, _ = run_json(capsys, ["gp", write("c.txt", format_edge_list(cycle_graph(4)))])
    assert rep["gp_number"] == 2


def test_gp_text_output(write, capsys):
    assert main(["gp", write("s.txt", format_edge_list(star_graph(3)))]) == 0
    out = capsys.readouterr().out
    assert "gp_number: 3" in out and "witness: 1,2,3" in out


def test_gp_exit_codes(write, capsys):
    assert main(["gp", write("bad.txt", "3 1\n0 x\n")]) == 2
    assert main(["gp", write("dis.txt", "4 2\n0 1\n2 3\n")]) == 3
    grid = cartesian_product(path_graph(6), path_graph(6)).materialized
    path = write("grid.txt", format_edge_list(grid))
    code, rep, err = run_json(capsys, ["gp", path, "--budget", "2"])
    assert code == 4 and rep["proven_optimal"] is False and "budget" in err
    assert main(["gp", path, "--forced", "99"]) == 5


def test_gp_forced(write, capsys):
    path = write("p5.txt", format_edge_list(path_graph(5)))
    code, rep, _ = run_json(capsys, ["gp", path, "--forced", "2"])
    assert code == 0 and 2 in rep["witness"] and rep["gp_number"] == 2


@pytest.mark.parametrize(
    "graph, subset, verdict",
    [
        (path_graph(5), "0,2,4", "not-gp"),
        (star_graph(3), "1,2,3", "maximum-gp"),
        (cycle_graph(6), "0,2", "gp-but-not-maximal"),
    ],
)
def test_verify(write, capsys, graph, subset, verdict):
    code, rep, _ = run_json(capsys, ["verify", write("g.txt", format_edge_list(graph)), "--set", subset])
    assert code == 0 and rep["verdict"] == verdict
    if verdict == "not-gp":
        assert rep["violating_triple"] == [0, 2, 4]


def test_verify_out_of_range(write, capsys):
    assert main(["verify", write("g.txt", format_edge_list(path_graph(3))), "--set", "0,7"]) == 5


@pytest.mark.parametrize(
    "g, h, size",
    [(star_graph(3), path_graph(3), 5), (path_graph(3), path_graph(3), 4), (star_graph(5), star_graph(4), 9)],
)
def test_construct(write, capsys, g, h, size):
    code, rep, _ = run_json(capsys, ["construct", write("p.txt", format_product_spec(g, h))])
    assert code == 0
    assert rep["size"] == len(rep["coordinates"]) == size == rep["predicted"]
    assert rep["verdict"] == "maximal-gp"


def test_construct_coordinates(write, capsys):
    path = write("p.txt", format_product_spec(star_graph(3), path_graph(3)))
    _, rep, _ = run_json(capsys, ["construct", path, "--vi", "0", "--vj", "1"])
    assert set(rep["coordinates"]) == {"1,1", "2,1", "3,1", "0,0", "0,2"}
    assert rep["indices"] == sorted(3 * a + b for a, b in [(1, 1), (2, 1), (3, 1), (0, 0), (0, 2)])


def test_construct_seeded_anchors_are_reproducible(write, capsys):
    path = write("p.txt", format_product_spec(path_graph(6), star_graph(4)))
    _, a, _ = run_json(capsys, ["construct", path, "--seed", "7", "--no-timing"])
    _, b, _ = run_json(capsys, ["construct", path, "--seed", "7", "--no-timing"])
    assert a == b and a["verdict"] == "maximal-gp"


def test_construct_errors(write, capsys):
    assert main(["construct", write("c.txt", format_product_spec(cycle_graph(4), path_graph(3)))]) == 6
    assert main(["construct", write("s.txt", format_product_spec(path_graph(2), path_graph(3)))]) == 6
    assert main(["construct", write("l.txt", format_product_spec(path_graph(3), path_graph(3))), "--vi", "0"]) == 7
    assert main(["construct", write("x.txt", "3 2\n0 1\n1 2\n")]) == 2


def test_product_command(write, capsys):
    path = write("p.txt", format_product_spec(star_graph(3), path_graph(2)))
    code, rep, _ = run_json(capsys, ["product", path])
    assert code == 0 and (rep["n"], rep["m"]) == (8, 10)
    assert main(["product", path]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0] == "8 10"


@pytest.mark.parametrize("lo, hi, pairs", [(3, 3, 1), (3, 4, 6)])
def test_sweep(capsys, lo, hi, pairs):
    code, rep, _ = run_json(capsys, ["sweep", "--min", str(lo), "--max", str(hi), "--jobs", "1"])
    assert code == 0 and rep["pairs_checked"] == pairs and rep["mismatches"] == []


def test_sweep_range_guard(capsys):
    assert main(["sweep", "--max", "7"]) == 2
    assert main(["sweep", "--min", "2", "--max", "4"]) == 2


def test_sweep_mismatch_exit_code(capsys, monkeypatch):
    import gposition.enumeration as enumeration

    monkeypatch.setattr(enumeration, "theorem_prediction", lambda a, b: -1)
    assert main(["sweep", "--min", "3", "--max", "3", "--jobs", "1"]) == 8


def test_membership_command(capsys):
    code, rep, _ = run_json(capsys, ["membership", "--max", "5"])
    assert code == 0 and rep["mismatches"] == [] and rep["trees_checked"] == 6


def test_structured_output_is_stable(write, capsys):
    path = write("p.txt", format_product_spec(star_graph(3), path_graph(4)))
    outputs = []
    for _ in range(2):
        main(["sweep", "--min", "3", "--max", "4", "--jobs", "1", "--json", "--no-timing"])
        outputs.append(capsys.readouterr().out)
        main(["construct", path, "--json", "--no-timing"])
        outputs.append(capsys.readouterr().out)
    assert outputs[0] == outputs[2] and outputs[1] == outputs[3]
    assert "elapsed_ms" not in outputs[0]


def test_reports_only_on_stdout(write, capsys):
    main(["gp", write("d.txt", "4 2\n0 1\n2 3\n"), "--json"])
    out, err = capsys.readouterr()
    assert out == "" and "disconnected" in err
