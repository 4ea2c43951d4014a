import json

import pytest

from hypwalls import _config
from hypwalls.cli import build_parser, main
from hypwalls.domains import GroupSpec
from hypwalls.exceptions import DeterminantError, ParseError
from hypwalls.io import matrix_to_json, parse_group, parse_input, parse_matrix
from hypwalls.models import MoebiusMatrix

T_LIT = "[[[1,0]],[[1,0]],[[0,0]],[[1,0]]]"
NEAR = "[[[1,0]],[[1,0]],[[1e-6,0]],[[1.000001,0]]]"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, "--json", *argv)
    assert code == 0, err
    return json.loads(out)


# --- parsing ---


def test_parse_examples():
    g = parse_input(T_LIT)
    assert isinstance(g, MoebiusMatrix) and g.isclose(MoebiusMatrix(1, 1, 0, 1))
    assert parse_matrix("[[1,0],[0,1],[0,1],[0,0]]").isclose(MoebiusMatrix(1, 1j, 1j, 0))
    with pytest.raises(DeterminantError):
        parse_input("[[[1,0]],[[1,0]],[[0,0]],[[2,0]]]")


def test_parse_error_offsets():
    text = '[[[1,0]],[[1,0]],[[0,0]] [[1,0]]]'
    with pytest.raises(ParseError) as exc:
        parse_input(text)
    assert exc.value.offset == text.index(" [[1") + 1
    # offsets count bytes, not characters
    with pytest.raises(ParseError) as exc:
        parse_input('{"names": ["γ"], x}')
    assert exc.value.offset == len('{"names": ["γ"], '.encode("utf-8"))


@pytest.mark.parametrize("bad", [
    "[[[1,0]],[[1,0]],[[0,0]]]",
    '[[["1",0]],[[1,0]],[[0,0]],[[1,0]]]',
    "[[[1,0,0]],[[1,0]],[[0,0]],[[1,0]]]",
    "[[[true,0]],[[1,0]],[[0,0]],[[1,0]]]",
])
def test_parse_matrix_rejects(bad):
    with pytest.raises(ParseError):
        parse_matrix(bad)


def test_parse_group_forms():
    spec = parse_input(f"[{T_LIT}, [[[1,0]],[[0,0]],[[2,0]],[[1,0]]]]")
    assert isinstance(spec, GroupSpec) and len(spec.generators) == 2 and spec.fuchsian
    spec = parse_group(json.dumps({"generators": [json.loads(T_LIT)], "names": ["t"],
                                   "stabilizer": [[[0, 0], [-1, 0], [1, 0], [0, 0]]]}))
    assert spec.names == ["t"] and len(spec.stabilizer) == 1
    for bad in ("[]", '{"gens": []}', "3"):
        with pytest.raises(ParseError):
            parse_group(bad)


def test_matrix_round_trip():
    g = MoebiusMatrix.normalized(2 + 1j, 1, 1 - 1j, 0.4 + 0.3j)
    assert parse_matrix(json.dumps(matrix_to_json(g))).isclose(g, 1e-15)


# --- command line ---


def test_parser_rejects_unknown_flags():
    with pytest.raises(SystemExit) as exc:
        build_parser().parse_args(["classify", "--frobnicate"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit):
        build_parser().parse_args([])


def test_classify_json(capsys):
    rep = run_json(capsys, "classify", "--matrix", T_LIT)
    assert rep["class"] == "parabolic" and rep["fixed_points"] == ["inf"]
    assert set(rep) == {"class", "trace", "marginal", "fixed_points", "wall_relation", "n_used"}
    rep = run_json(capsys, "classify", "--matrix", "[[[1,0]],[[0,0]],[[1,0]],[[1,0]]]", "--method", "geometric")
    assert rep["class"] == "parabolic" and rep["wall_relation"]["kind"] == "tangent"
    assert rep["wall_relation"]["at"] == [0.0, 0.0] and rep["n_used"] == 1
    rep = run_json(capsys, "classify", "--matrix", "[[[1,0]],[[0,0]],[[0,0]],[[1,0]]]")
    assert rep["class"] == "identity" and rep["fixed_points"] == "all"


def test_classify_reads_files_and_stdin(capsys, tmp_path, monkeypatch):
    path = tmp_path / "t.json"
    path.write_text(T_LIT)
    assert run_json(capsys, "classify", str(path))["class"] == "parabolic"
    import io
    monkeypatch.setattr("sys.stdin", io.StringIO(T_LIT))
    assert run_json(capsys, "classify", "-")["class"] == "parabolic"


def test_text_output(capsys):
    code, out, _ = run(capsys, "classify", "--matrix", T_LIT)
    assert code == 0 and out.splitlines()[0] == "class: parabolic"


def test_exit_codes(capsys, tmp_path):
    assert run(capsys, "classify", "--matrix", "[[[1,0]],[[1,0]],[[0,0]],[[2,0]]]")[0] == 2
    assert run(capsys, "classify", "--matrix", "[[1,0]")[0] == 2
    assert run(capsys, "classify")[0] == 2
    assert run(capsys, "classify", str(tmp_path / "missing.json"))[0] == 2
    assert run(capsys, "wall", "--matrix", "[[[0,0]],[[-1,0]],[[1,0]],[[0,0]]]")[0] == 2
    assert run(capsys, "bianchi", "ideal-points", "--d", "4")[0] == 2
    assert run(capsys, "reduce", "--d", "1", "--point", "0,0")[0] == 2
    assert run(capsys, "reduce", "--d", "1", "--point", "0,0,-1")[0] == 2
    g = MoebiusMatrix.normalized(-0.9959 + 0.6028j, 1, 0, -0.7187 - 0.4350j)
    weak = json.dumps(matrix_to_json(g))
    code, _, err = run(capsys, "classify", "--matrix", weak, "--method", "geometric", "--max-power", "3")
    assert code == 3 and "Inconclusive" in err
    code, _, err = run(capsys, "reduce", "--d", "1", "--point", "0.3,0.1,0.0001", "--max-steps", "2")
    assert code == 3 and "StepLimit" in err


def test_wall_reports(capsys):
    h = "[[[2,0]],[[1,0]],[[1,0]],[[1,0]]]"
    rep = run_json(capsys, "wall", "--matrix", h)
    assert rep["wall"]["kind"] == "sphere"
    rep = run_json(capsys, "wall", "--matrix", h, "--kind", "isometric")
    assert rep["wall"]["center"] == pytest.approx([-1.0, 0.0]) and rep["wall"]["radius"] == pytest.approx(1.0)
    rep = run_json(capsys, "wall", "--matrix", h, "--model", "ball")
    assert rep["model"] == "ball" and rep["wall"]["radius"] == pytest.approx(2 / 5 ** 0.5)


def test_env_and_flag_tolerance(capsys, monkeypatch):
    assert run_json(capsys, "classify", "--matrix", NEAR)["class"] == "hyperbolic"
    monkeypatch.setenv("HYPWALLS_TOL", "1e-5")
    assert run_json(capsys, "classify", "--matrix", NEAR)["class"] == "parabolic"
    # the flag wins over the environment, before or after the subcommand
    assert run_json(capsys, "--tol", "1e-9", "classify", "--matrix", NEAR)["class"] == "hyperbolic"
    assert run_json(capsys, "classify", "--tol", "1e-9", "--matrix", NEAR)["class"] == "hyperbolic"
    monkeypatch.delenv("HYPWALLS_TOL")
    assert run_json(capsys, "--tol", "1e-5", "classify", "--matrix", NEAR)["class"] == "parabolic"
    # a run leaves the process-wide tolerance untouched
    assert _config.get_tol() == _config.DEFAULT_TOL


def test_bianchi_ideal_points_schema(capsys):
    rep = run_json(capsys, "bianchi", "ideal-points", "--d", "5")
    assert rep["d"] == 5 and rep["class_number"] == 2
    assert rep["ideal_points"][0] == {"kind": "infinity"}
    fin = rep["ideal_points"][1]
    assert fin["kind"] == "finite" and fin["r"] == 1 and fin["q"] == 2
    assert fin["z"] == pytest.approx([0.5, 5 ** 0.5 / 2])


def test_bianchi_enumerate_exact(capsys):
    rep = run_json(capsys, "bianchi", "enumerate", "--d", "1", "--norm-bound", "2")
    assert rep["count"] == len(rep["elements"])
    for m in rep["elements"]:
        assert all(isinstance(c, int) for e in m for c in e)


def test_bianchi_domain_report(capsys, tmp_path):
    svg = tmp_path / "d1.svg"
    rep = run_json(capsys, "bianchi", "domain", "--d", "1", "--svg", str(svg))
    assert {"walls", "faces", "f_infty", "df", "svg"} <= set(rep)
    assert rep["df"]["is_df"] is True
    assert all(0 <= i < len(rep["walls"]) for i in rep["faces"])
    assert svg.read_text().startswith("<?xml") or "<svg" in svg.read_text()


def test_domain_and_df_check(capsys):
    rep = run_json(capsys, "domain", "--generators", "fixture:figure_eight")
    assert rep["df"]["is_df"] is False and rep["faces"] and rep["f_infty"] is None
    rep = run_json(capsys, "df-check", "--generators", "fixture:figure_eight")
    assert rep["is_df"] is False and rep["witnesses"]


def test_domain_from_file(capsys, tmp_path):
    path = tmp_path / "g2.json"
    path.write_text(json.dumps([[[1, 0], [2, 0], [0, 0], [1, 0]], [[1, 0], [0, 0], [2, 0], [1, 0]]]))
    rep = run_json(capsys, "df-check", "--generators", str(path), "--max-word-len", "4", "--norm-bound", "60")
    assert rep["is_df"] is True
    assert run(capsys, "domain", "--generators", str(path), "--svg", str(tmp_path / "x.svg"), "--slice", "z=1")[0] == 2


def test_reduce_report(capsys):
    rep = run_json(capsys, "reduce", "--d", "1", "--point", "5.1,0.2,1.2")
    assert rep["output"] == pytest.approx([0.1, 0.2, 1.2])
    assert rep["membership"] != "outside"
    g = parse_matrix(json.dumps(rep["element"]))
    assert g.isclose(MoebiusMatrix(1, -5, 0, 1), 1e-12, projective=True)


@pytest.mark.parametrize("argv", [
    ["bianchi", "domain", "--d", "2", "--seed", "4"],
    ["domain", "--generators", "fixture:figure_eight", "--threads", "3"],
    ["classify", "--matrix", NEAR, "--method", "geometric"],
])
def test_byte_reproducible(capsys, argv):
    first = run(capsys, "--json", *argv)
    second = run(capsys, "--json", *argv)
    assert first[0] == 0 and first == second


def test_threads_do_not_change_output(capsys):
    one = run(capsys, "--json", "domain", "--generators", "fixture:figure_eight")
    many = run(capsys, "--json", "domain", "--generators", "fixture:figure_eight", "--threads", "4")
    assert one == many
