from operadgb.cli import main
from operadgb.gdmodels import case3_table


def run(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_gb_dims_roundtrip(tmp_path, capsys):
    basis_path = str(tmp_path / "gd4.basis")
    code, out, _ = run(["gb", "--preset", "gd", "--max-arity", "4",
                        "-o", basis_path], capsys)
    assert code == 0
    assert "arity 4" in out

    rows_path = str(tmp_path / "rows.csv")
    code, out, _ = run(["dims", "--basis", basis_path, "-o", rows_path], capsys)
    assert code == 0
    assert "140" in out
    with open(rows_path) as fh:
        assert fh.read().splitlines() == ["1,1", "2,3", "3,17", "4,140"]


def test_gb_requires_extended_beyond_budget(capsys):
    code, _out, err = run(["gb", "--preset", "gd", "--max-arity", "6"], capsys)
    assert code == 2
    assert "extended" in err


def test_gb_unknown_preset(capsys):
    code, _out, err = run(["gb", "--preset", "nope"], capsys)
    assert code == 1
    assert "unknown preset" in err


def test_reduce_own_relation_to_zero(tmp_path, capsys):
    basis_path = str(tmp_path / "gd4.basis")
    assert main(["gb", "--preset", "gd", "--max-arity", "4",
                 "-o", basis_path]) == 0
    capsys.readouterr()
    elem_path = tmp_path / "jacobi.txt"
    elem_path.write_text("z(z(1 2) 3) - z(1 z(2 3)) - z(z(1 3) 2)\n")
    code, out, _ = run(["reduce", "--basis", basis_path,
                        "--input", str(elem_path)], capsys)
    assert code == 0
    assert out.strip().endswith(": 0")


def test_reduce_spec1_nonzero_mod_gd(tmp_path, capsys):
    basis_path = str(tmp_path / "gd4.basis")
    assert main(["gb", "--preset", "gd", "--max-arity", "4",
                 "-o", basis_path]) == 0
    capsys.readouterr()
    code, out, _ = run(["reduce", "--basis", basis_path,
                        "--identity", "spec1"], capsys)
    assert code == 3  # not in the ideal


def test_reduce_spec1_zero_mod_wsgd(tmp_path, capsys):
    basis_path = str(tmp_path / "ws4.basis")
    assert main(["gb", "--preset", "wsgd", "--max-arity", "4",
                 "-o", basis_path]) == 0
    capsys.readouterr()
    code, out, _ = run(["reduce", "--basis", basis_path,
                        "--identity", "spec1"], capsys)
    assert code == 0


def test_reduce_order_mismatch(tmp_path, capsys):
    basis_path = str(tmp_path / "gd4.basis")
    assert main(["gb", "--preset", "gd", "--max-arity", "4",
                 "-o", basis_path]) == 0
    capsys.readouterr()
    code, _out, err = run(["reduce", "--basis", basis_path,
                           "--identity", "spec1",
                           "--order", "revpathlex"], capsys)
    assert code == 1
    assert "order" in err


def test_ambiguities_degree3(capsys):
    code, out, _ = run(["ambiguities", "--degree", "3", "--modulo", "gd"],
                       capsys)
    assert code == 0
    assert "3 critical pairs at degree 3" in out
    assert "0 nonzero residues" in out
    assert "independent special identities found: 0" in out


def test_ambiguities_degree4_finds_two_identities(capsys):
    code, out, _ = run(["ambiguities", "--degree", "4", "--modulo", "gd"],
                       capsys)
    assert code == 0
    assert "independent special identities found: 2" in out
    for fam in ("[A1]", "[A2]", "[A3]", "[A4]", "[A5]"):
        assert fam in out


def test_ambiguities_degree4_modulo_wsgd_all_zero(capsys):
    code, out, _ = run(["ambiguities", "--degree", "4", "--modulo", "wsgd"],
                       capsys)
    assert code == 0
    assert "0 nonzero residues modulo wsgd" in out


def test_ambiguities_trace(capsys):
    code, out, _ = run(["ambiguities", "--degree", "3", "--emit-trace"],
                       capsys)
    assert code == 0
    assert "route-1" in out and "->" in out


def test_check_gd_case3(tmp_path, capsys):
    path = tmp_path / "case3.gd"
    path.write_text(case3_table().format())
    code, out, _ = run(["check-gd", str(path)], capsys)
    assert code == 0
    assert "PASS" in out
    assert "case3" in out
    assert "embedding verified" in out


def test_check_gd_axiom_failure(tmp_path, capsys):
    path = tmp_path / "bad.gd"
    path.write_text("dim 2\ncirc 1 1 = 1 0\nbracket 1 2 = 0 1\n")
    code, out, _ = run(["check-gd", str(path)], capsys)
    assert code == 3
    assert "FAIL" in out


def test_check_gd_case1(tmp_path, capsys):
    path = tmp_path / "case1.gd"
    path.write_text("dim 2\n"
                    "circ 1 1 = 1 0\ncirc 1 2 = 0 2\ncirc 2 1 = 0 1\n"
                    "bracket 1 2 = 0 1\n")
    code, out, _ = run(["check-gd", str(path)], capsys)
    assert code == 0
    assert "case1" in out and "verified" in out
