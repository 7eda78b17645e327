"""End-to-end tests for the `gw` command line: pinned reports, the
exit-code contract (0 success, 1 semantic failure, 2 input error,
3 resource cap), format equivalence, and byte-for-byte determinism."""
import io
import json

from groundwork import catalog
from groundwork.cli import main


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_cohomology_pinned_example():
    code, out = run("cohomology", "--space", "pseudo-circle",
                    "--coef", "Z3", "--max-degree", "2")
    assert code == 0
    assert out == "H^0 = Z/3\nH^1 = Z/3\nH^2 = 0\n"


def test_ext_pinned_example():
    code, out = run("ext", "--ring", "Z4", "--module", "Z2",
                    "--against", "Z2", "--max-degree", "3")
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 4
    assert all(line.endswith("order 2") for line in lines)


def test_localize_pinned_example():
    code, out = run("localize", "--category", "walking-arrow",
                    "--sigma", "a")
    assert code == 0
    assert out.strip().splitlines() == [
        "0 => 0 : {<id0|id0>}", "0 => 1 : {<id0|a>}",
        "1 => 0 : {<a|id0>}", "1 => 1 : {<a|a>}"]


def test_validate_catalog_file(tmp_path):
    path = tmp_path / "wa.json"
    catalog.dump("walking-arrow", path)
    code, out = run("validate", str(path))
    assert code == 0
    assert "OK" in out


def test_validate_corrupted_compose_table_exits_1(tmp_path):
    path = tmp_path / "bad.json"
    catalog.dump("walking-arrow", path)
    data = json.loads(path.read_text())
    # redirect a composite to the wrong arrow
    data["payload"]["compose"] = [
        [g, f, ("id0" if h == "a" else h)]
        for g, f, h in data["payload"]["compose"]]
    path.write_text(json.dumps(data))
    code, out = run("validate", str(path))
    assert code == 1
    assert "failure" in out


def test_validate_malformed_json_exits_2(tmp_path):
    path = tmp_path / "junk.json"
    path.write_text("{not json")
    code, out = run("validate", str(path))
    assert code == 2


def test_unknown_catalog_name_exits_2():
    code, out = run("cohomology", "--space", "nope", "--coef", "Z2")
    assert code == 2


def test_resource_cap_exits_3(monkeypatch):
    monkeypatch.setenv("GW_ELEMENT_CAP", "10")
    code, out = run("resolve", "--ring", "Z4", "--module", "Z2",
                    "--length", "1")
    assert code == 3
    assert "resource cap" in out


def test_ore_failure_prints_witness_and_exits_1():
    code, out = run("ore", "--category", "cospan", "--sigma", "l<=c")
    assert code == 1
    assert "('OreSquare', 'r<=c', 'l<=c')" in out
    code, out = run("ore", "--category", "walking-arrow", "--sigma", "a")
    assert code == 0


def test_les_verified():
    code, out = run("les", "--space", "interval-3", "--kind", "const",
                    "--d", "2", "--e", "2", "--max-degree", "1")
    assert code == 0
    assert "H^0(F) = Z/4" in out
    assert "verified" in out


def test_les_seeded_is_deterministic():
    a = run("les", "--space", "interval-3", "--seed", "5",
            "--max-degree", "1")
    b = run("les", "--space", "interval-3", "--seed", "5",
            "--max-degree", "1")
    assert a == b and a[0] == 0


def test_cech_two_arc_cover():
    code, out = run("cech", "--space", "pseudo-circle", "--coef", "Z3",
                    "--cover", "a,b,c", "--cover", "a,b,d",
                    "--max-degree", "1")
    assert code == 0
    assert out == "Hcech^0 = Z/3\nHcech^1 = Z/3\n"


def test_cech_non_cover_exits_1():
    code, out = run("cech", "--space", "pseudo-circle", "--coef", "Z3",
                    "--cover", "a,b,c", "--max-degree", "1")
    assert code == 1


def test_sheafify_and_is_sheaf():
    code, out = run("sheafify", "--site", "square-site",
                    "--presheaf", "square-presheaf")
    assert code == 0
    assert "unit F -> aF is iso: yes" in out
    code, out = run("is-sheaf", "--site", "square-site",
                    "--presheaf", "square-presheaf")
    assert code == 0


def test_yoneda_check():
    code, out = run("yoneda-check", "--category", "square-poset",
                    "--object", "1")
    assert code == 0
    assert "round-trip bijection verified" in out


def test_baer_verdicts():
    assert run("baer", "--ring", "Z4", "--module", "regular")[0] == 0
    code, out = run("baer", "--ring", "Z4", "--module", "Z2")
    assert code == 1
    assert "witness ideal" in out


def test_mtt_check_exit_codes(tmp_path):
    good = tmp_path / "good.txt"
    good.write_text("forall x in A. x = x\n# comment\nexists y in A. y in A\n")
    assert run("mtt", "check", str(good), "--delta0")[0] == 0
    mixed = tmp_path / "mixed.txt"
    mixed.write_text("exists y. y in A\n")
    code, out = run("mtt", "check", str(mixed), "--delta0")
    assert code == 1 and "not Delta0" in out
    bad = tmp_path / "bad.txt"
    bad.write_text("forall x in\n")
    assert run("mtt", "check", str(bad))[0] == 2


def test_mtt_abstract_mode(tmp_path):
    f = tmp_path / "terms.txt"
    f.write_text("{x | x in1 A3 and x in1 B3}\n")
    code, out = run("mtt", "check", str(f), "--abstract")
    assert code == 0 and "Class" in out


def test_catalog_subcommand(tmp_path):
    code, out = run("catalog", "list")
    assert code == 0
    assert "pseudo-circle" in out.splitlines()
    code, out = run("catalog", "show", "Z4")
    assert code == 0 and "kind: ring" in out
    dest = tmp_path / "z4.json"
    code, out = run("catalog", "dump", "Z4", str(dest))
    assert code == 0 and dest.exists()


def test_json_format_matches_text_content():
    for argv in [["cohomology", "--space", "pseudo-circle",
                  "--coef", "Z2", "--max-degree", "1"],
                 ["localize", "--category", "walking-arrow",
                  "--sigma", "a"],
                 ["ore", "--category", "cospan", "--sigma", "l<=c"]]:
        code_t, text = run(*argv)
        code_j, blob = run("--format", "json", *argv)
        data = json.loads(blob)
        assert code_j == code_t == data["exit"]
        assert data["lines"] == text.splitlines()


def test_identical_invocations_are_byte_identical():
    argv = ["ext", "--ring", "F2x", "--module", "Z2", "--against", "Z2",
            "--max-degree", "2"]
    assert run(*argv) == run(*argv)
