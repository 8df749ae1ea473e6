from __future__ import annotations

import json

import pytest

from ksgroups.cli import run_cli
from ksgroups.corpus import corpus, cyclic, named_group, parse_named
from ksgroups.errors import BadParams, FormatError, UnknownName
from ksgroups.groups import direct_product
from ksgroups.io import digest, group_from_json, group_to_json, tower_from_json, tower_to_json
from ksgroups.iso import find_isomorphism
from ksgroups.tower import validate_tower, verbal_quotient_tower


def run(capsys, *argv):
    code = run_cli(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    return code, json.loads(out)


class TestNamedGroups:
    def test_cyclic(self):
        G = named_group("cyclic:6")
        assert G.order == 6 and G.is_abelian

    def test_dihedral_involutions(self):
        G = named_group("dihedral:4")
        T = G.table.tolist()
        assert G.order == 8 and sum(1 for x in range(1, 8) if T[x][x] == 0) == 5

    def test_product(self):
        G = named_group("cyclic:2*symmetric:3")
        assert G.order == 12 and parse_named("cyclic:2*symmetric:3").name == "direct_product"
        assert find_isomorphism(G, direct_product(cyclic(2), named_group("symmetric:3")).group) is not None

    @pytest.mark.parametrize("spec,err", [("foo:3", UnknownName), ("cyclic:0", BadParams),
                                          ("quaternion:16", BadParams), ("cyclic:x", BadParams),
                                          ("cyclic:2:3", BadParams)])
    def test_errors(self, spec, err):
        with pytest.raises(err):
            named_group(spec)

    def test_corpus_is_deterministic(self):
        a = [(n, digest(group_to_json(G))) for n, G in corpus(16)]
        b = [(n, digest(group_to_json(G))) for n, G in corpus(16)]
        assert a == b and len({n for n, _ in a}) == len(a)


class TestJson:
    def test_group_round_trip(self):
        G = named_group("dihedral:3")
        H = group_from_json(json.loads(json.dumps(group_to_json(G))))
        assert (H.table == G.table).all()

    def test_perm_format(self):
        G = group_from_json({"format": "perm-v1", "degree": 3, "generators": [[1, 0, 2], [1, 2, 0]]})
        assert G.order == 6 and not G.is_abelian

    def test_tower_round_trip(self):
        t = verbal_quotient_tower(cyclic(8), (2, 4, 8))
        t2 = tower_from_json(json.loads(json.dumps(tower_to_json(t))))
        assert [L.order for L in t2.levels] == [2, 4, 8] and validate_tower(t2).valid
        assert digest(tower_to_json(t)) == digest(tower_to_json(t2))

    @pytest.mark.parametrize("obj", [
        {"format": "bogus"},
        {"format": "cayley-v1"},
        {"format": "perm-v1", "degree": 3},
        {"format": "tower-v1", "levels": []},
        {"format": "tower-v1", "levels": [group_to_json(cyclic(2)), group_to_json(cyclic(4))], "maps": []},
        {"format": "tower-v1", "levels": [group_to_json(cyclic(2)), group_to_json(cyclic(4))], "maps": [[0, 1]]},
    ])
    def test_format_errors(self, obj):
        with pytest.raises(FormatError):
            (tower_from_json if obj["format"] == "tower-v1" else group_from_json)(obj)


class TestCli:
    def test_decompose_c6(self, capsys):
        code, rep = run_json(capsys, "decompose", "--named", "cyclic:6")
        assert code == 0 and rep["command"] == "decompose"
        assert sorted(f["order"] for f in rep["result"]["factors"]) == [2, 3]
        assert rep["lemma_refs"]

    def test_iso_not_isomorphic(self, capsys):
        code, out, _ = run(capsys, "iso", "--named", "cyclic:4", "--named", "elementary_abelian:2:2")
        assert code == 0 and "not isomorphic" in out

    def test_iso_from_files(self, capsys, tmp_path):
        p = tmp_path / "s3.json"
        p.write_text(json.dumps({"format": "perm-v1", "degree": 3, "generators": [[1, 0, 2], [1, 2, 0]]}))
        code, rep = run_json(capsys, "iso", str(p), "--named", "dihedral:3")
        assert code == 0 and rep["result"]["isomorphic"]

    def test_fitting(self, capsys):
        # x -> 2x on C6 has kernel {0,3} and image {0,2,4}
        code, rep = run_json(capsys, "fitting", "--named", "cyclic:6", "--endo", "0,2,4,0,2,4")
        assert code == 0
        assert rep["result"]["kernel_part"] == [0, 3] and rep["result"]["image_part"] == [0, 2, 4]
        assert rep["result"]["classification"]["kind"] == "Neither"

    def test_fitting_non_normal_is_domain_error(self, capsys):
        # conjugation by a transposition in S3 is not normal
        G = named_group("symmetric:3")
        inv = G.inverse.tolist()
        t = next(x for x in range(1, 6) if inv[x] == x)
        conj = [int(G.table[G.table[t, x], t]) for x in range(6)]
        code, rep = run_json(capsys, "fitting", "--named", "symmetric:3", "--endo", ",".join(map(str, conj)))
        assert code == 1 and rep["error"] == "NotNormal"

    def test_normal_endos(self, capsys):
        code, rep = run_json(capsys, "normal-endos", "--named", "symmetric:3")
        assert code == 0 and rep["result"]["endomorphisms"] == 10 and rep["result"]["normal"] == 2

    def test_cancel(self, capsys):
        code, rep = run_json(capsys, "cancel", "--x", "cyclic:2*cyclic:4", "--y", "cyclic:4*cyclic:2",
                             "--g-order", "2")
        assert code == 0 and rep["result"]["complement_order"] == 4

    def test_tower_commands(self, capsys, tmp_path):
        p = tmp_path / "t.json"
        p.write_text(json.dumps(tower_to_json(verbal_quotient_tower(cyclic(8), (2, 4, 8)))))
        code, rep = run_json(capsys, "tower", "validate", str(p))
        assert code == 0 and rep["result"]["valid"] and rep["command"] == "tower validate"
        code, rep = run_json(capsys, "tower", "fin", str(p), "--max-order", "8")
        assert code == 0 and [c["order"] for c in rep["result"]["classes"]] == [1, 2, 4, 8]
        code, rep = run_json(capsys, "tower", "decompose", "--verbal-of", "cyclic:6", "--exponents", "2,6")
        assert code == 0 and all(r["ok"] for r in rep["result"]["w_bound"])
        code, rep = run_json(capsys, "tower", "same-fin", str(p), "--verbal-of", "cyclic:8", "--exponents", "2,4,8")
        assert code == 0 and rep["result"]["equal"]
        assert run(capsys, "tower", "same-fin", str(p))[0] == 2  # needs two towers

    def test_fiber_power(self, capsys, tmp_path):
        out = tmp_path / "fp.json"
        code, rep = run_json(capsys, "fiber-power", "--named", "cyclic:4", "--m0", "0", "--g0", "0,2",
                             "--power", "2", "--out", str(out))
        assert code == 0 and rep["result"]["order"] == rep["result"]["expected_order"] == 16
        assert group_from_json(json.loads(out.read_text())).order == 16

    def test_corpus(self, capsys):
        code, rep = run_json(capsys, "corpus", "--max-order", "8", "--no-products")
        names = [g["name"] for g in rep["result"]["groups"]]
        assert code == 0 and "quaternion:8" in names and "cyclic:8" in names

    def test_exit_codes(self, capsys):
        assert run(capsys, "decompose", "--named", "nosuch:3")[0] == 1
        assert run(capsys, "frobnicate")[0] == 2
        assert run(capsys, "iso", "--named", "cyclic:4")[0] == 2
        assert run(capsys, "selftest", "--only", "nosuch")[0] == 2
        code, rep = run_json(capsys, "decompose", "--named", "cyclic:2*cyclic:64")
        assert code == 1 and rep["error"] == "OrderBudgetExceeded"

    def test_determinism(self, capsys):
        argv = ["tower", "decompose", "--verbal-of", "cyclic:8*cyclic:27", "--exponents", "6,36,216", "--json"]
        assert run(capsys, *argv)[1] == run(capsys, *argv)[1]
        argv = ["selftest", "--only", "iso-symmetry,group-axioms", "--max-order", "12", "--json"]
        assert run(capsys, *argv)[1] == run(capsys, *argv)[1]

    def test_selftest_list(self, capsys):
        code, rep = run_json(capsys, "selftest", "--list")
        assert code == 0 and {"fitting", "dichotomy", "ks-uniqueness", "fiber-power"} <= {c["name"] for c in rep["result"]["checks"]}


def test_selftest_at_order_16(capsys):
    code, rep = run_json(capsys, "selftest", "--max-order", "16")
    assert code == 0 and rep["result"]["ok"] and rep["result"]["total_checked"] > 0
    assert all(c["checked"] > 0 for c in rep["result"]["checks"])
