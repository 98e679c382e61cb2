"""Document round-trips and CLI behaviour (determinism, exit codes)."""

import json

import pytest

from midconv.cli import main
from midconv.documents import (
    dumps_canonical,
    matrix_to_json,
    parse_document,
    serialize_document,
    system_from_document,
    system_to_document,
)
from midconv.errors import ParseError, ValidationError
from midconv.exactalg import Matrix, gr
from midconv.systems import System, scalar_system



@pytest.fixture
def triple(nilpotent_triple):
    return nilpotent_triple


@pytest.fixture
def triple_file(tmp_path, triple):
    path = tmp_path / "triple.sys"
    path.write_text(serialize_document(triple, name="rigid-triple"))
    return str(path)


def run_cli(capsys, *args):
    status = main(list(args))
    out = capsys.readouterr().out
    return status, json.loads(out) if out else None


class TestDocuments:
    def test_minimal_rank_one_document(self):
        doc = {
            "kind": "system",
            "dimension": 1,
            "constant": [[{"re": "0/1", "im": "0/1"}]],
            "parts": [
                {
                    "point": {"re": "0/1", "im": "0/1"},
                    "coefficients": [[[{"re": "3/1", "im": "0/1"}]]],
                }
            ],
        }
        sys_ = system_from_document(doc)
        assert sys_ == scalar_system({0: [3]})

    def test_duplicate_poles_rejected(self):
        doc = system_to_document(scalar_system({0: [3]}))
        doc["parts"] = doc["parts"] * 2
        with pytest.raises(ValidationError):
            system_from_document(doc)

    def test_parse_error_carries_location(self):
        with pytest.raises(ParseError) as info:
            parse_document("{ not json }")
        assert info.value.line == 1

    def test_round_trips(self, triple):
        text = serialize_document(triple, name="rigid-triple")
        parsed = parse_document(text)
        assert serialize_document(parsed, name="rigid-triple") == text
        assert parsed == triple

    def test_declaration_round_trip(self):
        s = System(2, Matrix.diagonal([2, 2]), (), declaration=((gr(2), 1),))
        text = serialize_document(s)
        parsed = parse_document(text)
        assert parsed.declaration == ((gr(2), 1),)

    def test_declaration_violation_rejected(self):
        s = System(2, Matrix.diagonal([2, 2]), (), declaration=((gr(2), 1),))
        doc = system_to_document(s)
        doc["constant"][0][0]["re"] = "3/1"
        with pytest.raises(ValidationError):
            system_from_document(doc)

    def test_zero_pair_round_trip(self):
        from midconv.systems import zero_pair

        text = serialize_document(zero_pair())
        assert parse_document(text) == zero_pair()
        assert serialize_document(parse_document(text)) == text

    def test_random_system_round_trips(self, rng):
        from midconv.checks import random_system

        for _ in range(25):
            sys_ = random_system(rng, constant=rng.choice(["zero", "diagonal", "full"]))
            text = serialize_document(sys_)
            parsed = parse_document(text)
            assert parsed == sys_
            assert serialize_document(parsed) == text


class TestCli:
    def test_rigidity_of_fixture(self, capsys, triple_file):
        status, report = run_cli(capsys, "rigidity", triple_file)
        assert status == 0
        assert report["result"] == {"rigidity_index": 0, "rigid": True}

    def test_mc_reproduces_entry_formula(self, capsys, tmp_path):
        alpha_file = tmp_path / "in.sys"
        alpha_file.write_text(serialize_document(scalar_system({0: [1, 1]})))
        lam_file = tmp_path / "lam.sys"
        lam_file.write_text(serialize_document(scalar_system({0: [1]})))
        status, report = run_cli(capsys, "mc", "--alpha", str(lam_file), str(alpha_file))
        assert status == 0
        out = system_from_document(report["result"])
        part = out.part_at(gr(0))
        assert part.coefficients[1] == Matrix.from_rows([[1, 2], [0, 0]])
        assert part.coefficients[0] == Matrix.from_rows([[1, 0], [1, 2]])

    def test_hd_twice_then_equiv(self, capsys, tmp_path, triple, triple_file):
        status, report = run_cli(capsys, "hd", triple_file)
        assert status == 0
        first = tmp_path / "hd1.sys"
        first.write_text(dumps_canonical(report["result"]))
        status, report = run_cli(capsys, "hd", str(first))
        assert status == 0
        second = tmp_path / "hd2.sys"
        second.write_text(dumps_canonical(report["result"]))
        status, report = run_cli(capsys, "equiv", str(second), triple_file)
        assert status == 0
        assert report["result"]["equivalent"] is True
        assert "witness" in report["result"]

    def test_canon_then_phi_inverts(self, capsys, tmp_path, triple, triple_file):
        status, report = run_cli(capsys, "canon", triple_file)
        assert status == 0
        datum_file = tmp_path / "datum.json"
        datum_file.write_text(dumps_canonical(report["result"]))
        status, report = run_cli(capsys, "phi", str(datum_file))
        assert status == 0
        assert system_from_document(report["result"]) == triple
        status, report = run_cli(capsys, "stable", str(datum_file))
        assert status == 0 and report["result"]["stable"] is True

    def test_katz_reduce_trace(self, capsys, triple_file):
        status, report = run_cli(capsys, "katz-reduce", triple_file)
        assert status == 0
        steps = report["result"]["steps"]
        assert len(steps) == 1
        assert steps[0]["rank_before"] == 2 and steps[0]["rank_after"] == 1

    def test_normal_form_and_friends(self, capsys, triple_file):
        status, report = run_cli(capsys, "normal-form", "--point", "0", triple_file)
        assert status == 0
        assert report["result"]["spectra"][0]["dimension"] == 2
        status, report = run_cli(capsys, "stab-dim", "--point", "0", triple_file)
        assert report["result"]["stabilizer_dimension"] == 2
        status, report = run_cli(capsys, "select-alpha", "--point", "0", triple_file)
        assert status == 0
        status, report = run_cli(capsys, "orbit-dim", triple_file)
        assert report["result"]["orbit_dimension"] == 6
        status, report = run_cli(capsys, "irred", triple_file)
        assert report["result"]["irreducible"] is True

    def test_dr_subcommand(self, capsys, triple_file):
        status, report = run_cli(capsys, "dr", "--lambda", "1", triple_file)
        assert status == 0
        assert report["result"]["dimension"] == 4

    def test_gaussian_point_flag(self, capsys, tmp_path):
        from midconv.systems import PrincipalPart, System

        up = Matrix.from_rows([[0, 1], [0, 0]])
        sys_ = System(
            2,
            Matrix.zeros(2, 2),
            (PrincipalPart(gr(0, 1), (up,)), PrincipalPart(gr(0, -1), (up.transpose(),))),
        )
        path = tmp_path / "gauss.sys"
        path.write_text(serialize_document(sys_))
        status, report = run_cli(capsys, "stab-dim", "--point", "0,1", str(path))
        assert status == 0
        assert report["result"]["stabilizer_dimension"] == 2

    def test_okubo_subcommand(self, capsys, tmp_path):
        doc = {
            "kind": "okubo",
            "dimension": 2,
            "t_matrix": matrix_to_json(Matrix.diagonal([0, 1])),
            "r_matrix": matrix_to_json(Matrix.from_rows([[1, 1], [1, 1]])),
        }
        path = tmp_path / "okubo.json"
        path.write_text(dumps_canonical(doc))
        status, report = run_cli(capsys, "okubo", str(path))
        assert status == 0
        assert report["result"]["dimension"] == 1

    def test_check_is_deterministic(self, capsys, triple_file):
        s1, r1 = run_cli(capsys, "check", "--seed", "5", "--trials", "2", triple_file)
        s2, r2 = run_cli(capsys, "check", "--seed", "5", "--trials", "2", triple_file)
        assert s1 == s2 == 0
        assert r1 == r2
        assert all(c["passed"] for c in r1["result"]["checks"])

    def test_domain_error_exit_one(self, capsys, tmp_path):
        bad_alpha = tmp_path / "alpha.sys"
        bad_alpha.write_text(serialize_document(scalar_system({5: [1]})))
        target = tmp_path / "in.sys"
        target.write_text(serialize_document(scalar_system({0: [1, 1]})))
        status, report = run_cli(capsys, "mc", "--alpha", str(bad_alpha), str(target))
        assert status == 1
        assert report["error"]["type"] == "PoleMismatch"

    def test_usage_error_exit_two(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["no-such-command"])
        assert info.value.code == 2

    def test_byte_identical_reports(self, capsys, triple_file):
        status1 = main(["rigidity", triple_file])
        out1 = capsys.readouterr().out
        status2 = main(["rigidity", triple_file])
        out2 = capsys.readouterr().out
        assert status1 == status2 == 0
        assert out1 == out2

    def test_shipped_fixture_parses_and_is_rigid(self, capsys):
        import pathlib

        path = pathlib.Path(__file__).resolve().parent.parent / "fixtures" / "rigid-triple.sys"
        text = path.read_text()
        parsed = parse_document(text)
        assert serialize_document(parsed, name="rigid-triple") == text
        status, report = run_cli(capsys, "rigidity", str(path))
        assert status == 0
        assert report["result"]["rigidity_index"] == 0

    def test_shipped_rank1_mc_matches_formula(self, capsys):
        import pathlib

        base = pathlib.Path(__file__).resolve().parent.parent / "fixtures"
        status, report = run_cli(
            capsys,
            "mc",
            "--alpha",
            str(base / "alpha-simple.sys"),
            str(base / "rank1-irregular.sys"),
        )
        assert status == 0
        out = system_from_document(report["result"])
        part = out.part_at(gr(0))
        assert part.coefficients[1] == Matrix.from_rows([[1, 2], [0, 0]])
        assert part.coefficients[0] == Matrix.from_rows([[1, 0], [1, 2]])
