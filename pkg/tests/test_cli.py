"""End-to-end command-line tests, including exit-code contracts."""
import contextlib
import io
import json
from pathlib import Path

import pytest

from freearr import cli as cli_mod

DATA = Path(__file__).resolve().parent.parent / "src" / "freearr" / "data"

BOOLEAN_FAMILY = "1; 0; 0\n0; 1; 0\n0; 0; 1\n"
NEAR_PENCIL5_FAMILY = "1; 0; 0\n0; 1; 0\n1; -1; 0\n1; -2; 0\n0; 0; 1\n"


def run(*args):
    out, err = io.StringIO(), io.StringIO()
    code = 0
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        try:
            cli_mod.main(list(args))
        except SystemExit as exc:
            code = exc.code or 0
    return code, out.getvalue(), err.getvalue()


@pytest.fixture()
def boolean_file(tmp_path):
    p = tmp_path / "boolean.fam"
    p.write_text(BOOLEAN_FAMILY)
    return str(p)


@pytest.fixture()
def np5_file(tmp_path):
    p = tmp_path / "np5.fam"
    p.write_text(NEAR_PENCIL5_FAMILY)
    return str(p)


class TestChiAndLattice:
    def test_chi_constant_family(self, boolean_file):
        code, out, _ = run("chi", boolean_file)
        assert code == 0
        assert out.strip() == "(x - 1)^3"

    def test_lattice_matches_golden_file(self):
        code, out, _ = run("lattice", "paper13", "--at", "3")
        assert code == 0
        assert out == (DATA / "paper13.lattice").read_text()

    def test_missing_at_for_parameterized_family(self):
        code, _, err = run("chi", "paper13")
        assert code == 1
        assert "give --at" in err

    def test_bad_at_value(self):
        code, _, err = run("chi", "paper13", "--at", "quad 5 x")
        assert code == 1
        assert "bad --at" in err

    def test_unreadable_source(self):
        code, _, err = run("lattice", "/no/such/file.fam")
        assert code == 1
        assert "error" in err


class TestFree:
    def test_free_13(self):
        code, out, _ = run("free", "paper13", "--at", "3")
        assert code == 0
        assert "Free with exponents [1, 6, 6]" in out

    def test_certificate_flag(self, boolean_file):
        code, out, _ = run("free", boolean_file, "--certificate")
        assert code == 0
        assert "saito-certificate" in out


class TestVerifyAndIso:
    def test_verify_matches(self):
        code, out, _ = run("verify", "paper13",
                           str(DATA / "paper13.lattice"), "--at", "3")
        assert code == 0
        assert "matches" in out

    def test_verify_mismatch_exit_one(self):
        code, out, _ = run("verify", "paper13",
                           str(DATA / "paper15.lattice"), "--at", "3")
        assert code == 1
        assert "NOT" in out

    def test_iso_two_generic_values(self):
        code, out, _ = run("iso", "paper13", "paper13",
                           "--at", "3", "--at2", "4")
        assert code == 0
        assert out.strip() == "isomorphic"

    def test_iso_failure_exit_one(self, boolean_file):
        code, out, _ = run("iso", "paper13", boolean_file, "--at", "3")
        assert code == 1
        assert "not isomorphic" in out


class TestInductionCommands:
    def test_indfree_13_not_if(self):
        code, out, _ = run("indfree", "paper13", "--at", "3")
        assert code == 0
        assert "Not inductively free" in out
        assert "[6]" in out  # the all-sixes restriction witness

    def test_recfree_13_not_rf(self):
        code, out, _ = run("recfree", "paper13", "--at", "3",
                           "--max-n", "14")
        assert code == 0
        assert "Verdict: NotRF" in out
        assert "Sound: True" in out

    def test_recfree_replay(self, np5_file, tmp_path):
        chain = tmp_path / "chain.txt"
        chain.write_text("delete 4\n")
        code, out, _ = run("recfree", np5_file, "--replay", str(chain))
        assert code == 0
        assert "Chain verified" in out

    def test_recfree_replay_invalid_chain(self, np5_file, tmp_path):
        chain = tmp_path / "chain.txt"
        chain.write_text("delete 99\n")
        code, _, err = run("recfree", np5_file, "--replay", str(chain))
        assert code == 1
        assert "chain verification failed" in err

    def test_abe_all_labels(self):
        code, out, _ = run("abe", "paper13", "--at", "3")
        assert code == 0
        assert out.count("h=") == 13
        assert "Violated" not in out


class TestModuliCommand:
    def test_json_payload(self):
        code, out, _ = run("moduli", "paper13", "--format", "json")
        assert code == 0
        payload = json.loads(out)
        assert payload["rational"] == {
            "-1": "LatticeChanges", "0": "CountDrops",
            "1/2": "LatticeChanges", "1": "CountDrops",
            "2": "LatticeChanges",
        }
        assert payload["quadratic"] == {"t^2 - t + 1": "CountDrops"}
        assert payload["unresolved"] == []

    def test_constant_family_rejected(self, boolean_file):
        code, _, err = run("moduli", boolean_file)
        assert code == 1
        assert "constant" in err


class TestReport:
    def test_json_deterministic_and_complete(self):
        code1, out1, _ = run("report", "paper13", "--at", "3",
                             "--format", "json", "--max-n", "14")
        code2, out2, _ = run("report", "paper13", "--at", "3",
                             "--format", "json", "--max-n", "14")
        assert code1 == code2 == 0
        assert out1 == out2
        payload = json.loads(out1)
        assert payload["count"] == 13
        assert payload["flats"] == 30
        assert payload["exponents"] == [1, 6, 6]
        assert payload["freeness"]["verdict"] == "Free"
        assert payload["inductively_free"] is False
        assert payload["recursively_free"]["verdict"] == "NotRF"
        assert payload["recursively_free"]["sound"] is True
        assert payload["aut_order"] == 18

    def test_text_format(self, np5_file):
        code, out, _ = run("report", np5_file)
        assert code == 0
        assert "Freeness: Free exponents [1, 1, 3]" in out
        assert "Inductively free: True" in out
