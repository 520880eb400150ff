import subprocess
import sys

import pytest

from nilhyp import hyperlattice as hl
from nilhyp.cli import main
from nilhyp.exactalg import GF, Subspace, format_matrix, format_subspace, parse_matrix, read_matrix
from nilhyp.nilpotent import NilpotentOperator
from oracles import conjugated


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


J2 = "field 3\n2 2\n0 1\n0 0\n"
T12 = "field 2\n3 3\n0 0 0\n0 0 1\n0 0 0\n"
TWO_J2 = "field 2\n4 4\n0 1 0 0\n0 0 0 0\n0 0 0 1\n0 0 0 0\n"


class TestAnalyze:
    def test_single_block(self, tmp_path, capsys):
        assert main(["analyze", "--matrix", write(tmp_path, "a", J2)]) == 0
        out = capsys.readouterr().out.splitlines()
        assert out[0] == "index 2; weyr 1,2; type 2:1"
        assert out[1] == "field GF(3); n 2"
        assert out[2] == "generator exponents 2"

    def test_zero_matrix(self, tmp_path, capsys):
        assert main(["analyze", "--matrix", write(tmp_path, "a", "field Q\n2 2\n0 0\n0 0\n")]) == 0
        assert capsys.readouterr().out.splitlines()[0] == "index 1; weyr 2; type 1:2"

    def test_not_nilpotent(self, tmp_path, capsys):
        assert main(["analyze", "--matrix", write(tmp_path, "a", "field 2\n2 2\n1 0\n0 1\n")]) == 2
        assert "nilpotent" in capsys.readouterr().err

    def test_missing_and_malformed(self, tmp_path):
        assert main(["analyze", "--matrix", str(tmp_path / "nope")]) == 2
        assert main(["analyze", "--matrix", write(tmp_path, "a", "field 2\n2 2\n0 1\n")]) == 2
        assert main(["analyze", "--matrix", write(tmp_path, "a", J2), "--field", "5"]) == 2
        assert main(["analyze", "--matrix", write(tmp_path, "a", J2), "--field", "9"]) == 2

    def test_bad_usage(self):
        assert main([]) == 2
        assert main(["analyze"]) == 2


class TestLattice:
    @pytest.mark.parametrize("spec,count", [("2:1", 3), ("1:1,2:1", 4), ("1:1,3:1", 6)])
    def test_counts(self, spec, count, capsys):
        assert main(["lattice", "--type", spec]) == 0
        out = capsys.readouterr().out.splitlines()
        assert out[-1] == f"count {count}"
        assert len(out) == count + 1

    def test_dims_and_dot(self, tmp_path, capsys):
        dot = tmp_path / "h.dot"
        assert main(["lattice", "--type", "1:1,2:1", "--dot", str(dot)]) == 0
        out = capsys.readouterr().out.splitlines()
        assert out[:4] == ["r=(0,0) dim=3", "r=(0,1) dim=2", "r=(1,1) dim=1", "r=(1,2) dim=0"]
        assert dot.read_text().count("->") == 3

    def test_bad_type(self):
        assert main(["lattice", "--type", "2:1,1:1"]) == 2


class TestCheck:
    def test_hyperinvariant(self, tmp_path, capsys):
        m = write(tmp_path, "m", T12)
        s = write(tmp_path, "s", "field 2\n1 3\n0 1 0\n")  # Im A
        assert main(["check", "--matrix", m, "--subspace", s]) == 0
        assert "r=(1,1)" in capsys.readouterr().out
        assert not (tmp_path / "s.witness").exists()

    def test_kernel_of_conjugated_operator(self, tmp_path):
        for seed in range(4):
            _, op, _ = conjugated(seed, GF(5))
            m = write(tmp_path, "m", format_matrix(op.matrix))
            s = write(tmp_path, "s", format_subspace(op.kernel(1)))
            assert main(["check", "--matrix", m, "--subspace", s, "--field", "5"]) == 0

    def test_not_hyperinvariant_writes_witness(self, tmp_path, capsys):
        m = write(tmp_path, "m", TWO_J2)
        s = write(tmp_path, "s", "field 2\n1 4\n1 0 0 0\n")
        assert main(["check", "--matrix", m, "--subspace", s]) == 1
        assert "swap" in capsys.readouterr().out
        B = read_matrix(str(tmp_path / "s.witness"))
        A = parse_matrix(TWO_J2)
        X = Subspace.span(GF(2), 4, [(1, 0, 0, 0)])
        assert A @ B == B @ A
        assert not X.image(B) <= X

    def test_explicit_witness_path(self, tmp_path):
        m = write(tmp_path, "m", T12)
        s = write(tmp_path, "s", "field 2\n1 3\n1 0 0\n")
        w = tmp_path / "w.txt"
        assert main(["check", "--matrix", m, "--subspace", s, "--witness", str(w)]) == 1
        assert w.exists()

    def test_dimension_mismatch(self, tmp_path):
        m = write(tmp_path, "m", T12)
        s = write(tmp_path, "s", "field 2\n1 2\n1 0\n")
        assert main(["check", "--matrix", m, "--subspace", s]) == 2

    def test_field_mismatch(self, tmp_path):
        m = write(tmp_path, "m", T12)
        s = write(tmp_path, "s", "field 3\n1 3\n1 0 0\n")
        assert main(["check", "--matrix", m, "--subspace", s]) == 2


class TestVerify:
    def test_passes(self, capsys):
        assert main(["verify", "--trials", "10", "--seed", "1"]) == 0
        assert capsys.readouterr().out.splitlines()[-1] == "10/10 passed"

    def test_zero_trials(self, capsys):
        assert main(["verify", "--trials", "0"]) == 0
        out = capsys.readouterr().out.splitlines()
        assert out[0].startswith("verify seed=0 trials=0") and out[-1] == "0/0 passed"

    def test_seed_from_environment(self, monkeypatch, capsys):
        monkeypatch.setenv("NILHYP_SEED", "5")
        main(["verify", "--trials", "3"])
        env_out = capsys.readouterr().out
        monkeypatch.delenv("NILHYP_SEED")
        main(["verify", "--trials", "3", "--seed", "5"])
        assert capsys.readouterr().out == env_out
        monkeypatch.setenv("NILHYP_SEED", "abc")
        assert main(["verify", "--trials", "1"]) == 2

    def test_byte_identical(self, capsys):
        main(["verify", "--trials", "6", "--seed", "1"])
        first = capsys.readouterr().out
        main(["verify", "--trials", "6", "--seed", "1"])
        assert capsys.readouterr().out == first

    def test_bad_arguments(self):
        assert main(["verify", "--trials", "-1"]) == 2
        assert main(["verify", "--fields", "4"]) == 2

    def test_detects_a_broken_characterization(self, monkeypatch, capsys):
        original = hl.subspace_iii

        def broken(op, r):
            X = original(op, r)
            return X.image(op.matrix)

        monkeypatch.setattr(hl, "subspace_iii", broken)
        assert main(["verify", "--trials", "5", "--seed", "1"]) == 1
        assert "FAIL" in capsys.readouterr().out

    def test_as_module(self):
        out = subprocess.run([sys.executable, "-m", "nilhyp", "verify", "--trials", "2", "--seed", "3"],
                             capture_output=True, text=True, check=True).stdout
        assert out.splitlines()[-1] == "2/2 passed"


class TestInfmem:
    def files(self, tmp_path, spec, rseq, vector):
        return ["infmem", "--spec", write(tmp_path, "spec", spec), "--rseq", write(tmp_path, "r", rseq),
                "--vector", write(tmp_path, "v", vector)]

    def test_member(self, tmp_path, capsys):
        args = self.files(tmp_path, "tail 3 1 w\n", "r\ntail coexp 2\n", "10 a 0 0 0 0 0 0 0 0 1\n")
        assert main(args) == 0
        assert capsys.readouterr().out.strip() == "member_ii true; member_iii true"

    def test_zero_vector(self, tmp_path, capsys):
        assert main(self.files(tmp_path, "block 1 w\nblock 4 2\n", "r 1 4\n", "")) == 0

    def test_non_member(self, tmp_path, capsys):
        args = self.files(tmp_path, "tail 3 1 w\n", "r\ntail coexp 2\n", "10 a 0 0 0 0 0 0 0 1\n")
        assert main(args) == 1
        assert capsys.readouterr().out.strip() == "member_ii false; member_iii false"

    def test_invalid_rseq(self, tmp_path, capsys):
        args = self.files(tmp_path, "block 1 1\nblock 3 1\n", "r 1 0\n", "1 1 1\n")
        assert main(args) == 2
        assert "MonotonicityViolation" in capsys.readouterr().err

    def test_bad_label(self, tmp_path):
        assert main(self.files(tmp_path, "block 2 1\n", "r 0\n", "2 7 1\n")) == 2

    def test_disagreement_exit_code(self, tmp_path, monkeypatch):
        import nilhyp.cli as cli
        monkeypatch.setattr(cli, "member_iii", lambda spec, R, x: False)
        assert main(self.files(tmp_path, "block 2 1\n", "r 0\n", "2 1 1\n")) == 3


def test_matrix_file_roundtrip(tmp_path):
    p = write(tmp_path, "m", T12)
    op = NilpotentOperator.from_matrix(read_matrix(p))
    assert str(op.segre) == "1:1,2:1"
