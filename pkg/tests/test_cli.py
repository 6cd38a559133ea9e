import numpy as np
import pytest

from qbaker import images
from qbaker.cipher import MasterKey, write_key
from qbaker.cli import main


@pytest.fixture
def workspace(tmp_path):
    rng = np.random.default_rng(31)
    for i in range(3):
        images.write_pgm(
            tmp_path / f"img{i}.pgm", rng.integers(0, 256, size=(8, 8)).astype(np.uint8)
        )
    (tmp_path / "manifest.txt").write_text("img0.pgm\nimg1.pgm\nimg2.pgm\n")
    write_key(tmp_path / "key.txt", MasterKey((49.0, 23.0, 58.0, 120.0, 237.0), 77))
    return tmp_path


class TestEncryptDecrypt:
    def test_files_roundtrip_byte_identical(self, workspace, capsys):
        ct = workspace / "ct.bin"
        out = workspace / "out"
        rc = main([
            "encrypt", "--manifest", str(workspace / "manifest.txt"),
            "--key", str(workspace / "key.txt"), "--out", str(ct),
        ])
        assert rc == 0
        rc = main([
            "decrypt", "--in", str(ct),
            "--key", str(workspace / "key.txt"), "--out-dir", str(out),
        ])
        assert rc == 0
        for i in range(3):
            original = (workspace / f"img{i}.pgm").read_bytes()
            recovered = (out / f"image_{i:04d}.pgm").read_bytes()
            assert original == recovered

    def test_missing_manifest_exits_one(self, workspace, capsys):
        rc = main([
            "encrypt", "--manifest", str(workspace / "nope.txt"),
            "--key", str(workspace / "key.txt"), "--out", str(workspace / "x"),
        ])
        assert rc == 1
        assert "error:" in capsys.readouterr().err


class TestSynthVerify:
    def test_synth_then_verify(self, tmp_path, capsys):
        circ = tmp_path / "circ.txt"
        assert main(["synth", "--n", "3", "--partition", "2,1,1", "--out", str(circ)]) == 0
        capsys.readouterr()
        assert main(["verify", "--circuit", str(circ)]) == 0
        assert "EQUIVALENT, 11 gates" in capsys.readouterr().out

    def test_verify_detects_tampering(self, tmp_path, capsys):
        circ = tmp_path / "c.txt"
        main(["synth", "--n", "3", "--partition", "2,1,1", "--out", str(circ)])
        lines = circ.read_text().splitlines()
        circ.write_text("\n".join(lines[:-1]) + "\n")  # drop the last gate
        assert main(["verify", "--circuit", str(circ)]) == 1
        assert "MISMATCH" in capsys.readouterr().out

    def test_count(self, capsys):
        assert main(["count", "--n", "3", "--partition", "2,1,1"]) == 0
        assert "= 11 gates" in capsys.readouterr().out

    def test_inadmissible_partition_fails(self, capsys):
        assert main(["count", "--n", "2", "--partition", "0,1,0"]) == 1


class TestEnumerate:
    def test_lists_all(self, capsys):
        assert main(["enumerate", "--n", "2"]) == 0
        out = capsys.readouterr().out.strip().splitlines()
        assert len(out) == 5
        assert "1,1" in out


class TestTable1:
    def test_prints_and_writes_csv(self, tmp_path, capsys):
        csv = tmp_path / "t.csv"
        assert main(["table1", "--csv", str(csv)]) == 0
        out = capsys.readouterr().out
        assert "ratio P2/P1" in out
        assert csv.read_text().startswith("row,")


class TestChaosTrace:
    def test_matches_golden_file(self, tmp_path):
        out = tmp_path / "trace.csv"
        rc = main([
            "chaos-trace", "--steps", "250",
            "--lambdas", "49,23,58,120,237",
            "--init", "0.1,0.5,0.2,-0.8,0.9",
            "--out", str(out),
        ])
        assert rc == 0
        golden = (
            __import__("pathlib").Path(__file__).parent / "data" / "chaos_trace_golden.csv"
        )
        assert out.read_text() == golden.read_text()

    def test_bad_init_rejected(self, capsys):
        assert main(["chaos-trace", "--init", "0.1,0.2"]) == 1


def test_unknown_command_exits_two(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
