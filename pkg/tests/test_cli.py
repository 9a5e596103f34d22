"""Command-line front end: exit codes, reports, determinism."""

import json
import math
import subprocess
import sys

import pytest

from hspcrypt.cli import main
from hspcrypt.groups import AbelianGroup
from hspcrypt.qep import SessionKey, derive_generator, digit_count


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


@pytest.fixture
def files(tmp_path):
    key = tmp_path / "k.bin"
    key.write_bytes(bytes(range(1, 17)))
    plain = tmp_path / "p.bin"
    plain.write_bytes(bytes((7 * i) % 256 for i in range(1024)))
    return tmp_path, key, plain


def test_keygen(tmp_path, capsys):
    out = tmp_path / "k"
    code, rep = run(capsys, "keygen", "--bytes", 16, "--out", out, "--no-timestamp")
    assert code == 0 and len(out.read_bytes()) == 16
    assert rep["report_version"] == 1 and "timestamp" not in rep
    assert run(capsys, "keygen", "--bytes", 4, "--out", out)[0] == 1


def test_keygen_seed_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    run(capsys, "keygen", "--out", a, "--seed", 5)
    run(capsys, "keygen", "--out", b, "--seed", 5)
    assert a.read_bytes() == b.read_bytes()


def test_keygen_io_failure(tmp_path, capsys):
    assert run(capsys, "keygen", "--out", tmp_path / "missing" / "k")[0] == 2


def test_encrypt_decrypt_roundtrip(files, capsys):
    d, key, plain = files
    code, rep = run(capsys, "encrypt", "--group", "8,4,2", "--key", key, "--in", plain,
                    "--out", d / "f", "--chaff", 2.0, "--no-timestamp")
    assert code == 0
    r = AbelianGroup((8, 4, 2)).element_order(derive_generator(SessionKey(key.read_bytes()), AbelianGroup((8, 4, 2))))
    digits = digit_count(1024, r)
    assert rep["digit_count"] == digits
    assert rep["element_count"] == math.ceil(3 * digits)
    code, _ = run(capsys, "decrypt", "--key", key, "--in", d / "f", "--out", d / "q", "--no-timestamp")
    assert code == 0
    assert (d / "q").read_bytes() == plain.read_bytes()


def test_corrupted_frames_exit_4(files, capsys):
    d, key, plain = files
    run(capsys, "encrypt", "--group", "8,4,2", "--key", key, "--in", plain, "--out", d / "f")
    frame = (d / "f").read_bytes()
    header = 5 + 2 + 12 + 16
    for pos, value in [(0, ord("X")), (4, 9), (header + 3, 0xFF)]:
        bad = bytearray(frame)
        bad[pos] = value
        (d / "g").write_bytes(bytes(bad))
        assert run(capsys, "decrypt", "--key", key, "--in", d / "g", "--out", d / "q")[0] == 4


def test_degenerate_key_exit_3(files, capsys):
    d, _, plain = files
    zero = d / "zero"
    zero.write_bytes(bytes(16))
    code = main(["encrypt", "--group", "8", "--key", str(zero), "--in", str(plain), "--out", str(d / "f")])
    err = capsys.readouterr().err
    assert code == 3 and "keygen" in err


def test_missing_files_exit_2(files, capsys):
    d, key, _ = files
    assert run(capsys, "decrypt", "--key", key, "--in", d / "nope", "--out", d / "q")[0] == 2


def test_bad_group_is_usage_error(files, capsys):
    d, key, plain = files
    assert run(capsys, "encrypt", "--group", "8,x", "--key", key, "--in", plain, "--out", d / "f")[0] == 1


def test_hsp_abelian(capsys):
    code, rep = run(capsys, "hsp", "--group", "8,2", "--gens", "2,0", "--trials", 100, "--no-timestamp")
    assert code == 0
    assert rep["success_rate"] >= 0.99
    assert len(rep["per_trial"]) == 100
    assert all(t["brute_force_evaluations"] == 16 for t in rep["per_trial"])
    assert {"recovered_generators", "oracle_evaluations", "rounds", "success"} <= rep["per_trial"][0].keys()


def test_hsp_wreath(capsys):
    code, rep = run(capsys, "hsp", "--wreath", 2, "--trials", 200, "--no-timestamp")
    assert code == 0
    assert rep["first_batch_success_rate"] >= 0.70
    assert rep["success_rate"] >= rep["first_batch_success_rate"]


def test_hsp_usage_and_instance_errors(capsys):
    assert run(capsys, "hsp", "--group", "8,2", "--trials", 0)[0] == 1
    assert run(capsys, "hsp", "--wreath", 9, "--trials", 1)[0] == 2
    assert run(capsys, "hsp", "--group", "1024", "--trials", 1)[0] == 2
    with pytest.raises(SystemExit) as info:
        main(["hsp", "--trials", "1"])
    assert info.value.code == 1


def test_attack_coset_level(tmp_path, capsys):
    key = tmp_path / "k"
    key.write_bytes(bytes(15) + b"\x02")        # g_K = 2 in Z_16, |H| = 8
    plain = tmp_path / "p"
    plain.write_bytes(b"attack at dawn" * 3)
    run(capsys, "encrypt", "--group", "16", "--key", key, "--in", plain, "--out", tmp_path / "f", "--chaff", 1)
    code, rep = run(capsys, "attack", "--frame", tmp_path / "f", "--key", key, "--oracle", "coset-separating",
                    "--trials", 100, "--no-timestamp")
    assert code == 0
    correct = sum(t["subgroup_correct"] for t in rep["per_trial"])
    assert correct >= 99


def test_attack_none_high_chaff_reports(tmp_path, capsys):
    key = tmp_path / "k"
    key.write_bytes(bytes(15) + b"\x06")
    plain = tmp_path / "p"
    plain.write_bytes(bytes(range(48)))
    run(capsys, "encrypt", "--group", "256", "--key", key, "--in", plain, "--out", tmp_path / "f", "--chaff", 3)
    code, rep = run(capsys, "attack", "--frame", tmp_path / "f", "--key", key, "--oracle", "none",
                    "--trials", 3, "--no-timestamp")
    assert code == 0
    assert "success_rate" in rep and "mean_work" in rep


def test_attack_budget_exhausted_exit_5(tmp_path, capsys):
    key = tmp_path / "k"
    key.write_bytes(bytes(15) + b"\x02")
    plain = tmp_path / "p"
    plain.write_bytes(b"x" * 16)
    run(capsys, "encrypt", "--group", "16", "--key", key, "--in", plain, "--out", tmp_path / "f", "--chaff", 1)
    assert run(capsys, "attack", "--frame", tmp_path / "f", "--key", key, "--oracle", "coset",
               "--budget", 0, "--trials", 2)[0] == 5


def test_attack_invalid_oracle(tmp_path, capsys):
    with pytest.raises(SystemExit) as info:
        main(["attack", "--frame", "f", "--key", "k", "--oracle", "telepathy"])
    assert info.value.code == 1


def test_reports_are_deterministic(files, capsys):
    d, key, plain = files
    outs = []
    for _ in range(2):
        run(capsys, "encrypt", "--group", "8,4,2", "--key", key, "--in", plain, "--out", d / "f", "--seed", 11)
        frame = (d / "f").read_bytes()
        main(["hsp", "--group", "12,2", "--trials", "5", "--seed", "3", "--no-timestamp"])
        hsp = capsys.readouterr().out
        main(["hsp", "--wreath", "2", "--trials", "5", "--seed", "3", "--no-timestamp"])
        wr = capsys.readouterr().out
        main(["attack", "--frame", str(d / "f"), "--key", str(key), "--oracle", "none", "--trials", "2",
              "--no-timestamp"])
        att = capsys.readouterr().out
        outs.append((frame, hsp, wr, att))
    assert outs[0] == outs[1]


def test_timestamp_present_by_default(tmp_path, capsys):
    _, rep = run(capsys, "keygen", "--out", tmp_path / "k", "--seed", 1)
    assert "timestamp" in rep


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "hspcrypt", "keygen", "--bytes", "3", "--out", str(tmp_path / "k")],
                          capture_output=True, text=True)
    assert proc.returncode == 1
    proc = subprocess.run([sys.executable, "-m", "hspcrypt", "hsp", "--group", "4", "--trials", "2", "--no-timestamp"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["trials"] == 2
