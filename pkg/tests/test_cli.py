import json
import subprocess
import sys

import pytest

from rangesync import read_set_file, write_set_file
from rangesync.cli import main


def run_main(argv, capsys):
    code = main(argv)
    out = capsys.readouterr().out.strip().splitlines()
    return code, [json.loads(line) for line in out if line]


def gen_pair(tmp_path, capsys, kind="random", n=40, overlap=0.5, seed=6, width=8):
    out0 = tmp_path / "a.set"
    out1 = tmp_path / "b.set"
    code, payloads = run_main([
        "gen", "--kind", kind, "--n", str(n), "--overlap", str(overlap),
        "--seed", str(seed), "--item-width", str(width),
        "--out0", str(out0), "--out1", str(out1),
    ], capsys)
    assert code == 0
    return out0, out1, payloads[0]


def test_gen_writes_readable_set_files(tmp_path, capsys):
    out0, out1, summary = gen_pair(tmp_path, capsys)
    width0, items0 = read_set_file(out0)
    width1, items1 = read_set_file(out1)
    assert width0 == width1 == 8
    assert summary["size0"] == len(items0) == 40
    assert summary["size1"] == len(items1) == 40
    assert summary["n_delta"] == len(set(items0) ^ set(items1)) == 40


def test_sync_reports_union_and_exits_zero(tmp_path, capsys):
    out0, out1, summary = gen_pair(tmp_path, capsys)
    code, payloads = run_main(
        ["sync", str(out0), str(out1), "--scheme", "treap256"], capsys)
    assert code == 0
    stats = payloads[0]
    assert stats["stats_version"] == 1
    assert stats["size0"] == stats["size1"] == stats["union_size"] == 60
    assert stats["messages_total"] >= 2


def test_sync_rejects_mismatched_widths(tmp_path, capsys):
    narrow = tmp_path / "narrow.set"
    wide = tmp_path / "wide.set"
    write_set_file(narrow, [b"\x01"], 1)
    write_set_file(wide, [b"\x00\x01"], 2)
    code, _ = run_main(["sync", str(narrow), str(wide)], capsys)
    assert code == 1


def test_corrupt_set_file_is_a_usage_error(tmp_path, capsys):
    bogus = tmp_path / "bogus.set"
    bogus.write_bytes(b"not a set file at all")
    code, _ = run_main(["sync", str(bogus), str(bogus)], capsys)
    assert code == 1


def test_usage_errors_exit_one(capsys):
    with pytest.raises(SystemExit) as err:
        main(["sync", "only-one-file"])
    assert err.value.code == 1
    with pytest.raises(SystemExit) as err:
        main(["gen", "--kind", "nonsense", "--n", "4"])
    assert err.value.code == 1


def test_bench_passes_on_equal_scenario(capsys):
    code, payloads = run_main(
        ["bench", "--kind", "equal", "--n", "24", "--reps", "2",
         "--item-width", "4"], capsys)
    assert code == 0
    report = payloads[0]
    assert report["all_correct"] and report["round_bound_ok"]


def test_connect_without_server_exits_two(tmp_path, capsys):
    lonely = tmp_path / "lonely.set"
    write_set_file(lonely, [b"\x01" * 8], 8)
    code, _ = run_main(
        ["connect", "--peer", "127.0.0.1:1", "--set", str(lonely)], capsys)
    assert code == 2


def start_server(set_path, *extra):
    proc = subprocess.Popen(
        [sys.executable, "-m", "rangesync", "serve", "--listen", "127.0.0.1:0",
         "--set", str(set_path), "--once", *extra],
        stdout=subprocess.PIPE, stderr=subprocess.PIPE, text=True)
    line = proc.stdout.readline()
    return proc, json.loads(line)["listening"]


def test_serve_and_connect_reconcile_files(tmp_path):
    gen = subprocess.run(
        [sys.executable, "-m", "rangesync", "gen", "--kind", "random",
         "--n", "50", "--overlap", "0.5", "--seed", "3", "--item-width", "8",
         "--out0", str(tmp_path / "client.set"), "--out1", str(tmp_path / "server.set")],
        capture_output=True, text=True)
    assert gen.returncode == 0

    _, items_client = read_set_file(tmp_path / "client.set")
    _, items_server = read_set_file(tmp_path / "server.set")
    union = sorted(set(items_client) | set(items_server))

    proc, addr = start_server(tmp_path / "server.set")
    try:
        connect = subprocess.run(
            [sys.executable, "-m", "rangesync", "connect", "--peer", addr,
             "--set", str(tmp_path / "client.set")],
            capture_output=True, text=True, timeout=60)
        assert connect.returncode == 0, connect.stderr
        client_stats = json.loads(connect.stdout.strip().splitlines()[-1])
        out, _ = proc.communicate(timeout=60)
        server_stats = json.loads(out.strip().splitlines()[-1])
    finally:
        if proc.poll() is None:
            proc.kill()
            proc.communicate()
    assert proc.returncode == 0

    assert read_set_file(tmp_path / "client.set")[1] == union
    assert read_set_file(tmp_path / "server.set")[1] == union
    assert client_stats["set_size"] == server_stats["set_size"] == len(union)
    assert client_stats["messages_total"] == server_stats["messages_total"]
    assert client_stats["bytes_from_initiator"] == server_stats["bytes_from_initiator"]
    assert client_stats["bytes_from_responder"] == server_stats["bytes_from_responder"]


def test_serve_equal_sets_reports_nothing_transmitted(tmp_path):
    shared = sorted({bytes([7, i]) for i in range(12)})
    write_set_file(tmp_path / "one.set", shared, 2)
    write_set_file(tmp_path / "two.set", shared, 2)
    proc, addr = start_server(tmp_path / "one.set")
    try:
        connect = subprocess.run(
            [sys.executable, "-m", "rangesync", "connect", "--peer", addr,
             "--set", str(tmp_path / "two.set")],
            capture_output=True, text=True, timeout=60)
        assert connect.returncode == 0, connect.stderr
        stats = json.loads(connect.stdout.strip().splitlines()[-1])
        proc.communicate(timeout=60)
    finally:
        if proc.poll() is None:
            proc.kill()
            proc.communicate()
    assert stats["items_transmitted"] == 0
    assert stats["messages_total"] == 2
