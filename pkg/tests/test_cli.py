import csv
import io
import json

import pytest

from lifecycle import SCRIPT, cli_lifecycle
from rhibe.cli import main


def run(ws, *args):
    return main(["-w", str(ws), *args])


@pytest.fixture
def ws(tmp_path):
    path = tmp_path / "ws"
    assert run(path, "setup", "--scheme", "hpu", "-N", "4", "-L", "3", "--lambda", "8", "--seed", "1") == 0
    return path


def files(root):
    return {p.relative_to(root).as_posix(): p.read_bytes() for p in sorted(root.rglob("*")) if p.is_file()}


def test_setup_layout_and_reinit(ws):
    assert (ws / "params.bin").exists() and (ws / "root" / "master.key").exists()
    assert json.loads((ws / "workspace.json").read_text())["scheme"] == "hpu"
    assert run(ws, "setup", "--scheme", "hpu") == 5


def test_bad_arguments(tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["setup", "--scheme", "nope"])
    assert exc.value.code == 2
    assert run(tmp_path / "x", "setup", "--scheme", "hfu", "--lambda", "4") == 2
    assert run(tmp_path / "missing", "genkey", "--id", "a") == 6


@pytest.mark.parametrize("scheme", ["hpu", "hfu"])
def test_encrypt_decrypt_flow(tmp_path, scheme, capsysbinary):
    ws = tmp_path / scheme
    assert run(ws, "setup", "--scheme", scheme, "--lambda", "8") == 0
    assert run(ws, "genkey", "--id", "a") == 0
    assert run(ws, "genkey", "--id", "a/b") == 0
    assert run(ws, "updatekey", "--epoch", "1") == 0
    assert run(ws, "updatekey", "--id", "a", "--epoch", "1") == 0
    assert run(ws, "derivekey", "--id", "a/b", "--epoch", "1") == 0
    msg = tmp_path / "msg.txt"
    msg.write_bytes(b"hello subtree")
    ct = tmp_path / "msg.ct"
    assert run(ws, "encrypt", "--id", "a/b", "--epoch", "1", "--in", str(msg), "--out", str(ct)) == 0
    capsysbinary.readouterr()
    dk = ws / "dkeys" / "a%2Fb@1.dk"
    assert run(ws, "decrypt", "--dk", str(dk), "--ct", str(ct)) == 0
    assert capsysbinary.readouterr().out == b"hello subtree"

    other = tmp_path / "other.ct"
    assert run(ws, "encrypt", "--id", "a/b", "--epoch", "2", "--in", str(msg), "--out", str(other)) == 0
    assert run(ws, "decrypt", "--dk", str(dk), "--ct", str(other)) == 3
    tampered = bytearray(ct.read_bytes())
    tampered[-1] ^= 1
    ct.write_bytes(bytes(tampered))
    assert run(ws, "decrypt", "--dk", str(dk), "--ct", str(ct)) == 4
    assert run(ws, "decrypt", "--dk", str(dk), "--ct", str(tmp_path / "none")) == 6


def test_hpu_genkey_needs_parent(ws):
    assert run(ws, "genkey", "--id", "a/b") == 6
    assert run(ws, "genkey", "--id", "a") == 0
    assert run(ws, "genkey", "--id", "a") == 5
    assert run(ws, "genkey", "--id", "a/b/c/d") == 2


def test_index_exhaustion(ws):
    for i in range(4):
        assert run(ws, "genkey", "--id", f"u{i}") == 0
    assert run(ws, "genkey", "--id", "u4") == 5


def test_revocation_paths(ws):
    assert run(ws, "genkey", "--id", "a") == 0
    assert run(ws, "revoke", "--id", "zz", "--epoch", "1") == 5
    assert run(ws, "updatekey", "--epoch", "1") == 0
    assert run(ws, "revoke", "--id", "a", "--epoch", "1") == 5
    assert run(ws, "revoke", "--id", "a", "--epoch", "2") == 0
    assert run(ws, "updatekey", "--epoch", "2") == 0
    assert run(ws, "derivekey", "--id", "a", "--epoch", "1") == 0
    assert run(ws, "derivekey", "--id", "a", "--epoch", "2") == 3
    assert not (ws / "dkeys" / "a@2.dk").exists()
    assert run(ws, "updatekey", "--epoch", "1") == 5
    assert run(ws, "derivekey", "--id", "a", "--epoch", "5") == 6


def test_hfu_revoked_node_cannot_issue(tmp_path):
    ws = tmp_path / "w"
    assert run(ws, "setup", "--scheme", "hfu", "--lambda", "8") == 0
    assert run(ws, "genkey", "--id", "a") == 0
    assert run(ws, "genkey", "--id", "a/b") == 0
    assert run(ws, "revoke", "--id", "a", "--epoch", "0") == 0
    assert run(ws, "updatekey", "--epoch", "0") == 0
    assert run(ws, "updatekey", "--id", "a", "--epoch", "0") == 3
    assert run(ws, "derivekey", "--id", "a/b", "--epoch", "0") == 6


def test_report_sizes(ws, capsys):
    capsys.readouterr()
    assert run(ws, "report-sizes", "--csv") == 0
    first = capsys.readouterr().out
    rows = list(csv.DictReader(io.StringIO(first)))
    assert len(rows) == 1 + 4 * 3
    assert all(r["match"] == "True" for r in rows)
    assert rows[0]["artifact"] == "PP" and rows[0]["elements"] == "128"
    sk3 = next(r for r in rows if r["artifact"] == "SK" and r["depth"] == "3")
    assert sk3["elements"] == "12"
    assert run(ws, "report-sizes", "--csv") == 0
    assert capsys.readouterr().out == first
    assert run(ws, "--json", "report-sizes", "--depths", "2") == 0
    data = json.loads(capsys.readouterr().out)
    assert {r["artifact"] for r in data} == {"PP", "SK", "UK", "DK", "CT"}
    assert run(ws, "report-sizes", "--depths", "4") == 2


def test_inspect(ws, capsys):
    capsys.readouterr()
    assert run(ws, "inspect", str(ws / "params.bin")) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["kind"] == 1
    junk = ws / "junk.bin"
    junk.write_bytes(b"garbage")
    assert run(ws, "inspect", str(junk)) == 4


@pytest.mark.parametrize("scheme", ["hpu", "hfu"])
def test_seeded_runs_are_byte_identical(tmp_path, scheme, capsys):
    one, two = tmp_path / "one", tmp_path / "two"
    codes = cli_lifecycle(main, one, scheme)
    assert cli_lifecycle(main, two, scheme) == codes
    assert set(codes) <= {0, 3, 6}
    assert files(one) == files(two)
    cli_lifecycle(main, tmp_path / "three", scheme, seed=8)
    assert files(one) != files(tmp_path / "three")
