"""``rhibe`` command-line key authority.

Exit codes: 0 ok, 2 usage, 3 revoked or identity/epoch mismatch,
4 integrity failure, 5 state violation, 6 missing artifact.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import codec
from .errors import MissingArtifact, RhibeError
from .identity import parse_id
from .workspace import SCHEMES, Workspace

EXIT_CODES = {
    "usage": 2,
    "revoked": 3,
    "mismatch": 3,
    "integrity": 4,
    "state-violation": 5,
    "missing-artifact": 6,
}

MUTATING = {"genkey", "updatekey", "derivekey", "revoke", "encrypt", "report-sizes"}


def _depths(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated depths, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rhibe", description="Revocable HIBE key authority")
    parser.add_argument("--workspace", "-w", type=Path, default=Path("."), help="workspace directory")
    parser.add_argument("--json", action="store_true", help="emit a diagnostic JSON rendering")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("setup", help="initialize a workspace")
    p.add_argument("--scheme", choices=SCHEMES, required=True)
    p.add_argument("-N", "--users", dest="n", type=int, default=4, help="maximum children per node")
    p.add_argument("-L", "--depth", dest="max_depth", type=int, default=3, help="maximum identity depth")
    p.add_argument("--lambda", dest="lam", type=int, default=128, help="security parameter (8..128)")
    p.add_argument("--seed", type=int, default=None, help="deterministic mode (insecure, for testing)")

    p = sub.add_parser("genkey", help="issue a private key")
    p.add_argument("--id", required=True)

    p = sub.add_parser("updatekey", help="issue a node's update key for an epoch")
    p.add_argument("--id", default="", help="issuing node (empty for the root)")
    p.add_argument("--epoch", type=int, required=True)

    p = sub.add_parser("derivekey", help="derive a decryption key")
    p.add_argument("--id", required=True)
    p.add_argument("--epoch", type=int, required=True)

    p = sub.add_parser("revoke", help="revoke an identity from an epoch on")
    p.add_argument("--id", required=True)
    p.add_argument("--epoch", type=int, required=True)

    p = sub.add_parser("encrypt", help="encrypt bytes to an identity and epoch")
    p.add_argument("--id", required=True)
    p.add_argument("--epoch", type=int, required=True)
    p.add_argument("--in", dest="infile", type=Path, required=True)
    p.add_argument("--out", type=Path, required=True)

    p = sub.add_parser("decrypt", help="decrypt with a decryption key file")
    p.add_argument("--dk", type=Path, required=True)
    p.add_argument("--ct", type=Path, required=True)
    p.add_argument("--out", type=Path, default=None, help="defaults to stdout")

    p = sub.add_parser("report-sizes", help="element counts of every artifact by depth")
    p.add_argument("--depths", type=_depths, default=None, help="e.g. 1,2,3 (default: 1..L)")
    p.add_argument("--csv", action="store_true")

    p = sub.add_parser("inspect", help="print any workspace file as JSON")
    p.add_argument("file", type=Path)
    return parser


def _emit(args, text: str, payload: dict):
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print(text)


def _read(path: Path) -> bytes:
    if not path.exists():
        raise MissingArtifact(f"missing file: {path}")
    return path.read_bytes()


def _run(args) -> int:
    if args.command == "setup":
        ws = Workspace.create(args.workspace, args.scheme, args.n, args.max_depth, args.lam, args.seed)
        _emit(args, f"initialized {args.scheme} workspace at {ws.path}", dict(ws.config))
        return 0

    ws = Workspace(args.workspace)
    if args.command in MUTATING:
        with ws.lock():
            return _dispatch(ws, args)
    return _dispatch(ws, args)


def _dispatch(ws: Workspace, args) -> int:
    cmd = args.command
    if cmd == "genkey":
        path = ws.genkey(parse_id(args.id))
        _emit(args, str(path), {"private_key": str(path)})
    elif cmd == "updatekey":
        path = ws.updatekey(parse_id(args.id), args.epoch)
        _emit(args, str(path), {"update_key": str(path)})
    elif cmd == "derivekey":
        path = ws.derivekey(parse_id(args.id), args.epoch)
        _emit(args, str(path), {"decryption_key": str(path)})
    elif cmd == "revoke":
        path = ws.revoke(parse_id(args.id), args.epoch)
        _emit(args, f"revoked {args.id} from epoch {args.epoch}", {"revocation_list": str(path)})
    elif cmd == "encrypt":
        data = ws.encrypt(parse_id(args.id), args.epoch, _read(args.infile))
        args.out.write_bytes(data)
        _emit(args, str(args.out), {"ciphertext": str(args.out), "bytes": len(data)})
    elif cmd == "decrypt":
        plain = ws.decrypt(_read(args.dk), _read(args.ct))
        if args.out is None:
            sys.stdout.buffer.write(plain)
            sys.stdout.flush()
        else:
            args.out.write_bytes(plain)
            _emit(args, str(args.out), {"plaintext": str(args.out), "bytes": len(plain)})
    elif cmd == "report-sizes":
        depths = args.depths or list(range(1, ws.params.max_depth + 1))
        rows = [row.as_dict() for row in ws.report_sizes(depths)]
        if args.json:
            print(json.dumps(rows, indent=2))
        elif args.csv:
            buf = io.StringIO()
            writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
            writer.writeheader()
            writer.writerows(rows)
            sys.stdout.write(buf.getvalue())
        else:
            print(f"{'scheme':6} {'artifact':8} {'depth':>5} {'elements':>8} {'expected':>8} "
                  f"{'G1':>5} {'G2':>5} {'G3':>5} {'bytes':>8}")
            for r in rows:
                depth = "-" if r["depth"] is None else r["depth"]
                print(f"{r['scheme']:6} {r['artifact']:8} {depth:>5} {r['elements']:>8} {r['expected']:>8} "
                      f"{r['G1']:>5} {r['G2']:>5} {r['G3']:>5} {r['bytes']:>8}")
        if not all(r["match"] for r in rows):
            return EXIT_CODES["integrity"]
    elif cmd == "inspect":
        group = ws.params.group
        record = codec.load_record(_read(args.file), group)
        print(json.dumps({"scheme": record.scheme, "kind": record.kind, "body": codec.to_json(record.obj)},
                         indent=2))
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _run(args)
    except RhibeError as exc:
        print(f"rhibe: {exc.kind}: {exc}", file=sys.stderr)
        return EXIT_CODES[exc.kind]


if __name__ == "__main__":
    sys.exit(main())
