"""On-disk key authority workspace.

Layout::

    workspace.json              scheme, N, L, lambda, seed, RNG counter
    params.bin                  public parameters
    root/master.key             master key (root credentials)
    nodes/<node>/state.bin      beta, gamma, child index assignments
    nodes/<node>/rl.bin         revocation list
    keys/<id>.sk                private keys
    updates/<node>@<epoch>.uk   update keys
    dkeys/<id>@<epoch>.dk       decryption keys

Node and identity names are the percent-escaped canonical ``a/b/c`` form,
escaped once more so each maps to a single path component.
"""

from __future__ import annotations

import contextlib
import fcntl
import json
import os
import random
from pathlib import Path
from urllib.parse import quote

from . import codec
from .errors import MismatchError, MissingArtifact, Revoked, StateViolation, UsageError
from .hfu import HfuPrivateKey, HfuUpdateKey, hfu_derivekey, hfu_genkey, hfu_updatekey
from .hibe import HibeKey
from .hpu import HpuPrivateKey, HpuUpdateKey, hpu_derivekey, hpu_genkey, hpu_updatekey
from .identity import ROOT, HierId, format_id
from .kemdem import decrypt_bytes, encrypt_bytes
from .mlgroup import default_rng, group_setup
from .scheme import NodeState, RevocationList, SystemParams, rhibe_revoke, rhibe_setup
from .sizes import size_report

SCHEMES = ("hpu", "hfu")
CONFIG = "workspace.json"
ROOT_SLUG = "@root"


def slug(hid: HierId) -> str:
    return quote(format_id(hid), safe="") if hid else ROOT_SLUG


def _write_atomic(path: Path, data: bytes):
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes(data)
    os.replace(tmp, path)


class Workspace:
    def __init__(self, path):
        self.path = Path(path)
        config_path = self.path / CONFIG
        if not config_path.exists():
            raise MissingArtifact(f"{self.path} is not an initialized workspace")
        self.config = json.loads(config_path.read_text())
        self.scheme = self.config["scheme"]
        self._params: SystemParams | None = None

    @classmethod
    def create(cls, path, scheme: str, n: int, max_depth: int, lam: int, seed: int | None = None) -> Workspace:
        path = Path(path)
        if scheme not in SCHEMES:
            raise UsageError(f"scheme must be one of {SCHEMES}, got {scheme!r}")
        if path.exists() and any(path.iterdir()):
            raise StateViolation(f"{path} is not empty")
        group_setup(lam)
        rng = random.Random(f"{seed}|setup") if seed is not None else default_rng()
        alpha, rl, st, params = rhibe_setup(lam, n, max_depth, rng)
        path.mkdir(parents=True, exist_ok=True)
        config = {"format": 1, "scheme": scheme, "n": n, "max_depth": max_depth, "lambda": lam,
                  "seed": seed, "rng_counter": 0}
        _write_atomic(path / "params.bin", codec.dumps(params, scheme))
        _write_atomic(path / "root" / "master.key", codec.dumps(codec.MasterKey(alpha), scheme, params.group))
        ws_files = {
            path / "nodes" / ROOT_SLUG / "state.bin": st,
            path / "nodes" / ROOT_SLUG / "rl.bin": rl,
        }
        for p, obj in ws_files.items():
            _write_atomic(p, codec.dumps(obj, scheme, params.group))
        (path / CONFIG).write_text(json.dumps(config, indent=2) + "\n")
        return cls(path)

    # -- plumbing ---------------------------------------------------------

    @property
    def params(self) -> SystemParams:
        if self._params is None:
            self._params = self._load(self.path / "params.bin", SystemParams, "public parameters")
        return self._params

    @contextlib.contextmanager
    def lock(self):
        with open(self.path / ".lock", "w") as fh:
            fcntl.flock(fh, fcntl.LOCK_EX)
            try:
                yield
            finally:
                fcntl.flock(fh, fcntl.LOCK_UN)

    def rng(self, label: str):
        """Per-command randomness: seeded workspaces replay byte-identically."""
        if self.config.get("seed") is None:
            return default_rng()
        self.config["rng_counter"] += 1
        (self.path / CONFIG).write_text(json.dumps(self.config, indent=2) + "\n")
        return random.Random(f"{self.config['seed']}|{self.config['rng_counter']}|{label}")

    def _load(self, path: Path, expected_type, what: str):
        if not path.exists():
            raise MissingArtifact(f"missing {what}: {path}")
        group = None if expected_type is SystemParams else self.params.group
        record = codec.load_record(path.read_bytes(), group)
        if not isinstance(record.obj, expected_type):
            raise codec.IntegrityError(f"{path} holds a {type(record.obj).__name__}, not {expected_type.__name__}")
        if record.scheme not in (None, self.scheme):
            raise codec.IntegrityError(f"{path} belongs to scheme {record.scheme}, workspace is {self.scheme}")
        return record.obj

    def _save(self, path: Path, obj):
        _write_atomic(path, codec.dumps(obj, self.scheme, self.params.group))

    def master_key(self) -> int:
        return self._load(self.path / "root" / "master.key", codec.MasterKey, "master key").alpha

    def state_path(self, node: HierId) -> Path:
        return self.path / "nodes" / slug(node) / "state.bin"

    def rl_path(self, node: HierId) -> Path:
        return self.path / "nodes" / slug(node) / "rl.bin"

    def sk_path(self, hid: HierId) -> Path:
        return self.path / "keys" / f"{slug(hid)}.sk"

    def uk_path(self, node: HierId, epoch: int) -> Path:
        return self.path / "updates" / f"{slug(node)}@{epoch}.uk"

    def dk_path(self, hid: HierId, epoch: int) -> Path:
        return self.path / "dkeys" / f"{slug(hid)}@{epoch}.dk"

    def _check_depth(self, hid: HierId):
        if not 1 <= len(hid) <= self.params.max_depth:
            raise UsageError(f"identity depth {len(hid)} outside [1, {self.params.max_depth}]")

    def node_state(self, node: HierId) -> NodeState:
        path = self.state_path(node)
        if path.exists():
            return self._load(path, NodeState, "node state")
        if node and node in self.node_state(node[:-1]).children:
            return NodeState(node)
        raise MissingArtifact(f"no private key has been issued to {format_id(node)!r}")

    def revocation_list(self, node: HierId) -> RevocationList:
        path = self.rl_path(node)
        if path.exists():
            return self._load(path, RevocationList, "revocation list")
        self.node_state(node)
        return RevocationList(node)

    def private_key(self, hid: HierId):
        kind = HpuPrivateKey if self.scheme == "hpu" else HfuPrivateKey
        return self._load(self.sk_path(hid), kind, f"private key of {format_id(hid)!r}")

    def update_key(self, node: HierId, epoch: int):
        kind = HpuUpdateKey if self.scheme == "hpu" else HfuUpdateKey
        return self._load(self.uk_path(node, epoch), kind,
                          f"update key of {format_id(node) or 'root'!r} for epoch {epoch}")

    # -- commands ---------------------------------------------------------

    def genkey(self, hid: HierId) -> Path:
        self._check_depth(hid)
        params = self.params
        st = self.node_state(hid[:-1])
        rng = self.rng(f"genkey|{format_id(hid)}")
        if self.scheme == "hpu":
            sk_parent = self.private_key(hid[:-1]) if len(hid) >= 2 else None
            sk = hpu_genkey(hid, sk_parent, st, params, rng)
        else:
            sk = hfu_genkey(hid, st, params, rng)
        self._save(self.sk_path(hid), sk)
        self._save(self.state_path(st.node), st)
        return self.sk_path(hid)

    def _node_dk(self, node: HierId, epoch: int, rng) -> HibeKey:
        path = self.dk_path(node, epoch)
        if path.exists():
            return self._load(path, HibeKey, "decryption key")
        dk = self._derive(node, epoch, rng)
        self._save(path, dk)
        return dk

    def _derive(self, hid: HierId, epoch: int, rng) -> HibeKey:
        sk = self.private_key(hid)
        uk = self.update_key(hid[:-1], epoch)
        derive = hpu_derivekey if self.scheme == "hpu" else hfu_derivekey
        dk = derive(sk, uk, self.params, rng)
        if dk is None:
            raise Revoked(f"{format_id(hid)!r} is revoked at epoch {epoch}")
        return dk

    def updatekey(self, node: HierId, epoch: int) -> Path:
        params = self.params
        params.time(epoch)
        st = self.node_state(node)
        rl = self.revocation_list(node)
        rng = self.rng(f"updatekey|{format_id(node)}|{epoch}")
        if self.scheme == "hpu":
            uk_parent = self.update_key(node[:-1], epoch) if node else None
            uk = hpu_updatekey(epoch, rl, uk_parent, st, params, rng)
        else:
            parent_dk = self._node_dk(node, epoch, rng) if node else self.master_key()
            uk = hfu_updatekey(epoch, rl, parent_dk, st, params, rng)
        self._save(self.uk_path(node, epoch), uk)
        self._save(self.state_path(node), st)
        return self.uk_path(node, epoch)

    def derivekey(self, hid: HierId, epoch: int) -> Path:
        self._check_depth(hid)
        self.params.time(epoch)
        dk = self._derive(hid, epoch, self.rng(f"derivekey|{format_id(hid)}|{epoch}"))
        self._save(self.dk_path(hid, epoch), dk)
        return self.dk_path(hid, epoch)

    def revoke(self, hid: HierId, epoch: int) -> Path:
        self._check_depth(hid)
        self.params.time(epoch)
        st = self.node_state(hid[:-1])
        rl = self.revocation_list(hid[:-1])
        rhibe_revoke(hid, epoch, rl, st)
        self._save(self.rl_path(rl.node), rl)
        return self.rl_path(rl.node)

    def encrypt(self, hid: HierId, epoch: int, payload: bytes) -> bytes:
        self._check_depth(hid)
        hct = encrypt_bytes(hid, epoch, payload, self.params, self.rng(f"encrypt|{format_id(hid)}|{epoch}"))
        return codec.dumps(hct, self.scheme)

    def decrypt(self, dk_data: bytes, ct_data: bytes) -> bytes:
        group = self.params.group
        dk = codec.loads(dk_data, group)
        hct = codec.loads(ct_data, group)
        if not isinstance(dk, HibeKey) or not isinstance(hct, codec.HybridCiphertext):
            raise codec.IntegrityError("expected a decryption key and a hybrid ciphertext")
        out = decrypt_bytes(hct, dk, self.params)
        if out is None:
            raise MismatchError("decryption key does not match the ciphertext identity and epoch")
        return out

    def report_sizes(self, depths):
        return size_report(self.scheme, self.params, self.master_key(), self.node_state(ROOT), depths,
                           self.rng("report-sizes"))
