"""Element-count accounting for public parameters, keys and ciphertexts."""

from __future__ import annotations

import copy
from collections import Counter
from dataclasses import dataclass, field

from . import codec
from .errors import UsageError
from .hfu import HfuPrivateKey, HfuUpdateKey, hfu_decrypt, hfu_derivekey, hfu_encrypt, hfu_genkey, hfu_updatekey
from .hibe import HibeKey
from .hpu import HpuPrivateKey, HpuUpdateKey, hpu_decrypt, hpu_derivekey, hpu_encrypt, hpu_genkey, hpu_updatekey
from .identity import ROOT
from .mlgroup import GroupElement
from .scheme import Ciphertext, NodeState, RevocationList, SystemParams, random_message


def artifact_elements(obj) -> list[GroupElement]:
    if isinstance(obj, SystemParams):
        hp = obj.hibe
        out = []
        for base, pairs in (*hp.f, hp.h):
            out.append(base)
            out.extend(x for pair in pairs for x in pair)
        out.append(hp.big_lambda)
        out.extend(x for x in obj.pkbe.xs if x is not None)
        out += [obj.pkbe.big_gamma, obj.g2_alpha_n1, obj.g2_beta_root, obj.omega]
        return out
    if isinstance(obj, HpuPrivateKey):
        return [x for lk in obj.levels for x in lk.elements()]
    if isinstance(obj, HpuUpdateKey):
        return [x for lu in obj.levels for x in lu.elements()]
    if isinstance(obj, HfuPrivateKey):
        return [obj.k0, obj.k1]
    if isinstance(obj, HfuUpdateKey):
        return [obj.p0, *obj.ps, obj.p_time, *obj.level.elements()]
    if isinstance(obj, HibeKey):
        return obj.elements()
    if isinstance(obj, Ciphertext):
        return [obj.c, *obj.header.elements()]
    raise UsageError(f"no element accounting for {type(obj).__name__}")


def pp_formula(params: SystemParams) -> int:
    hp = params.hibe
    return hp.max_depth * (2 * hp.id_bits + 1) + (2 * hp.time_bits + 1) + 1 + 2 * params.n + 3


FORMULAS = {
    ("hpu", "SK"): lambda depth: 4 * depth,
    ("hpu", "UK"): lambda depth: 3 * depth,
    ("hfu", "SK"): lambda depth: 2,
    ("hfu", "UK"): lambda depth: depth + 4,
    ("hpu", "DK"): lambda depth: depth + 2,
    ("hfu", "DK"): lambda depth: depth + 2,
    ("hpu", "CT"): lambda depth: depth + 3,
    ("hfu", "CT"): lambda depth: depth + 3,
}


@dataclass
class SizeRow:
    scheme: str
    artifact: str
    depth: int | None
    elements: int
    expected: int
    by_level: dict[int, int] = field(default_factory=dict)
    nbytes: int = 0

    @property
    def matches(self) -> bool:
        return self.elements == self.expected

    def as_dict(self) -> dict:
        return {
            "scheme": self.scheme,
            "artifact": self.artifact,
            "depth": self.depth,
            "elements": self.elements,
            "expected": self.expected,
            "G1": self.by_level.get(1, 0),
            "G2": self.by_level.get(2, 0),
            "G3": self.by_level.get(3, 0),
            "bytes": self.nbytes,
            "match": self.matches,
        }


def _row(scheme: str, artifact: str, depth, obj, expected: int) -> SizeRow:
    elems = artifact_elements(obj)
    levels = Counter(x.level for x in elems)
    return SizeRow(scheme, artifact, depth, len(elems), expected, dict(sorted(levels.items())),
                   len(codec.dumps(obj, scheme)))


def size_report(scheme: str, params: SystemParams, alpha: int, root_state: NodeState, depths, rng=None,
                epoch: int = 0) -> list[SizeRow]:
    """Build one sample chain down to ``max(depths)`` and count every artifact along it.

    ``root_state`` is copied; the caller's state is never touched.
    """
    depths = sorted(set(depths))
    if not depths or depths[0] < 1 or depths[-1] > params.max_depth:
        raise UsageError(f"depths must lie in [1, {params.max_depth}], got {depths}")
    root = copy.deepcopy(root_state)
    root.children, root.last_update_epoch = {}, None

    rows = [_row(scheme, "PP", None, params, pp_formula(params))]
    states = {ROOT: root}
    sk = uk = dk = None
    for depth in range(1, depths[-1] + 1):
        hid = tuple(f"node{i}" for i in range(1, depth + 1))
        parent = states[hid[:-1]]
        rl = RevocationList(parent.node)
        if scheme == "hpu":
            uk = hpu_updatekey(epoch, rl, uk, parent, params, rng)
            sk = hpu_genkey(hid, sk, parent, params, rng)
            dk = hpu_derivekey(sk, uk, params, rng)
            encrypt, decrypt = hpu_encrypt, hpu_decrypt
        elif scheme == "hfu":
            uk = hfu_updatekey(epoch, rl, dk if dk is not None else alpha, parent, params, rng)
            sk = hfu_genkey(hid, parent, params, rng)
            dk = hfu_derivekey(sk, uk, params, rng)
            encrypt, decrypt = hfu_encrypt, hfu_decrypt
        else:
            raise UsageError(f"unknown scheme {scheme!r}")
        m = random_message(params, rng)
        ct = encrypt(hid, epoch, m, params, rng)
        if dk is None or decrypt(ct, dk, params) != m:
            raise AssertionError(f"sample chain failed to decrypt at depth {depth}")
        states[hid] = NodeState(hid)
        if depth in depths:
            for name, obj in (("SK", sk), ("UK", uk), ("DK", dk), ("CT", ct)):
                rows.append(_row(scheme, name, depth, obj, FORMULAS[scheme, name](depth)))
    return rows
