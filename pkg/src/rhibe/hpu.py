"""Revocable HIBE with history-preserving updates.

A private key at depth l carries one level key per ancestor level, and an
update key for a node at depth l-1 carries the level updates of every
ancestor for the same epoch. Deriving a decryption key multiplies the
per-level BGW unmaskings together; the ``R_{i,1}`` blinding terms planted at
key generation cancel the intermediate ``beta`` values so only the root's
``g_2^(alpha^(N+1) beta_root)`` survives.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import MismatchError, PrefixMismatch
from .hibe import F_eval, HibeKey, hibe_randkey
from .identity import HierId
from .mlgroup import GroupElement
from .pkbe import pkbe_genkey
from .scheme import (
    LevelUpdate,
    NodeState,
    RevocationList,
    SystemParams,
    check_child,
    level_components,
    level_update,
    rhibe_decrypt,
    rhibe_encrypt,
    rhibe_revoke,
    rhibe_setup,
)

hpu_setup = rhibe_setup
hpu_encrypt = rhibe_encrypt
hpu_decrypt = rhibe_decrypt
hpu_revoke = rhibe_revoke


@dataclass(frozen=True)
class LevelKey:
    index: int
    k0: GroupElement
    k1: GroupElement
    r0: GroupElement
    r1: GroupElement

    def elements(self) -> list[GroupElement]:
        return [self.k0, self.k1, self.r0, self.r1]


@dataclass(frozen=True)
class HpuPrivateKey:
    hid: HierId
    levels: tuple[LevelKey, ...]

    def element_count(self) -> int:
        return 4 * len(self.levels)


@dataclass(frozen=True)
class HpuUpdateKey:
    epoch: int
    levels: tuple[LevelUpdate, ...]

    @property
    def node(self) -> HierId:
        return self.levels[-1].node

    def element_count(self) -> int:
        return 3 * len(self.levels)


def hpu_genkey(hid: HierId, sk_parent: HpuPrivateKey | None, st_parent: NodeState,
               params: SystemParams, rng=None) -> HpuPrivateKey:
    """Issue a private key for ``hid``; ``st_parent`` gains the child's index."""
    check_child(hid, st_parent, params)
    depth = len(hid)
    parent_levels = sk_parent.levels if sk_parent is not None else ()
    if depth >= 2 and (sk_parent is None or sk_parent.hid != hid[:-1]):
        raise PrefixMismatch(f"a private key for {hid[:-1]!r} is required to issue {hid!r}")
    if len(parent_levels) != depth - 1:
        raise PrefixMismatch(f"parent key has {len(parent_levels)} levels, expected {depth - 1}")

    group = params.group
    g1, g2 = group.generator(1), group.generator(2)
    st_parent.ensure_secrets(group, rng)
    d = st_parent.assign_index(hid, params.n)

    levels = list(parent_levels)
    if depth >= 2:
        r2 = group.random_scalar(rng)
        prev = levels[-1]
        # g_2^(beta of the grandparent node): from PP for depth 2, else stored one level up
        base = params.g2_beta_root if depth == 2 else levels[-2].r0
        levels[-1] = LevelKey(
            prev.index,
            prev.k0 * g1 ** -r2,
            prev.k1,
            g2 ** st_parent.beta,
            params.g2_alpha_n1 ** st_parent.beta * base ** r2,
        )

    k_be = pkbe_genkey(d, st_parent.gamma, params.pkbe).k
    r1 = group.random_scalar(rng)
    ci = params.hibe.cid(hid)[-1]
    levels.append(LevelKey(
        d,
        k_be * F_eval(params.hibe, 1, depth, ci) ** -r1,
        g1 ** -r1,
        group.identity(2),
        group.identity(2),
    ))
    return HpuPrivateKey(hid, tuple(levels))


def hpu_updatekey(epoch: int, rl: RevocationList, uk_parent: HpuUpdateKey | None, st: NodeState,
                  params: SystemParams, rng=None) -> HpuUpdateKey:
    node = st.node
    inherited = uk_parent.levels if uk_parent is not None else ()
    if len(inherited) != len(node):
        raise MismatchError(f"update key of {node!r} needs {len(node)} ancestor levels, got {len(inherited)}")
    if uk_parent is not None and uk_parent.epoch != epoch:
        raise MismatchError(f"ancestor update key is for epoch {uk_parent.epoch}, not {epoch}")
    for i, lu in enumerate(inherited):
        if lu.node != node[:i]:
            raise MismatchError(f"ancestor update level {i} belongs to {lu.node!r}, not {node[:i]!r}")
    lu = level_update(epoch, rl, st, params, rng)
    return HpuUpdateKey(epoch, inherited + (lu,))


def hpu_temporal_key(sk: HpuPrivateKey, uk: HpuUpdateKey, params: SystemParams) -> HibeKey | None:
    """The decryption key before re-randomization, or ``None`` if any level is revoked."""
    depth = len(sk.levels)
    if len(uk.levels) != depth:
        raise MismatchError(f"update key has {len(uk.levels)} levels, private key has {depth}")
    for i, lu in enumerate(uk.levels):
        if lu.node != sk.hid[:i]:
            raise MismatchError(f"update level {i} belongs to {lu.node!r}, not {sk.hid[:i]!r}")
    if any(lk.index not in lu.receivers for lk, lu in zip(sk.levels, uk.levels)):
        return None

    group = params.group
    a0s, a1s, a2s = [], [], []
    for lk, lu in zip(sk.levels, uk.levels):
        a0, a1, a2 = level_components(lk.index, lk.k0, lk.k1, lu, params)
        a0s.append(a0)
        a1s.append(a1)
        a2s.append(a2)
    blinding = [lk.r1.inv() for lk in sk.levels[:-1]]
    return HibeKey(
        params.hibe.cid(sk.hid),
        params.time(uk.epoch),
        group.product(a0s + blinding, 2),
        tuple(a1s),
        group.product(a2s, 2),
    )


def hpu_derivekey(sk: HpuPrivateKey, uk: HpuUpdateKey, params: SystemParams, rng=None) -> HibeKey | None:
    tdk = hpu_temporal_key(sk, uk, params)
    if tdk is None:
        return None
    return hibe_randkey(tdk, params.hibe, rng)
