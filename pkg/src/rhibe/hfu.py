"""Revocable HIBE with history-free updates.

Private keys are two G_1 elements regardless of depth. A node builds its
update key from its own decryption key for the epoch: the decryption key,
with ``g_2^(alpha^(N+1) beta_node)`` divided out of ``D_0``, becomes the
partial decryption key that children complete with a single BGW unmasking.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import MismatchError
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
    check_update_epoch,
    level_components,
    level_update,
    rhibe_decrypt,
    rhibe_encrypt,
    rhibe_revoke,
    rhibe_setup,
)

hfu_setup = rhibe_setup
hfu_encrypt = rhibe_encrypt
hfu_decrypt = rhibe_decrypt
hfu_revoke = rhibe_revoke


@dataclass(frozen=True)
class HfuPrivateKey:
    hid: HierId
    index: int
    k0: GroupElement
    k1: GroupElement

    def element_count(self) -> int:
        return 2


@dataclass(frozen=True)
class HfuUpdateKey:
    epoch: int
    p0: GroupElement
    ps: tuple[GroupElement, ...]
    p_time: GroupElement
    level: LevelUpdate

    @property
    def node(self) -> HierId:
        return self.level.node

    def element_count(self) -> int:
        return len(self.ps) + 2 + 3


def hfu_genkey(hid: HierId, st_parent: NodeState, params: SystemParams, rng=None) -> HfuPrivateKey:
    check_child(hid, st_parent, params)
    group = params.group
    st_parent.ensure_secrets(group, rng)
    d = st_parent.assign_index(hid, params.n)
    k_be = pkbe_genkey(d, st_parent.gamma, params.pkbe).k
    r = group.random_scalar(rng)
    ci = params.hibe.cid(hid)[-1]
    return HfuPrivateKey(hid, d, k_be * F_eval(params.hibe, 1, len(hid), ci) ** -r, group.generator(1) ** -r)


def hfu_updatekey(epoch: int, rl: RevocationList, parent_dk: HibeKey | int, st: NodeState,
                  params: SystemParams, rng=None) -> HfuUpdateKey:
    """``parent_dk`` is the node's own decryption key for ``epoch``, or the master key at the root."""
    group = params.group
    node = st.node
    if not node:
        if not isinstance(parent_dk, int) or params.g2_alpha_n1 != group.generator(2) ** pow(
            parent_dk, params.n + 1, group.order
        ):
            raise MismatchError("the root update key must be issued with the master key")
    else:
        if not isinstance(parent_dk, HibeKey):
            raise MismatchError(f"a decryption key for {node!r} is required")
        if parent_dk.time.epoch != epoch:
            raise MismatchError(f"decryption key is for epoch {parent_dk.time.epoch}, not {epoch}")
        if parent_dk.cid != params.hibe.cid(node):
            raise MismatchError(f"decryption key does not belong to {node!r}")
    check_update_epoch(st, epoch)
    st.ensure_secrets(group, rng)

    if not node:
        p0, ps, p_time = group.identity(2), (), group.identity(2)
    else:
        p0 = parent_dk.d0 * params.g2_alpha_n1 ** -st.beta
        ps, p_time = parent_dk.ds, parent_dk.d_time
    lu = level_update(epoch, rl, st, params, rng)
    return HfuUpdateKey(epoch, p0, ps, p_time, lu)


def hfu_temporal_key(sk: HfuPrivateKey, uk: HfuUpdateKey, params: SystemParams) -> HibeKey | None:
    if uk.node != sk.hid[:-1] or len(uk.ps) != len(sk.hid) - 1:
        raise MismatchError(f"update key of {uk.node!r} cannot serve {sk.hid!r}")
    if sk.index not in uk.level.receivers:
        return None
    a0, a1, a2 = level_components(sk.index, sk.k0, sk.k1, uk.level, params)
    return HibeKey(
        params.hibe.cid(sk.hid),
        params.time(uk.epoch),
        uk.p0 * a0,
        uk.ps + (a1,),
        uk.p_time * a2,
    )


def hfu_derivekey(sk: HfuPrivateKey, uk: HfuUpdateKey, params: SystemParams, rng=None) -> HibeKey | None:
    tdk = hfu_temporal_key(sk, uk, params)
    if tdk is None:
        return None
    return hibe_randkey(tdk, params.hibe, rng)
