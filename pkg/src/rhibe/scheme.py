"""Pieces shared by both revocable HIBE schemes.

Both schemes have the same setup, per-node state, revocation list,
ciphertext, and the same per-level update-key element (a BGW header over
the non-revoked child indices with the time function folded in).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DepthError, DuplicateChild, EpochOrderError, IndexExhausted, PrefixMismatch, UnknownIdentity
from .hibe import HibeHeader, HibeKey, HibeParams, H_eval, hibe_encaps, hibe_pairing_product, hibe_setup
from .identity import ROOT, HierId, TimePeriod, encode_time, make_id
from .mlgroup import ExponentGroup, GroupElement, group_setup, pair
from .pkbe import PkbeParams, pkbe_encaps, pkbe_setup, pkbe_unmask


@dataclass(frozen=True)
class SystemParams:
    group: ExponentGroup
    hibe: HibeParams
    pkbe: PkbeParams
    g2_alpha_n1: GroupElement
    g2_beta_root: GroupElement
    omega: GroupElement

    @property
    def n(self) -> int:
        return self.pkbe.n

    @property
    def max_depth(self) -> int:
        return self.hibe.max_depth

    def time(self, epoch: int) -> TimePeriod:
        return encode_time(epoch, self.hibe.time_bits)

    def element_count(self) -> int:
        return self.hibe.element_count() + self.pkbe.element_count() + 3


@dataclass
class NodeState:
    """Per-node secrets and child index assignments (``ST_ID``)."""

    node: HierId
    beta: int | None = None
    gamma: int | None = None
    children: dict[HierId, int] = field(default_factory=dict)
    last_update_epoch: int | None = None

    def ensure_secrets(self, group: ExponentGroup, rng=None):
        if self.beta is None:
            self.beta = group.random_scalar(rng)
            self.gamma = group.random_scalar(rng)

    def assign_index(self, child: HierId, n: int) -> int:
        if child in self.children:
            raise DuplicateChild(f"{child!r} already has index {self.children[child]}")
        used = set(self.children.values())
        for d in range(1, n + 1):
            if d not in used:
                self.children[child] = d
                return d
        raise IndexExhausted(f"all {n} indices under {self.node!r} are assigned")


@dataclass
class RevocationList:
    node: HierId
    entries: list[tuple[HierId, int]] = field(default_factory=list)

    def revoked_at(self, epoch: int) -> set[HierId]:
        return {child for child, t in self.entries if t <= epoch}


@dataclass(frozen=True)
class LevelUpdate:
    """One node's contribution to an update key: ``(SI, U_0, U_1, U_2)``."""

    node: HierId
    receivers: frozenset[int]
    u0: GroupElement
    u1: GroupElement
    u2: GroupElement

    def elements(self) -> list[GroupElement]:
        return [self.u0, self.u1, self.u2]


@dataclass(frozen=True)
class Ciphertext:
    c: GroupElement
    header: HibeHeader

    def element_count(self) -> int:
        return 1 + self.header.element_count()


def rhibe_setup(lam: int, n: int, max_depth: int, rng=None):
    """Returns ``(alpha, RL_root, ST_root, params)``.

    A single ``alpha`` serves as both the HIBE and the broadcast master
    exponent.
    """
    group = group_setup(lam)
    (alpha, gamma), pkbe, _ = pkbe_setup(group, n, rng)
    _, hibe = hibe_setup(group, max_depth, rng, alpha=alpha)
    beta = group.random_scalar(rng)
    g2_alpha_n1 = pkbe.big_gamma
    params = SystemParams(
        group,
        hibe,
        pkbe,
        g2_alpha_n1,
        group.generator(2) ** beta,
        pair(g2_alpha_n1, group.generator(1) ** beta),
    )
    return alpha, RevocationList(ROOT), NodeState(ROOT, beta, gamma), params


def check_child(hid: HierId, parent: NodeState, params: SystemParams):
    make_id(*hid)
    if not 1 <= len(hid) <= params.max_depth:
        raise DepthError(f"identity depth {len(hid)} outside [1, {params.max_depth}]")
    if hid[:-1] != parent.node:
        raise PrefixMismatch(f"{parent.node!r} is not the parent of {hid!r}")
    if hid in parent.children:
        raise DuplicateChild(f"{hid!r} already has index {parent.children[hid]}")


def non_revoked_indices(rl: RevocationList, st: NodeState, epoch: int, n: int) -> frozenset[int]:
    revoked = {st.children[c] for c in rl.revoked_at(epoch) if c in st.children}
    return frozenset(d for d in range(1, n + 1) if d not in revoked)


def check_update_epoch(st: NodeState, epoch: int):
    if st.last_update_epoch is not None and epoch < st.last_update_epoch:
        raise EpochOrderError(
            f"update key for epoch {epoch} requested after epoch {st.last_update_epoch} at {st.node!r}"
        )


def level_update(epoch: int, rl: RevocationList, st: NodeState, params: SystemParams, rng=None) -> LevelUpdate:
    if rl.node != st.node:
        raise PrefixMismatch(f"revocation list of {rl.node!r} paired with state of {st.node!r}")
    check_update_epoch(st, epoch)
    group = params.group
    st.ensure_secrets(group, rng)
    t = params.time(epoch)
    receivers = non_revoked_indices(rl, st, epoch, params.n)
    y = group.generator(1) ** st.gamma
    header, _ = pkbe_encaps(receivers, st.beta, y, params.pkbe)
    r = group.random_scalar(rng)
    st.last_update_epoch = epoch
    return LevelUpdate(
        st.node,
        receivers,
        header.e0,
        header.e1 * H_eval(params.hibe, 1, t) ** r,
        group.generator(1) ** -r,
    )


def level_components(d: int, k0: GroupElement, k1: GroupElement, lu: LevelUpdate, params: SystemParams):
    """``(A_0, A_1, A_2)`` for a child with index ``d`` under update ``lu``."""
    a0 = pkbe_unmask(params.pkbe, d, lu.receivers, lu.u0, lu.u1, k0)
    a1 = pair(lu.u0, k1)
    a2 = pair(params.pkbe.x(d), lu.u2)
    return a0, a1, a2


def rhibe_encrypt(hid: HierId, epoch: int, m: GroupElement, params: SystemParams, rng=None) -> Ciphertext:
    if not 1 <= len(hid) <= params.max_depth:
        raise DepthError(f"identity depth {len(hid)} outside [1, {params.max_depth}]")
    s = params.group.random_scalar(rng)
    header, _ = hibe_encaps(hid, params.time(epoch), s, params.hibe)
    return Ciphertext(params.omega ** s * m, header)


def rhibe_decrypt(ct: Ciphertext, dk: HibeKey, params: SystemParams | None = None):
    """The message, or ``None`` if ``dk`` is for another identity or epoch."""
    if ct.header.cid != dk.cid or ct.header.time != dk.time:
        return None
    return ct.c / hibe_pairing_product(ct.header, dk)


def rhibe_revoke(hid: HierId, epoch: int, rl: RevocationList, st: NodeState):
    if rl.node != st.node:
        raise PrefixMismatch(f"revocation list of {rl.node!r} paired with state of {st.node!r}")
    if hid not in st.children:
        raise UnknownIdentity(f"no private key was issued to {hid!r} by {st.node!r}")
    if st.last_update_epoch is not None and epoch <= st.last_update_epoch:
        raise EpochOrderError(
            f"cannot revoke at epoch {epoch}: {st.node!r} already issued an update key for epoch {st.last_update_epoch}"
        )
    rl.entries.append((hid, epoch))
    return rl


def random_message(params: SystemParams, rng=None) -> GroupElement:
    return params.group.random_element(3, rng)
