"""Boneh-Boyen style HIBE KEM whose keys and headers are bound to a time period.

Identity levels are hashed with ``encode_cid`` and each digest bit selects
one of two public elements (Waters-style). The time label is handled the
same way with its own vector ``h``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DepthError, PrefixMismatch, UsageError
from .identity import HierId, TimePeriod, bit_at, encode_cid
from .mlgroup import ExponentGroup, GroupElement, pair

# One level of bit-selected parameters: (f_0, ((f_{1,0}, f_{1,1}), ..., (f_{n,0}, f_{n,1}))).
BitVector = tuple[GroupElement, tuple[tuple[GroupElement, GroupElement], ...]]


@dataclass(frozen=True)
class HibeParams:
    group: ExponentGroup
    max_depth: int
    id_bits: int
    time_bits: int
    f: tuple[BitVector, ...]
    h: BitVector
    big_lambda: GroupElement

    def element_count(self) -> int:
        return self.max_depth * (2 * self.id_bits + 1) + (2 * self.time_bits + 1) + 1

    def cid(self, hid: HierId) -> tuple[int, ...]:
        return encode_cid(hid, self.id_bits, self.max_depth)


@dataclass(frozen=True)
class HibeKey:
    """``(D_0, D_1..D_l, D_{L+1})`` in G_2, bound to a concatenated identity and time."""

    cid: tuple[int, ...]
    time: TimePeriod
    d0: GroupElement
    ds: tuple[GroupElement, ...]
    d_time: GroupElement

    @property
    def depth(self) -> int:
        return len(self.cid)

    def elements(self) -> list[GroupElement]:
        return [self.d0, *self.ds, self.d_time]

    def element_count(self) -> int:
        return len(self.ds) + 2


@dataclass(frozen=True)
class HibeHeader:
    cid: tuple[int, ...]
    time: TimePeriod
    c0: GroupElement
    cs: tuple[GroupElement, ...]
    c_time: GroupElement

    def elements(self) -> list[GroupElement]:
        return [self.c0, *self.cs, self.c_time]

    def element_count(self) -> int:
        return len(self.cs) + 2


def _eval_bits(vec: BitVector, value: int, width: int, level: int) -> GroupElement:
    base, pairs = vec
    if value < 0 or value >> width:
        raise UsageError(f"label does not fit in {width} bits")
    factors = [base] + [pairs[j - 1][bit_at(value, width, j)] for j in range(1, width + 1)]
    group = base.group
    if level == 1:
        return group.product(factors, 1)
    if level == 2:
        g1 = group.generator(1)
        return group.product((pair(x, g1) for x in factors), 2)
    raise UsageError(f"F/H are defined at levels 1 and 2, not {level}")


def F_eval(params: HibeParams, level: int, i: int, ci: int) -> GroupElement:
    """``F_{level,i}(ci) = f_{level,i,0} * prod_j f_{level,i,j,ci[j]}``."""
    if not 1 <= i <= params.max_depth:
        raise DepthError(f"identity level {i} outside [1, {params.max_depth}]")
    return _eval_bits(params.f[i - 1], ci, params.id_bits, level)


def H_eval(params: HibeParams, level: int, t: TimePeriod) -> GroupElement:
    if t.width != params.time_bits:
        raise UsageError(f"time label has {t.width} bits, expected {params.time_bits}")
    return _eval_bits(params.h, t.epoch, params.time_bits, level)


def _random_bitvector(group: ExponentGroup, width: int, rng) -> BitVector:
    base = group.random_element(1, rng)
    pairs = tuple((group.random_element(1, rng), group.random_element(1, rng)) for _ in range(width))
    return base, pairs


def hibe_setup(group: ExponentGroup, max_depth: int, rng=None, alpha: int | None = None):
    """Returns ``(alpha, params)``. ``alpha`` may be supplied to share it with another scheme."""
    if max_depth < 1:
        raise UsageError("maximum depth must be at least 1")
    id_bits, time_bits = 2 * group.lam, group.lam
    f = tuple(_random_bitvector(group, id_bits, rng) for _ in range(max_depth))
    h = _random_bitvector(group, time_bits, rng)
    if alpha is None:
        alpha = group.random_scalar(rng)
    params = HibeParams(group, max_depth, id_bits, time_bits, f, h, group.generator(3) ** alpha)
    return alpha, params


def key_from_master(params: HibeParams, cid, t: TimePeriod, master: GroupElement, rng=None) -> HibeKey:
    """A fresh key whose D_0 carries ``master`` (a G_2 element) in place of ``g_2^alpha``."""
    group = params.group
    g2 = group.generator(2)
    rs = [group.random_scalar(rng) for _ in cid]
    r_time = group.random_scalar(rng)
    d0 = master
    for i, (ci, r) in enumerate(zip(cid, rs), start=1):
        d0 = d0 * F_eval(params, 2, i, ci) ** r
    d0 = d0 * H_eval(params, 2, t) ** r_time
    return HibeKey(tuple(cid), t, d0, tuple(g2 ** -r for r in rs), g2 ** -r_time)


def hibe_genkey(hid: HierId, t: TimePeriod, alpha: int, params: HibeParams, rng=None) -> HibeKey:
    if not 1 <= len(hid) <= params.max_depth:
        raise DepthError(f"identity depth {len(hid)} outside [1, {params.max_depth}]")
    master = params.group.generator(2) ** alpha
    return key_from_master(params, params.cid(hid), t, master, rng)


def hibe_randkey(key: HibeKey, params: HibeParams, rng=None) -> HibeKey:
    group = params.group
    g2 = group.generator(2)
    rs = [group.random_scalar(rng) for _ in key.cid]
    r_time = group.random_scalar(rng)
    d0 = key.d0
    for i, (ci, r) in enumerate(zip(key.cid, rs), start=1):
        d0 = d0 * F_eval(params, 2, i, ci) ** r
    d0 = d0 * H_eval(params, 2, key.time) ** r_time
    ds = tuple(d * g2 ** -r for d, r in zip(key.ds, rs))
    return HibeKey(key.cid, key.time, d0, ds, key.d_time * g2 ** -r_time)


def hibe_delegate(child: HierId, parent_key: HibeKey, params: HibeParams, rng=None) -> HibeKey:
    depth = len(child)
    if depth > params.max_depth:
        raise DepthError(f"identity depth {depth} exceeds maximum {params.max_depth}")
    if parent_key.depth != depth - 1:
        raise PrefixMismatch(f"parent key has depth {parent_key.depth}, child has depth {depth}")
    cid = params.cid(child)
    if cid[:-1] != parent_key.cid:
        raise PrefixMismatch("parent key identity is not a prefix of the child identity")
    group = params.group
    r = group.random_scalar(rng)
    temp = HibeKey(
        cid,
        parent_key.time,
        parent_key.d0 * F_eval(params, 2, depth, cid[-1]) ** r,
        parent_key.ds + (group.generator(2) ** -r,),
        parent_key.d_time,
    )
    return hibe_randkey(temp, params, rng)


def hibe_encaps(hid: HierId, t: TimePeriod, s: int, params: HibeParams):
    cid = params.cid(hid)
    header = HibeHeader(
        cid,
        t,
        params.group.generator(1) ** s,
        tuple(F_eval(params, 1, i, ci) ** s for i, ci in enumerate(cid, start=1)),
        H_eval(params, 1, t) ** s,
    )
    return header, params.big_lambda ** s


def hibe_pairing_product(header: HibeHeader, key: HibeKey) -> GroupElement:
    """``e(C_0, D_0) * prod e(C_i, D_i) * e(C_{L+1}, D_{L+1})`` with no binding check."""
    group = header.c0.group
    terms = [pair(header.c0, key.d0), pair(header.c_time, key.d_time)]
    terms += [pair(c, d) for c, d in zip(header.cs, key.ds)]
    return group.product(terms, 3)


def hibe_decaps(header: HibeHeader, key: HibeKey, params: HibeParams | None = None):
    """Session key, or ``None`` when the key is for a different identity or time."""
    if header.cid != key.cid or header.time != key.time:
        return None
    return hibe_pairing_product(header, key)
