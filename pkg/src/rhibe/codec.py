"""Binary record format for every persisted artifact.

Layout: 8-byte magic, scheme tag, kind tag, then the body. Variable-length
pieces are length-prefixed; group elements use the fixed-width wire format
of the group. ``to_json`` gives a diagnostic rendering that is not meant to
be read back.
"""

from __future__ import annotations

import dataclasses
import struct

from .errors import IntegrityError, UsageError
from .hfu import HfuPrivateKey, HfuUpdateKey
from .hibe import HibeHeader, HibeKey, HibeParams
from .hpu import HpuPrivateKey, HpuUpdateKey, LevelKey
from .identity import HierId, TimePeriod
from .mlgroup import ExponentGroup, GroupElement, group_setup
from .pkbe import PkbeParams
from .scheme import Ciphertext, LevelUpdate, NodeState, RevocationList, SystemParams

MAGIC = b"RHIBE\x00\x00\x01"
CID_WIDTH = 32

SCHEME_TAGS = {None: 0, "hpu": 1, "hfu": 2}
SCHEME_NAMES = {v: k for k, v in SCHEME_TAGS.items()}

KIND_PARAMS = 1
KIND_MASTER = 2
KIND_STATE = 3
KIND_RL = 4
KIND_HPU_SK = 5
KIND_HPU_UK = 6
KIND_HFU_SK = 7
KIND_HFU_UK = 8
KIND_DK = 9
KIND_CT = 10
KIND_HYBRID = 11


@dataclasses.dataclass(frozen=True)
class MasterKey:
    alpha: int


@dataclasses.dataclass(frozen=True)
class HybridCiphertext:
    core: Ciphertext
    nonce: bytes
    sealed: bytes


@dataclasses.dataclass(frozen=True)
class Record:
    scheme: str | None
    kind: int
    obj: object


class Writer:
    def __init__(self, group: ExponentGroup | None = None):
        self.group = group
        self.parts: list[bytes] = []

    def u8(self, v: int):
        self.parts.append(struct.pack(">B", v))

    def u16(self, v: int):
        self.parts.append(struct.pack(">H", v))

    def u32(self, v: int):
        self.parts.append(struct.pack(">I", v))

    def u64(self, v: int):
        self.parts.append(struct.pack(">Q", v))

    def blob(self, data: bytes):
        self.u32(len(data))
        self.parts.append(data)

    def text(self, s: str):
        self.blob(s.encode("utf-8"))

    def hid(self, hid: HierId):
        self.u16(len(hid))
        for c in hid:
            self.text(c)

    def element(self, x: GroupElement):
        self.parts.append(self.group.element_to_bytes(x))

    def elements(self, xs):
        xs = list(xs)
        self.u32(len(xs))
        for x in xs:
            self.element(x)

    def scalar(self, a: int):
        self.parts.append(self.group.scalar_to_bytes(a))

    def opt_scalar(self, a: int | None):
        self.u8(a is not None)
        if a is not None:
            self.scalar(a)

    def indices(self, s):
        s = sorted(s)
        self.u32(len(s))
        for d in s:
            self.u32(d)

    def cid(self, cid):
        self.u16(len(cid))
        for ci in cid:
            self.parts.append(ci.to_bytes(CID_WIDTH, "big"))

    def time(self, t: TimePeriod):
        self.u64(t.epoch)
        self.u16(t.width)

    def getvalue(self) -> bytes:
        return b"".join(self.parts)


class Reader:
    def __init__(self, data: bytes, group: ExponentGroup | None = None):
        self.data = data
        self.pos = 0
        self.group = group

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise IntegrityError("record is truncated")
        out = self.data[self.pos:self.pos + n]
        self.pos += n
        return out

    def _unpack(self, fmt: str) -> int:
        return struct.unpack(fmt, self.take(struct.calcsize(fmt)))[0]

    def u8(self) -> int:
        return self._unpack(">B")

    def u16(self) -> int:
        return self._unpack(">H")

    def u32(self) -> int:
        return self._unpack(">I")

    def u64(self) -> int:
        return self._unpack(">Q")

    def blob(self) -> bytes:
        return self.take(self.u32())

    def text(self) -> str:
        try:
            return self.blob().decode("utf-8")
        except UnicodeDecodeError as exc:
            raise IntegrityError("invalid UTF-8 in record") from exc

    def hid(self) -> HierId:
        return tuple(self.text() for _ in range(self.u16()))

    def element(self) -> GroupElement:
        return self.group.element_from_bytes(self.take(self.group.element_width))

    def elements(self) -> tuple[GroupElement, ...]:
        n = self.u32()
        if n * self.group.element_width > len(self.data) - self.pos:
            raise IntegrityError("record is truncated")
        return tuple(self.element() for _ in range(n))

    def scalar(self) -> int:
        return self.group.scalar_from_bytes(self.take(1 + self.group.scalar_width))

    def opt_scalar(self) -> int | None:
        return self.scalar() if self.u8() else None

    def indices(self) -> frozenset[int]:
        return frozenset(self.u32() for _ in range(self.u32()))

    def cid(self) -> tuple[int, ...]:
        return tuple(int.from_bytes(self.take(CID_WIDTH), "big") for _ in range(self.u16()))

    def time(self) -> TimePeriod:
        return TimePeriod(self.u64(), self.u16())

    def done(self):
        if self.pos != len(self.data):
            raise IntegrityError(f"{len(self.data) - self.pos} trailing bytes in record")


def _write_bitvector(w: Writer, vec):
    base, pairs = vec
    w.element(base)
    w.u32(len(pairs))
    for zero, one in pairs:
        w.element(zero)
        w.element(one)


def _read_bitvector(r: Reader):
    base = r.element()
    pairs = tuple((r.element(), r.element()) for _ in range(r.u32()))
    return base, pairs


def _write_params(w: Writer, pp: SystemParams):
    g = pp.group
    w.u16(g.lam)
    w.blob(g.order.to_bytes(g.scalar_width, "big"))
    hp = pp.hibe
    w.u32(hp.max_depth)
    w.u32(hp.id_bits)
    w.u32(hp.time_bits)
    for vec in hp.f:
        _write_bitvector(w, vec)
    _write_bitvector(w, hp.h)
    w.element(hp.big_lambda)
    w.u32(pp.pkbe.n)
    w.elements(x for x in pp.pkbe.xs if x is not None)
    w.element(pp.pkbe.big_gamma)
    w.element(pp.g2_alpha_n1)
    w.element(pp.g2_beta_root)
    w.element(pp.omega)


def _read_params(r: Reader) -> SystemParams:
    lam = r.u16()
    try:
        group = group_setup(lam)
    except UsageError as exc:
        raise IntegrityError(str(exc)) from exc
    if int.from_bytes(r.blob(), "big") != group.order:
        raise IntegrityError("group order does not match the pinned prime for this lambda")
    r.group = group
    max_depth, id_bits, time_bits = r.u32(), r.u32(), r.u32()
    f = tuple(_read_bitvector(r) for _ in range(max_depth))
    h = _read_bitvector(r)
    if any(len(pairs) != id_bits for _, pairs in f) or len(h[1]) != time_bits:
        raise IntegrityError("parameter vector widths do not match the recorded label widths")
    hibe = HibeParams(group, max_depth, id_bits, time_bits, f, h, r.element())
    n = r.u32()
    present = list(r.elements())
    if len(present) != 2 * n - 1:
        raise IntegrityError(f"expected {2 * n - 1} broadcast elements, got {len(present)}")
    xs = tuple(present[:n]) + (None,) + tuple(present[n:])
    pkbe = PkbeParams(group, n, xs, r.element())
    return SystemParams(group, hibe, pkbe, r.element(), r.element(), r.element())


def _write_level_update(w: Writer, lu: LevelUpdate):
    w.hid(lu.node)
    w.indices(lu.receivers)
    w.element(lu.u0)
    w.element(lu.u1)
    w.element(lu.u2)


def _read_level_update(r: Reader) -> LevelUpdate:
    return LevelUpdate(r.hid(), r.indices(), r.element(), r.element(), r.element())


def _write_header(w: Writer, h: HibeHeader):
    w.cid(h.cid)
    w.time(h.time)
    w.element(h.c0)
    w.elements(h.cs)
    w.element(h.c_time)


def _read_header(r: Reader) -> HibeHeader:
    return HibeHeader(r.cid(), r.time(), r.element(), r.elements(), r.element())


def _write_body(w: Writer, obj) -> int:
    if isinstance(obj, SystemParams):
        _write_params(w, obj)
        return KIND_PARAMS
    if isinstance(obj, MasterKey):
        w.scalar(obj.alpha)
        return KIND_MASTER
    if isinstance(obj, NodeState):
        w.hid(obj.node)
        w.opt_scalar(obj.beta)
        w.opt_scalar(obj.gamma)
        w.u32(len(obj.children))
        for child, d in obj.children.items():
            w.hid(child)
            w.u32(d)
        w.u8(obj.last_update_epoch is not None)
        w.u64(obj.last_update_epoch or 0)
        return KIND_STATE
    if isinstance(obj, RevocationList):
        w.hid(obj.node)
        w.u32(len(obj.entries))
        for child, epoch in obj.entries:
            w.hid(child)
            w.u64(epoch)
        return KIND_RL
    if isinstance(obj, HpuPrivateKey):
        w.hid(obj.hid)
        w.u32(len(obj.levels))
        for lk in obj.levels:
            w.u32(lk.index)
            for x in lk.elements():
                w.element(x)
        return KIND_HPU_SK
    if isinstance(obj, HpuUpdateKey):
        w.u64(obj.epoch)
        w.u32(len(obj.levels))
        for lu in obj.levels:
            _write_level_update(w, lu)
        return KIND_HPU_UK
    if isinstance(obj, HfuPrivateKey):
        w.hid(obj.hid)
        w.u32(obj.index)
        w.element(obj.k0)
        w.element(obj.k1)
        return KIND_HFU_SK
    if isinstance(obj, HfuUpdateKey):
        w.u64(obj.epoch)
        w.element(obj.p0)
        w.elements(obj.ps)
        w.element(obj.p_time)
        _write_level_update(w, obj.level)
        return KIND_HFU_UK
    if isinstance(obj, HibeKey):
        w.cid(obj.cid)
        w.time(obj.time)
        w.element(obj.d0)
        w.elements(obj.ds)
        w.element(obj.d_time)
        return KIND_DK
    if isinstance(obj, Ciphertext):
        w.element(obj.c)
        _write_header(w, obj.header)
        return KIND_CT
    if isinstance(obj, HybridCiphertext):
        w.blob(dumps(obj.core))
        w.blob(obj.nonce)
        w.blob(obj.sealed)
        return KIND_HYBRID
    raise UsageError(f"cannot serialize {type(obj).__name__}")


def _group_of(obj) -> ExponentGroup | None:
    if isinstance(obj, GroupElement):
        return obj.group
    if isinstance(obj, SystemParams):
        return obj.group
    if isinstance(obj, (tuple, list)):
        values = obj
    elif dataclasses.is_dataclass(obj) and not isinstance(obj, ExponentGroup):
        values = [getattr(obj, f.name) for f in dataclasses.fields(obj)]
    else:
        return None
    for value in values:
        found = _group_of(value)
        if found is not None:
            return found
    return None


_SCHEME_OF = {HpuPrivateKey: "hpu", HpuUpdateKey: "hpu", HfuPrivateKey: "hfu", HfuUpdateKey: "hfu"}


def dumps(obj, scheme: str | None = None, group: ExponentGroup | None = None) -> bytes:
    scheme = _SCHEME_OF.get(type(obj), scheme)
    w = Writer(group or _group_of(obj))
    kind = _write_body(w, obj)
    return MAGIC + bytes([SCHEME_TAGS[scheme], kind]) + w.getvalue()


def _read_body(r: Reader, kind: int):
    if kind == KIND_PARAMS:
        return _read_params(r)
    if r.group is None:
        raise UsageError("a group is needed to decode this record")
    if kind == KIND_MASTER:
        return MasterKey(r.scalar())
    if kind == KIND_STATE:
        node, beta, gamma = r.hid(), r.opt_scalar(), r.opt_scalar()
        children = {}
        for _ in range(r.u32()):
            child = r.hid()
            children[child] = r.u32()
        has_epoch, epoch = r.u8(), r.u64()
        return NodeState(node, beta, gamma, children, epoch if has_epoch else None)
    if kind == KIND_RL:
        node = r.hid()
        entries = []
        for _ in range(r.u32()):
            child = r.hid()
            entries.append((child, r.u64()))
        return RevocationList(node, entries)
    if kind == KIND_HPU_SK:
        hid = r.hid()
        levels = tuple(LevelKey(r.u32(), r.element(), r.element(), r.element(), r.element()) for _ in range(r.u32()))
        return HpuPrivateKey(hid, levels)
    if kind == KIND_HPU_UK:
        epoch = r.u64()
        return HpuUpdateKey(epoch, tuple(_read_level_update(r) for _ in range(r.u32())))
    if kind == KIND_HFU_SK:
        return HfuPrivateKey(r.hid(), r.u32(), r.element(), r.element())
    if kind == KIND_HFU_UK:
        return HfuUpdateKey(r.u64(), r.element(), r.elements(), r.element(), _read_level_update(r))
    if kind == KIND_DK:
        return HibeKey(r.cid(), r.time(), r.element(), r.elements(), r.element())
    if kind == KIND_CT:
        return Ciphertext(r.element(), _read_header(r))
    if kind == KIND_HYBRID:
        core = loads(r.blob(), r.group)
        if not isinstance(core, Ciphertext):
            raise IntegrityError("hybrid ciphertext does not wrap a ciphertext record")
        return HybridCiphertext(core, r.blob(), r.blob())
    raise IntegrityError(f"unknown record kind {kind}")


def load_record(data: bytes, group: ExponentGroup | None = None) -> Record:
    if len(data) < len(MAGIC) + 2 or not data.startswith(MAGIC):
        raise IntegrityError("not an RHIBE record (bad magic)")
    tag, kind = data[len(MAGIC)], data[len(MAGIC) + 1]
    if tag not in SCHEME_NAMES:
        raise IntegrityError(f"unknown scheme tag {tag}")
    r = Reader(data[len(MAGIC) + 2:], group)
    obj = _read_body(r, kind)
    r.done()
    return Record(SCHEME_NAMES[tag], kind, obj)


def loads(data: bytes, group: ExponentGroup | None = None):
    return load_record(data, group).obj


def to_json(obj):
    """Plain-data rendering for ``--json`` diagnostics."""
    if isinstance(obj, GroupElement):
        return {"level": obj.level, "log": hex(obj.log)}
    if isinstance(obj, ExponentGroup):
        return {"lambda": obj.lam, "order": hex(obj.order)}
    if isinstance(obj, TimePeriod):
        return {"epoch": obj.epoch, "label": obj.label}
    if isinstance(obj, (bytes, bytearray)):
        return obj.hex()
    if dataclasses.is_dataclass(obj):
        out = {"type": type(obj).__name__}
        for f in dataclasses.fields(obj):
            if f.name == "group" and not isinstance(obj, SystemParams):
                continue
            out[f.name] = to_json(getattr(obj, f.name))
        return out
    if isinstance(obj, dict):
        return [{"key": to_json(k), "value": to_json(v)} for k, v in obj.items()]
    if isinstance(obj, (frozenset, set)):
        return sorted(obj)
    if isinstance(obj, (list, tuple)):
        return [to_json(x) for x in obj]
    return obj
