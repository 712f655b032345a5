"""Hierarchical identities, their hash-concatenated encoding, and time labels."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from urllib.parse import quote, unquote

from .errors import DepthError, UsageError

HierId = tuple[str, ...]
ROOT: HierId = ()


def make_id(*components: str) -> HierId:
    for c in components:
        if not isinstance(c, str) or not c:
            raise UsageError(f"identity components must be non-empty strings, got {c!r}")
    return tuple(components)


def parse_id(text: str) -> HierId:
    """Parse the canonical ``a/b/c`` form; the empty string is the root."""
    if text in ("", "/"):
        return ROOT
    return make_id(*(unquote(part) for part in text.split("/")))


def format_id(hid: HierId) -> str:
    return "/".join(quote(c, safe="") for c in hid)


def prefix_set(hid: HierId) -> set[HierId]:
    return {hid[:j] for j in range(1, len(hid) + 1)}


def is_prefix(ancestor: HierId, hid: HierId) -> bool:
    return len(ancestor) <= len(hid) and hid[: len(ancestor)] == ancestor


def _digest(components: HierId, bits: int) -> int:
    h = hashlib.sha256()
    for c in components:
        raw = c.encode("utf-8")
        h.update(len(raw).to_bytes(4, "big"))
        h.update(raw)
    return int.from_bytes(h.digest(), "big") >> (256 - bits)


def encode_cid(hid: HierId, bits: int, max_depth: int | None = None) -> tuple[int, ...]:
    """``(CI_1, ..., CI_k)`` with ``CI_j = H(I_1 || ... || I_j)`` cut to ``bits`` bits.

    Components are length-prefixed before hashing so that ("a", "bc") and
    ("ab", "c") never collide by construction.
    """
    if not 1 <= bits <= 256:
        raise UsageError(f"digest width must be in [1, 256], got {bits}")
    if max_depth is not None and len(hid) > max_depth:
        raise DepthError(f"identity depth {len(hid)} exceeds maximum {max_depth}")
    return tuple(_digest(hid[:j], bits) for j in range(1, len(hid) + 1))


def bit_at(value: int, width: int, j: int) -> int:
    """Bit ``j`` (1-based, most significant first) of a ``width``-bit label."""
    return (value >> (width - j)) & 1


@dataclass(frozen=True, order=True)
class TimePeriod:
    epoch: int
    width: int

    @property
    def label(self) -> str:
        return format(self.epoch, f"0{self.width}b")

    def bits(self) -> list[int]:
        return [bit_at(self.epoch, self.width, j) for j in range(1, self.width + 1)]


def encode_time(epoch: int, width: int) -> TimePeriod:
    if not 0 <= epoch < 2**width:
        raise UsageError(f"epoch {epoch} outside [0, 2**{width})")
    return TimePeriod(epoch, width)
