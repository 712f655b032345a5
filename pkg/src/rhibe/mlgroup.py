"""3-leveled multilinear groups.

``MultilinearGroup`` is the backend boundary. The only backend shipped here
is ``ExponentGroup``, which represents ``g_i^x`` by the pair ``(i, x)``.
Every pairing identity therefore holds exactly, which is what makes the
scheme algebra testable, and which also means the backend offers no
security whatsoever: the discrete log of every element is in plain view.
"""

from __future__ import annotations

import secrets
from abc import ABC, abstractmethod
from dataclasses import dataclass

from .errors import IntegrityError, LevelError, UsageError

MAX_LEVEL = 3
WIRE_VERSION = 1

# Largest prime below 2**256; used for every lambda in (60, 128].
PRIME_256 = 2**256 - 189
# Mersenne prime 2**61 - 1; toy profiles (lambda <= 60).
PRIME_61 = 2**61 - 1

MIN_LAMBDA = 8
MAX_LAMBDA = 128


def default_rng():
    return secrets.SystemRandom()


class MultilinearGroup(ABC):
    """Operations a backend must provide for levels 1..3."""

    order: int
    lam: int

    @abstractmethod
    def generator(self, level: int): ...

    @abstractmethod
    def identity(self, level: int): ...

    @abstractmethod
    def pair(self, x, y): ...

    @abstractmethod
    def exp(self, x, a: int): ...

    @abstractmethod
    def mul(self, x, y): ...

    @abstractmethod
    def inv(self, x): ...

    def random_scalar(self, rng=None) -> int:
        rng = rng or default_rng()
        return rng.randrange(self.order)

    def random_element(self, level: int, rng=None):
        return self.exp(self.generator(level), self.random_scalar(rng))

    @property
    def scalar_width(self) -> int:
        return (self.order.bit_length() + 7) // 8

    def scalar_to_bytes(self, a: int) -> bytes:
        return bytes([WIRE_VERSION]) + (a % self.order).to_bytes(self.scalar_width, "big")

    def scalar_from_bytes(self, data: bytes) -> int:
        if len(data) != 1 + self.scalar_width:
            raise IntegrityError(f"scalar encoding must be {1 + self.scalar_width} bytes, got {len(data)}")
        if data[0] != WIRE_VERSION:
            raise IntegrityError(f"unknown scalar wire version {data[0]}")
        value = int.from_bytes(data[1:], "big")
        if value >= self.order:
            raise IntegrityError("scalar not reduced modulo the group order")
        return value

    @abstractmethod
    def element_to_bytes(self, x) -> bytes: ...

    @abstractmethod
    def element_from_bytes(self, data: bytes): ...

    @property
    def element_width(self) -> int:
        return 2 + self.scalar_width


@dataclass(frozen=True, slots=True)
class GroupElement:
    """``g_level ** log`` in the exponent backend."""

    group: ExponentGroup
    level: int
    log: int

    def __mul__(self, other: GroupElement) -> GroupElement:
        return self.group.mul(self, other)

    def __truediv__(self, other: GroupElement) -> GroupElement:
        return self.group.mul(self, self.group.inv(other))

    def __pow__(self, a: int) -> GroupElement:
        return self.group.exp(self, a)

    def inv(self) -> GroupElement:
        return self.group.inv(self)

    def is_identity(self) -> bool:
        return self.log == 0

    def __repr__(self):
        return f"G{self.level}^{self.log:#x}"


@dataclass(frozen=True, slots=True)
class ExponentGroup(MultilinearGroup):
    """Group description ``(p, G_1, G_2, G_3, e, g_1, g_2, g_3)``.

    Generators are the elements with log 1; identities have log 0.
    """

    order: int
    lam: int
    max_level: int = MAX_LEVEL

    def _check_level(self, level: int):
        if not 1 <= level <= self.max_level:
            raise LevelError(f"level {level} outside [1, {self.max_level}]")

    def element(self, level: int, log: int) -> GroupElement:
        self._check_level(level)
        return GroupElement(self, level, log % self.order)

    def generator(self, level: int) -> GroupElement:
        return self.element(level, 1)

    def identity(self, level: int) -> GroupElement:
        return self.element(level, 0)

    def pair(self, x: GroupElement, y: GroupElement) -> GroupElement:
        level = x.level + y.level
        if level > self.max_level:
            raise LevelError(f"cannot pair levels {x.level} and {y.level}: {level} > {self.max_level}")
        return GroupElement(self, level, x.log * y.log % self.order)

    def exp(self, x: GroupElement, a: int) -> GroupElement:
        return GroupElement(self, x.level, x.log * a % self.order)

    def mul(self, x: GroupElement, y: GroupElement) -> GroupElement:
        if x.level != y.level:
            raise LevelError(f"cannot multiply elements of levels {x.level} and {y.level}")
        return GroupElement(self, x.level, (x.log + y.log) % self.order)

    def inv(self, x: GroupElement) -> GroupElement:
        return GroupElement(self, x.level, -x.log % self.order)

    def product(self, elements, level: int) -> GroupElement:
        total = 0
        for x in elements:
            if x.level != level:
                raise LevelError(f"cannot multiply elements of levels {x.level} and {level}")
            total += x.log
        return GroupElement(self, level, total % self.order)

    def element_to_bytes(self, x: GroupElement) -> bytes:
        return bytes([WIRE_VERSION, x.level]) + x.log.to_bytes(self.scalar_width, "big")

    def element_from_bytes(self, data: bytes) -> GroupElement:
        if len(data) != self.element_width:
            raise IntegrityError(f"element encoding must be {self.element_width} bytes, got {len(data)}")
        version, level = data[0], data[1]
        if version != WIRE_VERSION:
            raise IntegrityError(f"unknown element wire version {version}")
        if not 1 <= level <= self.max_level:
            raise IntegrityError(f"element level {level} outside [1, {self.max_level}]")
        log = int.from_bytes(data[2:], "big")
        if log >= self.order:
            raise IntegrityError("element log not reduced modulo the group order")
        return GroupElement(self, level, log)


def group_setup(lam: int = 128) -> ExponentGroup:
    """Return the pinned group for security level ``lam``.

    The prime is fixed per profile rather than sampled, so every setup at
    the same ``lam`` yields the same description.
    """
    if not isinstance(lam, int) or lam < MIN_LAMBDA:
        raise UsageError(f"lambda must be an integer >= {MIN_LAMBDA}, got {lam!r}")
    if lam > MAX_LAMBDA:
        raise UsageError(f"lambda must be <= {MAX_LAMBDA} (identity digests are capped at 256 bits)")
    p = PRIME_61 if lam <= 60 else PRIME_256
    return ExponentGroup(order=p, lam=lam)


def pair(x: GroupElement, y: GroupElement) -> GroupElement:
    return x.group.pair(x, y)
