"""Boneh-Gentry-Waters public-key broadcast encryption over levels 1 and 2."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import UsageError
from .mlgroup import ExponentGroup, GroupElement, pair

HARD_MAX_USERS = 1024


@dataclass(frozen=True)
class PkbeParams:
    group: ExponentGroup
    n: int
    # xs[j - 1] = g_1^(alpha^j) for j in 1..2N; slot N (that is X_{N+1}) is None.
    xs: tuple[GroupElement | None, ...]
    big_gamma: GroupElement

    def x(self, j: int) -> GroupElement:
        if not 1 <= j <= 2 * self.n or j == self.n + 1:
            raise UsageError(f"X_{j} is not a public parameter (N = {self.n})")
        return self.xs[j - 1]

    def element_count(self) -> int:
        return 2 * self.n - 1 + 1


@dataclass(frozen=True)
class PkbeKey:
    index: int
    k: GroupElement


@dataclass(frozen=True)
class PkbeHeader:
    receivers: frozenset[int]
    e0: GroupElement
    e1: GroupElement


def _check_n(n: int):
    if not 1 <= n <= HARD_MAX_USERS:
        raise UsageError(f"N must be in [1, {HARD_MAX_USERS}], got {n}")


def pkbe_params_from_alpha(group: ExponentGroup, n: int, alpha: int) -> PkbeParams:
    _check_n(n)
    g1 = group.generator(1)
    xs = []
    power = 1
    for j in range(1, 2 * n + 1):
        power = power * alpha % group.order
        xs.append(None if j == n + 1 else g1 ** power)
    big_gamma = group.generator(2) ** pow(alpha, n + 1, group.order)
    return PkbeParams(group, n, tuple(xs), big_gamma)


def pkbe_setup(group: ExponentGroup, n: int, rng=None):
    """Returns ``((alpha, gamma), params, Y)`` with ``Y = g_1^gamma``."""
    _check_n(n)
    alpha = group.random_scalar(rng)
    gamma = group.random_scalar(rng)
    params = pkbe_params_from_alpha(group, n, alpha)
    return (alpha, gamma), params, group.generator(1) ** gamma


def pkbe_genkey(d: int, gamma: int, params: PkbeParams) -> PkbeKey:
    if not 1 <= d <= params.n:
        raise UsageError(f"index {d} outside [1, {params.n}]")
    return PkbeKey(d, params.x(d) ** gamma)


def _check_receivers(receivers, n: int) -> frozenset[int]:
    s = frozenset(receivers)
    bad = [j for j in s if not 1 <= j <= n]
    if bad:
        raise UsageError(f"receiver indices {sorted(bad)} outside [1, {n}]")
    return s


def pkbe_encaps(receivers, beta: int, y: GroupElement, params: PkbeParams):
    s = _check_receivers(receivers, params.n)
    group = params.group
    acc = group.product([y, *(params.x(params.n + 1 - j) for j in s)], 1)
    header = PkbeHeader(s, group.generator(1) ** beta, acc ** beta)
    return header, params.big_gamma ** beta


def pkbe_unmask(params: PkbeParams, d: int, receivers, e0: GroupElement, e1: GroupElement,
                k: GroupElement) -> GroupElement:
    """``e(X_d, E_1) / e(E_0, K * prod_{j in S, j != d} X_{N+1-j+d})``; requires ``d`` in ``S``."""
    group = params.group
    n = params.n
    acc = group.product([k, *(params.x(n + 1 - j + d) for j in receivers if j != d)], 1)
    return pair(params.x(d), e1) / pair(e0, acc)


def pkbe_decaps(header: PkbeHeader, key: PkbeKey, params: PkbeParams):
    """Session key ``Gamma^beta``, or ``None`` when the index is not a receiver."""
    if key.index not in header.receivers:
        return None
    return pkbe_unmask(params, key.index, header.receivers, header.e0, header.e1, key.k)
