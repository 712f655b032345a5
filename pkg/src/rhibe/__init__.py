"""Revocable hierarchical identity-based encryption over a simulated 3-leveled multilinear group.

Two schemes are provided: ``rhibe.hpu`` (history-preserving updates, O(l)
private and update keys) and ``rhibe.hfu`` (history-free updates, constant
size private keys). The group backend in ``rhibe.mlgroup`` stores discrete
logs in the clear and is for functional testing only.
"""

from .errors import RhibeError
from .identity import encode_cid, encode_time, format_id, parse_id, prefix_set
from .mlgroup import ExponentGroup, GroupElement, group_setup, pair
from .scheme import NodeState, RevocationList, SystemParams, rhibe_setup

__all__ = [
    "ExponentGroup",
    "GroupElement",
    "NodeState",
    "RevocationList",
    "RhibeError",
    "SystemParams",
    "encode_cid",
    "encode_time",
    "format_id",
    "group_setup",
    "pair",
    "parse_id",
    "prefix_set",
    "rhibe_setup",
]

__version__ = "0.1.0"
