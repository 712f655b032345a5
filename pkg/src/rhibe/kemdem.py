"""Byte-message encryption on top of the G_3 message space.

A random G_3 element is encrypted under the scheme; SHA-256 of its wire
encoding keys ChaCha20-Poly1305 for the payload. The serialized core
ciphertext is bound in as associated data.
"""

from __future__ import annotations

import hashlib

from cryptography.exceptions import InvalidTag
from cryptography.hazmat.primitives.ciphers.aead import ChaCha20Poly1305

from .codec import HybridCiphertext, dumps
from .errors import IntegrityError
from .hibe import HibeKey
from .identity import HierId
from .mlgroup import GroupElement, default_rng
from .scheme import SystemParams, random_message, rhibe_decrypt, rhibe_encrypt

NONCE_SIZE = 12


def mask_key(m: GroupElement) -> bytes:
    return hashlib.sha256(m.group.element_to_bytes(m)).digest()


def encrypt_bytes(hid: HierId, epoch: int, payload: bytes, params: SystemParams, rng=None) -> HybridCiphertext:
    rng = rng or default_rng()
    m = random_message(params, rng)
    core = rhibe_encrypt(hid, epoch, m, params, rng)
    nonce = rng.getrandbits(8 * NONCE_SIZE).to_bytes(NONCE_SIZE, "big")
    sealed = ChaCha20Poly1305(mask_key(m)).encrypt(nonce, payload, dumps(core))
    return HybridCiphertext(core, nonce, sealed)


def decrypt_bytes(hct: HybridCiphertext, dk: HibeKey, params: SystemParams) -> bytes | None:
    """Plaintext, ``None`` on identity/epoch mismatch; raises ``IntegrityError`` on tampering."""
    m = rhibe_decrypt(hct.core, dk, params)
    if m is None:
        return None
    if len(hct.nonce) != NONCE_SIZE:
        raise IntegrityError("bad nonce length")
    try:
        return ChaCha20Poly1305(mask_key(m)).decrypt(hct.nonce, hct.sealed, dumps(hct.core))
    except InvalidTag as exc:
        raise IntegrityError("ciphertext failed authentication") from exc
