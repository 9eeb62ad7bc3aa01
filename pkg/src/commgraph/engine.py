"""Group-engine contract and the generic operations built on it.

Every concrete group representation (reduced words, free-group automorphisms,
integer matrices, dyadic PL maps) subclasses :class:`GroupElement`.  Elements
are immutable values; equality is equality of canonical forms, and the
canonical byte encoding returned by :func:`canonical_key` is injective.

ElementKey layout
-----------------
``key = engine_id (1 byte) || payload``.  Payloads are built from two
primitives, both self-delimiting:

* ``uint``: unsigned LEB128 (7 data bits per byte, low group first, high bit
  set on every byte except the last);
* ``int``: zig-zag mapped (``n >= 0 -> 2n``, ``n < 0 -> -2n - 1``) and then
  written as ``uint``.  Works for arbitrarily large Python ints.

The per-engine payloads are documented on each engine's ``payload`` method.
"""

from __future__ import annotations

import importlib
from abc import ABC, abstractmethod

ENGINE_IDS = {"word": 1, "automorphism": 2, "matrix": 3, "thompson": 4}
_ENGINE_MODULES = {
    "word": "commgraph.autfree",
    "automorphism": "commgraph.autfree",
    "matrix": "commgraph.matrix",
    "thompson": "commgraph.thompson",
}
_DECODERS = {}


class EngineMismatch(TypeError):
    """Raised when an operation mixes elements of different engines."""


class KeyDecodeError(ValueError):
    pass


class GroupElement(ABC):
    engine: str = ""

    @abstractmethod
    def __mul__(self, other): ...

    @abstractmethod
    def inverse(self): ...

    @abstractmethod
    def identity(self):
        """Identity element of the group this element lives in."""

    @abstractmethod
    def payload(self) -> bytes: ...

    @abstractmethod
    def _canon(self):
        """Hashable canonical form; equal iff the elements are equal."""

    def is_identity(self) -> bool:
        return self == self.identity()

    def __eq__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self.engine == other.engine and self._canon() == other._canon()

    def __hash__(self):
        return hash((self.engine, self._canon()))

    def __pow__(self, k: int):
        return power(self, k)

    def key(self) -> bytes:
        return canonical_key(self)


def register_decoder(engine: str, decoder) -> None:
    _DECODERS[engine] = decoder


def check_same_engine(*elements: GroupElement) -> None:
    engines = {e.engine for e in elements}
    if len(engines) > 1:
        raise EngineMismatch(f"mixed engines: {sorted(engines)}")


# -- byte encoding ---------------------------------------------------------


def encode_uint(n: int) -> bytes:
    if n < 0:
        raise ValueError("encode_uint needs a non-negative integer")
    out = bytearray()
    while True:
        byte = n & 0x7F
        n >>= 7
        if n:
            out.append(byte | 0x80)
        else:
            out.append(byte)
            return bytes(out)


def encode_int(n: int) -> bytes:
    return encode_uint(2 * n if n >= 0 else -2 * n - 1)


class ByteReader:
    """Cursor over a payload; decodes the ``uint``/``int`` primitives."""

    def __init__(self, data: bytes, pos: int = 0):
        self.data = data
        self.pos = pos

    def uint(self) -> int:
        result = 0
        shift = 0
        while True:
            if self.pos >= len(self.data):
                raise KeyDecodeError("truncated varint")
            byte = self.data[self.pos]
            self.pos += 1
            result |= (byte & 0x7F) << shift
            shift += 7
            if not byte & 0x80:
                # Reject non-minimal encodings so decoding stays injective.
                if byte == 0 and shift > 7:
                    raise KeyDecodeError("non-minimal varint")
                return result

    def int(self) -> int:
        z = self.uint()
        return z >> 1 if z % 2 == 0 else -((z + 1) >> 1)

    def remaining(self) -> int:
        return len(self.data) - self.pos

    def count(self, per_item: int = 1) -> int:
        """Read a length prefix, rejecting lengths the remaining bytes cannot hold."""
        n = self.uint()
        if n * per_item > self.remaining():
            raise KeyDecodeError("length prefix exceeds payload")
        return n

    def done(self) -> None:
        if self.pos != len(self.data):
            raise KeyDecodeError("trailing bytes in key")


# -- generic operations ----------------------------------------------------


def canonical_key(g: GroupElement) -> bytes:
    return bytes([ENGINE_IDS[g.engine]]) + g.payload()


def element_from_key(key: bytes) -> GroupElement:
    """Rebuild an element from its canonical key.

    Raises KeyDecodeError on unknown engines, malformed payloads, or payloads
    that are not in canonical form (decode(key).key() must equal key).
    """
    if not key:
        raise KeyDecodeError("empty key")
    names = [name for name, ident in ENGINE_IDS.items() if ident == key[0]]
    if not names:
        raise KeyDecodeError(f"unknown engine id {key[0]}")
    engine = names[0]
    if engine not in _DECODERS:
        importlib.import_module(_ENGINE_MODULES[engine])
    reader = ByteReader(key, 1)
    try:
        g = _DECODERS[engine](reader)
    except KeyDecodeError:
        raise
    except (ValueError, IndexError) as exc:
        raise KeyDecodeError(str(exc)) from exc
    reader.done()
    if canonical_key(g) != key:
        raise KeyDecodeError("key is not in canonical form")
    return g


def power(g: GroupElement, k: int) -> GroupElement:
    """g multiplied with itself k times, by repeated squaring on |k|."""
    if k < 0:
        g, k = g.inverse(), -k
    result = g.identity()
    base = g
    while k:
        if k & 1:
            result = result * base
        k >>= 1
        if k:
            base = base * base
    return result


def commutator(g: GroupElement, h: GroupElement) -> GroupElement:
    """[g, h] = g h g^-1 h^-1."""
    check_same_engine(g, h)
    return g * h * g.inverse() * h.inverse()


def commutes(g: GroupElement, h: GroupElement) -> bool:
    # Same predicate as commutator(g, h).is_identity(), without inverses.
    check_same_engine(g, h)
    return g * h == h * g


def relation_search(g: GroupElement, h: GroupElement, bound: int) -> list[tuple[int, int]]:
    """All (p, q) with 0 < max(|p|, |q|) <= bound and g^p h^q = 1.

    Sanity oracle only: an empty result means no relation inside the box,
    not that g and h are independent.
    """
    check_same_engine(g, h)
    if bound < 1:
        raise ValueError("bound must be positive")
    g_pows = _power_table(g, bound)
    h_pows = _power_table(h, bound)
    # g^p h^q = 1 iff g^p = h^-q, so match powers by value instead of multiplying.
    by_value: dict[GroupElement, list[int]] = {}
    for q, hq in h_pows.items():
        by_value.setdefault(hq, []).append(-q)
    found = []
    for p in range(-bound, bound + 1):
        for q in sorted(by_value.get(g_pows[p], ())):
            if p or q:
                found.append((p, q))
    return found


def _power_table(g: GroupElement, bound: int) -> dict[int, GroupElement]:
    table = {0: g.identity()}
    g_inv = g.inverse()
    for k in range(1, bound + 1):
        table[k] = table[k - 1] * g
        table[-k] = table[-k + 1] * g_inv
    return table
