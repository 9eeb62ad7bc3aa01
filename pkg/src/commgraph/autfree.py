"""Free groups F_n as reduced words, and automorphisms of F_n by basis images.

Letters are non-zero ints: ``i`` is the basis letter x_i (1-based) and ``-i``
its inverse.  A word is a tuple of letters.
"""

from __future__ import annotations

import re
from collections import deque
from itertools import product as _cartesian

from commgraph.engine import GroupElement, ByteReader, encode_int, encode_uint, register_decoder
from commgraph.matrix import IntMatrix, determinant


def reduce(letters) -> tuple[int, ...]:
    """Free reduction; the result is the unique reduced form."""
    stack: list[int] = []
    for x in letters:
        if x == 0:
            raise ValueError("0 is not a letter")
        if stack and stack[-1] == -x:
            stack.pop()
        else:
            stack.append(x)
    return tuple(stack)


def invert_word(w) -> tuple[int, ...]:
    return tuple(-x for x in reversed(w))


def format_letter(x: int) -> str:
    return f"x{x}" if x > 0 else f"x{-x}^-1"


def format_word(w) -> str:
    return "*".join(format_letter(x) for x in w) if w else "1"


_LETTER_RE = re.compile(r"x(\d+)(\^-1)?$")


def parse_letter(text: str) -> int:
    m = _LETTER_RE.match(text.strip())
    if not m:
        raise ValueError(f"bad letter {text!r}")
    i = int(m.group(1))
    return -i if m.group(2) else i


def _check_letters(w, n: int) -> None:
    for x in w:
        if not 1 <= abs(x) <= n:
            raise ValueError(f"letter {x} out of range for rank {n}")


class Word(GroupElement):
    """Element of F_n.  Payload: uint rank, uint length, int letters."""

    engine = "word"
    __slots__ = ("letters", "n")

    def __init__(self, letters, n: int):
        if n < 1:
            raise ValueError("rank must be positive")
        w = reduce(letters)
        _check_letters(w, n)
        self.letters = w
        self.n = n

    def _canon(self):
        return (self.n, self.letters)

    def __mul__(self, other):
        if not isinstance(other, Word):
            return NotImplemented
        if other.n != self.n:
            raise ValueError("rank mismatch")
        return Word(self.letters + other.letters, self.n)

    def inverse(self):
        return Word(invert_word(self.letters), self.n)

    def identity(self):
        return Word((), self.n)

    def payload(self) -> bytes:
        return encode_uint(self.n) + _encode_letters(self.letters)

    def __len__(self):
        return len(self.letters)

    def __repr__(self):
        return f"Word({format_word(self.letters)}, n={self.n})"


def _encode_letters(w) -> bytes:
    return encode_uint(len(w)) + b"".join(encode_int(x) for x in w)


def _read_letters(reader: ByteReader) -> tuple[int, ...]:
    return tuple(reader.int() for _ in range(reader.count()))


def _substitute(images, w) -> tuple[int, ...]:
    out: list[int] = []
    for x in w:
        img = images[x - 1] if x > 0 else invert_word(images[-x - 1])
        for y in img:
            if out and out[-1] == -y:
                out.pop()
            else:
                out.append(y)
    return tuple(out)


class FreeAutomorphism(GroupElement):
    """Automorphism of F_n stored as the images of x_1..x_n.

    Products are functional: ``(f * g)(w) = f(g(w))``.  Every value built from
    Nielsen maps carries the images of its inverse; values built from bare
    images (e.g. decoded keys) compute the inverse by Nielsen reduction.

    Payload: uint rank, then each image as uint length + int letters.
    """

    engine = "automorphism"
    __slots__ = ("n", "images", "_inv")

    def __init__(self, images, n: int | None = None, inverse_images=None):
        images = tuple(reduce(w) for w in images)
        if n is None:
            n = len(images)
        if len(images) != n or n < 1:
            raise ValueError("need exactly n basis images")
        for w in images:
            _check_letters(w, n)
            if not w:
                raise ValueError("basis image is trivial; not an automorphism")
        self.n = n
        self.images = images
        self._inv = None
        if inverse_images is not None:
            self._inv = tuple(reduce(w) for w in inverse_images)
            if _compose_images(self.images, self._inv) != _identity_images(n):
                raise ValueError("supplied inverse images do not invert")

    @classmethod
    def identity_of_rank(cls, n: int) -> FreeAutomorphism:
        ident = _identity_images(n)
        return cls(ident, n, ident)

    def _canon(self):
        return (self.n, self.images)

    def __call__(self, w):
        return apply(self, w)

    def __mul__(self, other):
        if not isinstance(other, FreeAutomorphism):
            return NotImplemented
        return compose(self, other)

    def inverse(self):
        if self._inv is None:
            self._inv = invert_images(self.images, self.n)
        return FreeAutomorphism(self._inv, self.n, self.images)

    def identity(self):
        return FreeAutomorphism.identity_of_rank(self.n)

    def payload(self) -> bytes:
        return encode_uint(self.n) + b"".join(_encode_letters(w) for w in self.images)

    def __repr__(self):
        body = ", ".join(f"x{i + 1}->{format_word(w)}" for i, w in enumerate(self.images))
        return f"FreeAutomorphism({body})"


def _identity_images(n: int):
    return tuple((i,) for i in range(1, n + 1))


def _compose_images(f_images, g_images):
    return tuple(_substitute(f_images, w) for w in g_images)


def apply(f: FreeAutomorphism, w) -> Word:
    """Image of a word (a Word or a raw letter sequence) under f."""
    if isinstance(w, Word):
        if w.n != f.n:
            raise ValueError("rank mismatch")
        letters = w.letters
    else:
        letters = reduce(w)
        _check_letters(letters, f.n)
    return Word(_substitute(f.images, letters), f.n)


def compose(f: FreeAutomorphism, g: FreeAutomorphism) -> FreeAutomorphism:
    """f o g, i.e. apply g first."""
    if f.n != g.n:
        raise ValueError("rank mismatch")
    images = _compose_images(f.images, g.images)
    inv = None
    if f._inv is not None and g._inv is not None:
        inv = _compose_images(g._inv, f._inv)
    result = FreeAutomorphism.__new__(FreeAutomorphism)
    result.n, result.images, result._inv = f.n, images, inv
    return result


def nielsen(a: int, b: int, n: int) -> FreeAutomorphism:
    """The Nielsen map E_ab: a -> ab, every other basis letter fixed.

    For a = x^-1 the positive letter goes x -> b^-1 x, so that x^-1 -> x^-1 b.
    The inverse of E_ab is E_{a b^-1}.
    """
    _check_letters((a, b), n)
    if a == b or a == -b:
        raise ValueError("Nielsen map needs a != b and a != b^-1")
    return FreeAutomorphism(_nielsen_images(a, b, n), n, _nielsen_images(a, -b, n))


def _nielsen_images(a, b, n):
    images = list(_identity_images(n))
    i = abs(a)
    images[i - 1] = (i, b) if a > 0 else (-b, i)
    return tuple(images)


def signed_letters(n: int) -> list[int]:
    """x1, x1^-1, x2, x2^-1, ... (the order used for Nielsen labels)."""
    return [s * i for i in range(1, n + 1) for s in (1, -1)]


def nielsen_pairs(n: int) -> list[tuple[int, int]]:
    """All (a, b) with a != b, b^-1; there are 4n(n-1) of them."""
    return [(a, b) for a, b in _cartesian(signed_letters(n), repeat=2) if abs(a) != abs(b)]


def nielsen_label(a: int, b: int) -> str:
    return f"E[{format_letter(a)},{format_letter(b)}]"


def parse_nielsen_label(label: str) -> tuple[int, int]:
    m = re.fullmatch(r"E\[([^,\]]+),([^,\]]+)\]", label.strip())
    if not m:
        raise ValueError(f"bad Nielsen label {label!r}")
    return parse_letter(m.group(1)), parse_letter(m.group(2))


def gersten_condition(a: int, b: int, c: int, d: int) -> bool:
    """Sufficient condition for [E_ab, E_cd] = 1: a != c, d, d^-1 and b != c, c^-1."""
    return a != c and abs(a) != abs(d) and abs(b) != abs(c)


def abelianization(f: FreeAutomorphism) -> tuple[IntMatrix, int]:
    """Exponent-sum matrix (column j = abelianized image of x_j) and det sign."""
    n = f.n
    rows = [[0] * n for _ in range(n)]
    for j, w in enumerate(f.images):
        for x in w:
            rows[abs(x) - 1][j] += 1 if x > 0 else -1
    m = IntMatrix(rows)
    return m, determinant(m.rows)


def determinant_map(f: FreeAutomorphism) -> int:
    return abelianization(f)[1]


# -- inversion by Nielsen reduction ---------------------------------------


def invert_images(images, n: int):
    """Basis images of the inverse automorphism.

    The tuple of images is carried to a signed permutation of the basis by
    elementary Nielsen moves (w_i -> w_i w_j^e or w_j^e w_i) that never
    increase total length; a tuple is a basis exactly when this succeeds.
    The same moves applied to the identity tuple record the inverse.
    """
    tup = [tuple(w) for w in images]
    track = [(i,) for i in range(1, n + 1)]
    while True:
        if all(len(w) == 1 for w in tup):
            break
        move = _decreasing_move(tup) or _plateau_search(tup)
        if move is None:
            raise ValueError("images do not form a basis of the free group")
        for step in move:
            _apply_move(tup, step)
            _apply_move(track, step)
    inv = [None] * n
    for i, w in enumerate(tup):
        x = w[0]
        inv[abs(x) - 1] = track[i] if x > 0 else invert_word(track[i])
    if any(w is None for w in inv):
        raise ValueError("images do not form a basis of the free group")
    return tuple(inv)


def _moves(count: int):
    for i in range(count):
        for j in range(count):
            if i != j:
                for e in (1, -1):
                    yield (i, j, e, True)
                    yield (i, j, e, False)


def _moved(tup, step):
    i, j, e, right = step
    wj = tup[j] if e > 0 else invert_word(tup[j])
    return reduce(tup[i] + wj) if right else reduce(wj + tup[i])


def _apply_move(tup, step):
    tup[step[0]] = _moved(tup, step)


def _decreasing_move(tup):
    for step in _moves(len(tup)):
        if len(_moved(tup, step)) < len(tup[step[0]]):
            return [step]
    return None


def _plateau_search(tup):
    # Breadth-first over length-preserving moves until a decreasing move appears.
    start = tuple(tup)
    seen = {start}
    queue = deque([(start, [])])
    while queue:
        state, path = queue.popleft()
        for step in _moves(len(state)):
            new = _moved(state, step)
            old_len = len(state[step[0]])
            if len(new) < old_len:
                return path + [step]
            if len(new) == old_len:
                nxt = list(state)
                nxt[step[0]] = new
                nxt = tuple(nxt)
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append((nxt, path + [step]))
    return None


def _decode_word(reader: ByteReader) -> Word:
    n = reader.uint()
    letters = _read_letters(reader)
    return Word(letters, n)


def _decode_automorphism(reader: ByteReader) -> FreeAutomorphism:
    n = reader.count()
    images = [_read_letters(reader) for _ in range(n)]
    f = FreeAutomorphism(images, n)
    f.inverse()  # witnesses invertibility; raises on a non-basis
    return f


register_decoder("word", _decode_word)
register_decoder("automorphism", _decode_automorphism)
