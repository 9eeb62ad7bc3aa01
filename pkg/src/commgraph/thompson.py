"""Thompson's group F as piecewise-linear homeomorphisms of [0, 1].

Breakpoints are dyadic rationals (kept as :class:`fractions.Fraction` with a
power-of-two denominator) and every slope is a power of two.

``compose(f, g)`` is ordinary function composition ``f(g(t))``.  The group
product is the other way round: ``f * g`` applies ``f`` first.  With the
standard map x_0 (breakpoints 0, 1/2, 3/4, 1 sent to 0, 1/4, 1/2, 1) this is
the orientation in which ``x_{j+1} = x_i x_j x_i^-1`` holds for all i < j.
"""

from __future__ import annotations

import bisect
from fractions import Fraction
from functools import lru_cache

from commgraph.engine import GroupElement, ByteReader, encode_int, encode_uint, register_decoder

ZERO = Fraction(0)
ONE = Fraction(1)


def dyadic(numerator: int, exponent: int = 0) -> Fraction:
    """numerator / 2**exponent."""
    if exponent < 0:
        raise ValueError("exponent must be non-negative")
    return Fraction(numerator, 1 << exponent)


def dyadic_parts(q: Fraction) -> tuple[int, int]:
    """(numerator, exponent) in lowest terms."""
    q = Fraction(q)
    den = q.denominator
    if den & (den - 1):
        raise ValueError(f"{q} is not a dyadic rational")
    return q.numerator, den.bit_length() - 1


def _is_power_of_two(q: Fraction) -> bool:
    if q <= 0:
        return False
    num, den = q.numerator, q.denominator
    return (num == 1 or den == 1) and not num & (num - 1) and not den & (den - 1)


def _log2(q: Fraction) -> int:
    return q.numerator.bit_length() - 1 if q.denominator == 1 else -(q.denominator.bit_length() - 1)


def normalize(breakpoints, values) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
    """Validate raw PL data and merge collinear segments.

    Raises ValueError for non-monotone, non-dyadic, or non-power-of-two slope
    input, or when the endpoints are not fixed.
    """
    xs = [Fraction(x) for x in breakpoints]
    ys = [Fraction(y) for y in values]
    if len(xs) != len(ys) or len(xs) < 2:
        raise ValueError("need matching breakpoint/value lists of length >= 2")
    if xs[0] != 0 or xs[-1] != 1 or ys[0] != 0 or ys[-1] != 1:
        raise ValueError("endpoints must be fixed: 0 -> 0 and 1 -> 1")
    for q in xs + ys:
        dyadic_parts(q)
    slopes = []
    for i in range(len(xs) - 1):
        dx, dy = xs[i + 1] - xs[i], ys[i + 1] - ys[i]
        if dx <= 0 or dy <= 0:
            raise ValueError("breakpoints and values must be strictly increasing")
        s = dy / dx
        if not _is_power_of_two(s):
            raise ValueError(f"slope {s} is not a power of 2")
        slopes.append(s)
    keep = [0] + [i for i in range(1, len(xs) - 1) if slopes[i - 1] != slopes[i]] + [len(xs) - 1]
    return tuple(xs[i] for i in keep), tuple(ys[i] for i in keep)


class PLMap(GroupElement):
    """Element of F in canonical breakpoint form.

    Payload: uint breakpoint count k, then k (int numerator, uint exponent)
    pairs for the breakpoints, then k pairs for the values.
    """

    engine = "thompson"
    __slots__ = ("xs", "ys")

    def __init__(self, breakpoints, values):
        self.xs, self.ys = normalize(breakpoints, values)

    @classmethod
    def _trusted(cls, xs, ys):
        f = cls.__new__(cls)
        f.xs, f.ys = xs, ys
        return f

    def _canon(self):
        return (self.xs, self.ys)

    def __call__(self, t):
        return evaluate(self, t)

    def __mul__(self, other):
        if not isinstance(other, PLMap):
            return NotImplemented
        return compose(other, self)

    def inverse(self):
        return inverse(self)

    def identity(self):
        return IDENTITY

    def payload(self) -> bytes:
        out = [encode_uint(len(self.xs))]
        for q in self.xs + self.ys:
            num, exp = dyadic_parts(q)
            out.append(encode_int(num) + encode_uint(exp))
        return b"".join(out)

    def slopes(self) -> list[Fraction]:
        return [(self.ys[i + 1] - self.ys[i]) / (self.xs[i + 1] - self.xs[i]) for i in range(len(self.xs) - 1)]

    def to_strings(self) -> dict:
        return {"breakpoints": [str(x) for x in self.xs], "values": [str(y) for y in self.ys]}

    def __repr__(self):
        pts = ", ".join(f"{x}->{y}" for x, y in zip(self.xs, self.ys))
        return f"PLMap({pts})"


IDENTITY = PLMap._trusted((ZERO, ONE), (ZERO, ONE))


def evaluate(f: PLMap, t) -> Fraction:
    t = Fraction(t)
    if not 0 <= t <= 1:
        raise ValueError("t must lie in [0, 1]")
    return _eval(f.xs, f.ys, t)


def _eval(xs, ys, t):
    i = bisect.bisect_right(xs, t) - 1
    if i >= len(xs) - 1:
        return ys[-1]
    return ys[i] + (t - xs[i]) * (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i])


def inverse(f: PLMap) -> PLMap:
    return PLMap._trusted(f.ys, f.xs)


def compose(f: PLMap, g: PLMap) -> PLMap:
    """f o g (apply g first)."""
    # Breakpoints of f o g: those of g, plus g-preimages of those of f.
    pts = sorted(set(g.xs) | {_eval(g.ys, g.xs, y) for y in f.xs})
    vals = [_eval(f.xs, f.ys, _eval(g.xs, g.ys, t)) for t in pts]
    xs, ys = _merge_collinear(pts, vals)
    return PLMap._trusted(xs, ys)


def _merge_collinear(xs, ys):
    keep_x, keep_y = [xs[0]], [ys[0]]
    for i in range(1, len(xs) - 1):
        left = (ys[i] - ys[i - 1]) / (xs[i] - xs[i - 1])
        right = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i])
        if left != right:
            keep_x.append(xs[i])
            keep_y.append(ys[i])
    keep_x.append(xs[-1])
    keep_y.append(ys[-1])
    return tuple(keep_x), tuple(keep_y)


X0 = PLMap([0, dyadic(1, 1), dyadic(3, 2), 1], [0, dyadic(1, 2), dyadic(1, 1), 1])
# Identity on [0, 1/2], half-scale copy of x_0 on [1/2, 1].
X1 = PLMap(
    [0, dyadic(1, 1), dyadic(3, 2), dyadic(7, 3), 1],
    [0, dyadic(1, 1), dyadic(5, 3), dyadic(3, 2), 1],
)


@lru_cache(maxsize=None)
def generator_x(j: int) -> PLMap:
    """x_j; for j >= 2, x_j = x_0^(j-1) x_1 x_0^(1-j)."""
    if j < 0:
        raise ValueError("generator index must be non-negative")
    if j == 0:
        return X0
    if j == 1:
        return X1
    # Built recursively so x_{j} = x_0 x_{j-1} x_0^-1 by construction.
    prev = generator_x(j - 1)
    return X0 * prev * inverse(X0)


def slope_hom(f: PLMap) -> tuple[int, int]:
    """(log2 slope at 0+, log2 slope at 1-): a homomorphism F -> Z^2."""
    s = f.slopes()
    return _log2(s[0]), _log2(s[-1])


def x0_x1inv() -> PLMap:
    """The element x_0 x_1^-1 of the enlarged generating set S'.

    Read as a composition of maps, x_0 o x_1^-1 (apply x_1^-1 first); in the
    group product above that is ``x_1^-1 * x_0``.  It is the identity on
    [3/4, 1] and so commutes with every x_j, j >= 2.  The left-first product
    ``x_0 * x_1^-1`` commutes with x_j only for j >= 3.
    """
    return compose(X0, inverse(X1))


X0X1INV_LABEL = "x0x1^-1"


def _decode(reader: ByteReader) -> PLMap:
    k = reader.count(per_item=4)
    pts = []
    for _ in range(2 * k):
        num = reader.int()
        exp = reader.uint()
        if exp > 8 * len(reader.data):
            raise ValueError("exponent out of range")
        pts.append(dyadic(num, exp))
    return PLMap(pts[:k], pts[k:])


register_decoder("thompson", _decode)

