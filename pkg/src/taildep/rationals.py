"""Exact rational arithmetic backend.

Everything user-facing in this package that claims exactness is carried by
the rational type `Rat` defined here.  We prefer ``gmpy2.mpq`` (C-backed,
roughly 5x faster than ``fractions.Fraction`` on the subset-lattice
transforms and the simplex pivots) and fall back to the stdlib ``Fraction``
when gmpy2 is not installed.  Both types interoperate with each other and
with ints, so callers may pass either.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence, Union

try:
    from gmpy2 import mpq as _mpq

    Rat = _mpq
    _HAVE_GMPY2 = True
except ImportError:  # pragma: no cover - exercised only without gmpy2
    Rat = Fraction
    _HAVE_GMPY2 = False

RatLike = Union[int, str, Fraction, "Rat"]

ZERO = Rat(0)
ONE = Rat(1)


def rat(value: RatLike, den: int | None = None) -> Rat:
    """Coerce ``value`` (int, Fraction, mpq, or string) to a `Rat`.

    Strings accept both "num/den" and decimal forms ("3/2", "0.25", "7");
    decimal strings are parsed exactly in base 10.
    """
    if den is not None:
        return Rat(value, den)
    if isinstance(value, str):
        return Rat(Fraction(value.strip()))
    if isinstance(value, float):
        raise TypeError(
            "refusing to coerce float to exact rational; pass a string, "
            "Fraction, or int instead"
        )
    return Rat(value)


def rat_str(q: RatLike) -> str:
    """Serialize exactly as "num/den" (always with an explicit denominator)."""
    q = rat(q)
    return f"{q.numerator}/{q.denominator}"


def as_fraction(q: RatLike) -> Fraction:
    q = rat(q)
    return Fraction(int(q.numerator), int(q.denominator))


def common_denominator(values: Iterable[RatLike]) -> int:
    return reduce(math.lcm, (int(rat(v).denominator) for v in values), 1)


def to_common_numerators(values: Sequence[RatLike]) -> tuple[list, int]:
    """Return (numerators over a common denominator D, D).

    Addition-only lattice transforms run much faster on plain integers than
    on rationals, and they preserve any common denominator.  Denominators
    in real inputs repeat heavily, so the per-denominator scale factors are
    computed once each.
    """
    dens = {v.denominator for v in values}
    den = reduce(math.lcm, (int(d) for d in dens), 1)
    # plain Python ints: numpy object arrays build ~50x faster from them
    # than from gmpy2 integers, and the butterflies add them just as fast
    scale = {d: den // int(d) for d in dens}
    return [int(v.numerator) * scale[v.denominator] for v in values], den


def from_common_numerators(nums: Sequence, den: int) -> list:
    return [Rat(n, den) for n in nums]
