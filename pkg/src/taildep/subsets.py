"""Bitmask conventions for subsets of {1, ..., p}.

Component with 1-based label ``k`` corresponds to bit ``k - 1``.  A nonempty
subset is any mask in [1, 2**p - 1]; the empty set (mask 0) is excluded from
stored coefficient arrays but appears transiently in lattice transforms.
"""

from __future__ import annotations

from typing import Iterable, Iterator


def mask_of(*labels: int) -> int:
    """Mask of a subset given 1-based component labels: mask_of(1, 3) == 0b101."""
    m = 0
    for k in labels:
        if k < 1:
            raise ValueError(f"component labels are 1-based, got {k}")
        m |= 1 << (k - 1)
    return m


def mask_from_labels(labels: Iterable[int]) -> int:
    return mask_of(*labels)


def labels_of(mask: int) -> tuple[int, ...]:
    """Sorted 1-based component labels of a mask."""
    out = []
    k = 1
    while mask:
        if mask & 1:
            out.append(k)
        mask >>= 1
        k += 1
    return tuple(out)


def bits_of(mask: int) -> tuple[int, ...]:
    """Sorted 0-based bit positions set in a mask."""
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def popcount(mask: int) -> int:
    return mask.bit_count()


def full_mask(p: int) -> int:
    return (1 << p) - 1


def complement(mask: int, p: int) -> int:
    return full_mask(p) ^ mask


def nonempty_subsets(p: int) -> Iterator[int]:
    return iter(range(1, 1 << p))


def submasks(mask: int) -> Iterator[int]:
    """All submasks of ``mask`` including 0 and ``mask`` itself."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def set_str(mask: int) -> str:
    """Human-readable subset, e.g. "{1,3}"."""
    return "{" + ",".join(str(k) for k in labels_of(mask)) + "}"
