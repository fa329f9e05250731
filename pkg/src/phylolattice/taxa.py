"""Labeled taxa universes and bitmask faces.

A universe fixes an ordering of taxon names; every face (non-empty subset
of taxa) is stored as an integer bitmask over that ordering.  All set
algebra downstream is plain integer bit arithmetic.
"""

from __future__ import annotations

from typing import Iterable, Iterator


def bits(mask: int) -> Iterator[int]:
    """Yield set bit positions of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class TaxaSet:
    """Ordered universe of distinct taxon names.

    The construction order is canonical: it fixes the bit position of each
    taxon and thereby the ordering of every serialized artifact built on
    top of this universe.
    """

    __slots__ = ("labels", "_index")

    def __init__(self, labels: Iterable[str]):
        labels = tuple(labels)
        if not labels:
            raise ValueError("taxa set must be non-empty")
        index: dict[str, int] = {}
        for i, name in enumerate(labels):
            if not isinstance(name, str) or not name:
                raise ValueError(f"taxon names must be non-empty strings, got {name!r}")
            if name in index:
                raise ValueError(f"duplicate taxon name {name!r}")
            index[name] = i
        self.labels = labels
        self._index = index

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self) -> Iterator[str]:
        return iter(self.labels)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, TaxaSet) and self.labels == other.labels

    def __hash__(self) -> int:
        return hash(self.labels)

    def __repr__(self) -> str:
        return f"TaxaSet({list(self.labels)!r})"

    @property
    def full_mask(self) -> int:
        return (1 << len(self.labels)) - 1

    def position(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown taxon {name!r}") from None

    def singleton(self, name: str) -> int:
        return 1 << self.position(name)

    def mask_of(self, names: Iterable[str]) -> int:
        mask = 0
        for name in names:
            mask |= 1 << self.position(name)
        return mask

    def names_of(self, mask: int) -> tuple[str, ...]:
        """Taxon names of a face mask, in universe order."""
        self.check_face(mask)
        return tuple(self.labels[i] for i in bits(mask))

    def check_face(self, mask: int) -> int:
        """Validate a non-empty face mask over this universe."""
        if not isinstance(mask, int) or mask <= 0:
            raise ValueError(f"face must be a non-empty bitmask, got {mask!r}")
        if mask & ~self.full_mask:
            raise ValueError(f"face {bin(mask)} has bits outside the universe")
        return mask
