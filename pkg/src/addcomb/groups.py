"""Finite abelian groups presented as products of cyclic factors.

A group is a product Z/n1 x ... x Z/nr. Elements and characters share one
index space in [0, N): the digits of an index in the mixed radix (n1, ..., nr)
are its coordinates, most significant digit first. The canonical pairing is

    gamma(x) = exp(2*pi*i * sum_j gamma_j * x_j / n_j),

which identifies the group with its dual once and for all.
"""

from __future__ import annotations

import base64
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Group",
    "GSet",
    "build_group",
    "char_eval",
    "dilate_set",
    "half_character",
    "gset_from_json",
    "gset_to_json",
    "parse_group_spec",
]

MAX_ORDER_DEFAULT = 1 << 24


class Group:
    """A finite abelian group in fixed coordinates, with cached digit tables."""

    __slots__ = ("factors", "order", "_digits", "_phase_units")

    def __init__(self, factors: tuple[int, ...]):
        self.factors = tuple(int(n) for n in factors)
        order = 1
        for n in self.factors:
            order *= n
        self.order = order
        self._digits = None
        self._phase_units = None

    @property
    def rank(self) -> int:
        return len(self.factors)

    @property
    def odd_order(self) -> bool:
        return self.order % 2 == 1

    def __eq__(self, other) -> bool:
        return isinstance(other, Group) and self.factors == other.factors

    def __hash__(self) -> int:
        return hash(self.factors)

    def __repr__(self) -> str:
        return f"Group{self.factors}"

    # -- coordinates ------------------------------------------------------

    def digit_table(self) -> np.ndarray:
        """All coordinate digits, shape (rank, order), computed once."""
        if self._digits is None:
            idx = np.arange(self.order, dtype=np.int64)
            self._digits = np.array(
                np.unravel_index(idx, self.factors), dtype=np.int64
            ).reshape(self.rank, self.order)
        return self._digits

    def digits(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        return np.array(np.unravel_index(x, self.factors), dtype=np.int64)

    def index(self, digits) -> np.ndarray:
        d = np.asarray(digits, dtype=np.int64)
        mods = np.array(self.factors, dtype=np.int64).reshape((self.rank,) + (1,) * (d.ndim - 1))
        res = np.asarray(np.ravel_multi_index(tuple(d % mods), self.factors), dtype=np.int64)
        return int(res) if res.ndim == 0 else res

    # -- arithmetic on indices --------------------------------------------

    def add(self, x, y):
        """Index of x + y; accepts scalars or equal-shape arrays."""
        return self.index(self.digits(x) + self.digits(y))

    def neg(self, x):
        return self.index(-self.digits(x))

    def sub(self, x, y):
        return self.index(self.digits(x) - self.digits(y))

    def scale(self, k: int, x):
        """Index of k*x for an integer k."""
        d = self.digits(x)
        mods = np.array(self.factors, dtype=np.int64).reshape((self.rank,) + (1,) * (d.ndim - 1))
        return self.index((int(k) % mods) * d)

    # -- pairing -----------------------------------------------------------

    def phase_units(self) -> np.ndarray:
        """Per-coordinate weights N/n_j, so the pairing phase is an integer mod N."""
        if self._phase_units is None:
            self._phase_units = np.array(
                [self.order // n for n in self.factors], dtype=np.int64
            )
        return self._phase_units

    def pairing_phase(self, gamma, x):
        """Integer K in [0, N) with gamma(x) = exp(2*pi*i*K/N)."""
        dg = self.digits(gamma)
        dx = self.digits(x)
        nd = max(dg.ndim, dx.ndim)
        if dg.ndim < nd:
            dg = dg.reshape(dg.shape + (1,) * (nd - dg.ndim))
        if dx.ndim < nd:
            dx = dx.reshape(dx.shape + (1,) * (nd - dx.ndim))
        units = self.phase_units().reshape((self.rank,) + (1,) * (nd - 1))
        k = np.sum((dg * dx % self.order) * units % self.order, axis=0) % self.order
        k = np.asarray(k, dtype=np.int64)
        return int(k) if k.ndim == 0 else k

    def phase_column(self, gamma) -> np.ndarray:
        """Pairing phases K(gamma, x) for all x, an int64 vector of length N."""
        dg = self.digits(gamma).reshape(self.rank, 1)
        units = self.phase_units().reshape(self.rank, 1)
        return np.sum(dg * self.digit_table() % self.order * units % self.order, axis=0) % self.order

    def char_matrix_column(self, gamma) -> np.ndarray:
        """Values gamma(x) for all x, as a complex vector of length N."""
        return np.exp(2j * np.pi * self.phase_column(gamma) / self.order)


def build_group(factors, max_order: int = MAX_ORDER_DEFAULT) -> Group:
    """Validate cyclic factors and build the group."""
    factors = tuple(int(n) for n in factors)
    if not factors:
        raise ValueError("need at least one cyclic factor")
    for n in factors:
        if n < 2:
            raise ValueError(f"cyclic factor must be at least 2, got {n}")
    order = 1
    for n in factors:
        order *= n
    if order > max_order:
        raise ValueError(f"group order {order} exceeds the cap {max_order}")
    return Group(factors)


def char_eval(group: Group, gamma: int, x: int) -> complex:
    """The pairing gamma(x) as a complex number of modulus 1."""
    k = group.pairing_phase(gamma, x)
    return complex(np.exp(2j * np.pi * k / group.order))


def half_character(group: Group, gamma: int) -> int:
    """The unique gamma' with 2*gamma' = gamma; requires odd group order."""
    if not group.odd_order:
        raise ValueError(f"halving needs odd order, group has order {group.order}")
    d = group.digits(gamma)
    halves = np.array([pow(2, -1, n) for n in group.factors], dtype=np.int64)
    out = (d * halves) % np.array(group.factors, dtype=np.int64)
    return int(np.ravel_multi_index(tuple(out), group.factors))


@dataclass(frozen=True)
class GSet:
    """A subset of a group (or of its dual), stored as a membership bitmap."""

    group: Group
    bitmap: np.ndarray = field(compare=False)

    def __post_init__(self):
        bm = np.asarray(self.bitmap, dtype=bool)
        if bm.shape != (self.group.order,):
            raise ValueError(
                f"bitmap length {bm.shape} does not match group order {self.group.order}"
            )
        object.__setattr__(self, "bitmap", bm)

    @classmethod
    def from_indices(cls, group: Group, indices) -> "GSet":
        bm = np.zeros(group.order, dtype=bool)
        idx = np.asarray(list(indices), dtype=np.int64)
        if idx.size:
            if idx.min() < 0 or idx.max() >= group.order:
                raise ValueError("set element index out of range")
            bm[idx] = True
        return cls(group, bm)

    @classmethod
    def full(cls, group: Group) -> "GSet":
        return cls(group, np.ones(group.order, dtype=bool))

    @classmethod
    def empty(cls, group: Group) -> "GSet":
        return cls(group, np.zeros(group.order, dtype=bool))

    @property
    def indices(self) -> np.ndarray:
        return np.flatnonzero(self.bitmap).astype(np.int64)

    @property
    def size(self) -> int:
        return int(self.bitmap.sum())

    @property
    def density(self) -> float:
        return self.size / self.group.order

    def __contains__(self, x: int) -> bool:
        return bool(self.bitmap[x])

    def __iter__(self):
        return iter(self.indices.tolist())

    def __len__(self) -> int:
        return self.size

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GSet)
            and self.group == other.group
            and bool(np.array_equal(self.bitmap, other.bitmap))
        )

    def union(self, other: "GSet") -> "GSet":
        return GSet(self.group, self.bitmap | other.bitmap)

    def intersect(self, other: "GSet") -> "GSet":
        return GSet(self.group, self.bitmap & other.bitmap)

    def difference(self, other: "GSet") -> "GSet":
        return GSet(self.group, self.bitmap & ~other.bitmap)

    def issubset(self, other: "GSet") -> bool:
        return not np.any(self.bitmap & ~other.bitmap)

    def translate(self, t: int) -> "GSet":
        idx = self.indices
        if idx.size == 0:
            return self
        return GSet.from_indices(self.group, self.group.add(idx, np.full(idx.shape, t, dtype=np.int64)))

    def negate(self) -> "GSet":
        idx = self.indices
        if idx.size == 0:
            return self
        return GSet.from_indices(self.group, self.group.neg(idx))

    def is_symmetric(self) -> bool:
        return self == self.negate()

    def sumset(self, other: "GSet") -> "GSet":
        """The set {a + b : a in self, b in other}."""
        a = self.indices
        b = other.indices
        if a.size == 0 or b.size == 0:
            return GSet.empty(self.group)
        if a.size > b.size:
            a, b = b, a
        out = np.zeros(self.group.order, dtype=bool)
        for s in a.tolist():
            out[self.group.add(b, np.full(b.shape, s, dtype=np.int64))] = True
        return GSet(self.group, out)

    def iterated_sumset(self, t: int) -> "GSet":
        """The t-fold sumset; t = 0 gives {0}."""
        if t < 0:
            raise ValueError(f"fold count must be nonnegative, got {t}")
        acc = GSet.from_indices(self.group, [0])
        for _ in range(t):
            acc = acc.sumset(self)
        return acc


def dilate_set(S: GSet, k: int, strict: bool = False) -> GSet:
    """The image k*S. With strict set, require x -> k*x to be a bijection."""
    g = S.group
    if strict:
        for n in g.factors:
            if math.gcd(k, n) != 1:
                raise ValueError(f"dilation by {k} is not invertible mod factor {n}")
    idx = S.indices
    if idx.size == 0:
        return S
    return GSet.from_indices(g, g.scale(k, idx))


def parse_group_spec(spec: str, max_order: int = MAX_ORDER_DEFAULT) -> Group:
    """Build a group from a compact string.

    Accepted forms: "zn:101" for Z/101, "f2:8" for (Z/2)^8, "f3:4" for
    (Z/3)^4, and "factors:2,3,5" for an explicit product.
    """
    head, sep, tail = spec.partition(":")
    if not sep:
        raise ValueError(f"group spec {spec!r} has no ':'")
    try:
        if head == "zn":
            return build_group([int(tail)], max_order)
        if head in ("f2", "f3"):
            p = int(head[1])
            return build_group([p] * int(tail), max_order)
        if head == "factors":
            return build_group([int(t) for t in tail.split(",")], max_order)
    except ValueError as e:
        raise ValueError(f"bad group spec {spec!r}: {e}") from None
    raise ValueError(f"unknown group spec kind {head!r}")


# -- serialization ----------------------------------------------------------

def gset_to_json(S: GSet) -> dict:
    """JSON form: explicit index list when small, base64 bitmap otherwise."""
    if S.size <= 512:
        payload = [int(i) for i in S.indices]
    else:
        payload = base64.b64encode(np.packbits(S.bitmap).tobytes()).decode("ascii")
    return {"factors": list(S.group.factors), "set": payload}


def gset_from_json(obj: dict, group: Group | None = None) -> GSet:
    """Read a set from its JSON form, validating against group if given."""
    if "factors" not in obj or "set" not in obj:
        raise ValueError("set JSON needs 'factors' and 'set' fields")
    g = build_group(obj["factors"])
    if group is not None and group != g:
        raise ValueError(f"set factors {g.factors} do not match group {group.factors}")
    payload = obj["set"]
    if isinstance(payload, str):
        raw = np.frombuffer(base64.b64decode(payload), dtype=np.uint8)
        bits = np.unpackbits(raw)[: g.order].astype(bool)
        return GSet(g, bits)
    return GSet.from_indices(g, payload)
