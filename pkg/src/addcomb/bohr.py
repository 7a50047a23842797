"""Bohr sets: construction, dilation, regularity, convolution envelopes.

A Bohr set is cut out by frequencies gamma and widths nu(gamma):

    B = {x : |1 - gamma(x)| <= nu(gamma) for every gamma},

where |1 - gamma(x)| = 2 sin(pi*K/N) for the integer pairing phase K.
Membership is decided by a guarded float comparison; within 1e-12 of a
width threshold the sign is settled in high-precision arithmetic, so
realized sets are stable across platforms.

Every query about dilates runs off the per-element statistic

    m(x) = max_gamma |1 - gamma(x)| / nu(gamma),

since x lies in B_rho exactly when m(x) <= rho.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .groups import Group, GSet, build_group
from .harmonics import GFunction, convolve, iterated_convolution, set_measure

__all__ = [
    "BohrSet",
    "RegularityReport",
    "EnvelopeReport",
    "bohr_build",
    "dilate",
    "is_regular",
    "find_regular_dilate",
    "reg_conv_defect",
    "envelope_check",
    "dilate_size_bound",
    "width_size_bound",
    "bohr_to_json",
    "bohr_from_json",
]

TIE_GUARD = 1e-12


def _chord_exact_sign(K: int, N: int, w: float) -> int:
    """Sign of 2*sin(pi*K/N) - w, settled with 60 digits of precision."""
    from fractions import Fraction

    import sympy

    lhs = 2 * sympy.sin(sympy.pi * sympy.Rational(int(K), int(N)))
    val = (lhs - sympy.Rational(Fraction(w))).evalf(60)
    if abs(val) < sympy.Float(10) ** (-50):
        return 0
    return 1 if val > 0 else -1


class BohrSet:
    """A Bohr set with cached membership statistics."""

    def __init__(self, group: Group, frequencies, widths):
        self.group = group
        self.frequencies = tuple(int(g) for g in frequencies)
        self.widths = tuple(float(w) for w in widths)
        if not self.frequencies:
            raise ValueError("a Bohr set needs at least one frequency")
        if len(self.widths) != len(self.frequencies):
            raise ValueError(
                f"{len(self.frequencies)} frequencies but {len(self.widths)} widths"
            )
        for w in self.widths:
            if not (0.0 <= w <= 2.0):
                raise ValueError(f"width {w} outside [0, 2]")
        self._m = None
        self._m_order = None
        self._m_sorted = None
        self._realized = None

    @property
    def rank(self) -> int:
        return len(self.frequencies)

    def __repr__(self) -> str:
        return f"BohrSet(rank={self.rank}, group={self.group}, size={self.size})"

    # -- membership statistic ------------------------------------------------

    def _stat(self) -> np.ndarray:
        if self._m is None:
            n = self.group.order
            m = np.zeros(n)
            for gamma, w in zip(self.frequencies, self.widths):
                if w == 2.0:
                    # saturated width: the frequency constrains nothing,
                    # at this or any other dilation
                    continue
                K = self.group.phase_column(gamma)
                chord = 2.0 * np.sin(np.pi * K / n)
                if w == 0.0:
                    r = np.where(K == 0, 0.0, np.inf)
                else:
                    r = chord / w
                np.maximum(m, r, out=m)
            self._m = m
            self._m_order = np.argsort(m, kind="stable")
            self._m_sorted = m[self._m_order]
        return self._m

    def _member_exact(self, x: int, t: float, strict: bool = False) -> bool:
        """Membership of x in B_t, settling near-threshold chords exactly."""
        n = self.group.order
        for gamma, w in zip(self.frequencies, self.widths):
            if w == 2.0:
                continue
            wt = min(t * w, 2.0)
            K = int(self.group.pairing_phase(gamma, x))
            if K == 0:
                continue
            chord = 2.0 * math.sin(math.pi * K / n)
            if abs(chord - wt) > TIE_GUARD:
                if chord > wt:
                    return False
                continue
            sign = _chord_exact_sign(K, n, wt)
            if sign > 0 or (strict and sign == 0):
                return False
        return True

    def count_dilate(self, t: float, strict: bool = False) -> int:
        """|B_t| (or the strict count with every m(x) = t point dropped)."""
        self._stat()
        lo = np.searchsorted(self._m_sorted, t - TIE_GUARD, side="left")
        hi = np.searchsorted(self._m_sorted, t + TIE_GUARD, side="right")
        count = int(lo)
        for x in self._m_order[lo:hi].tolist():
            if self._member_exact(int(x), t, strict=strict):
                count += 1
        return count

    def realize_dilate(self, t: float) -> GSet:
        """The realized set of B_t as a GSet."""
        m = self._stat()
        bitmap = m <= t - TIE_GUARD
        border = np.flatnonzero((m > t - TIE_GUARD) & (m <= t + TIE_GUARD))
        for x in border.tolist():
            if self._member_exact(int(x), t):
                bitmap[x] = True
        return GSet(self.group, bitmap)

    @property
    def realized(self) -> GSet:
        if self._realized is None:
            self._realized = self.realize_dilate(1.0)
        return self._realized

    @property
    def size(self) -> int:
        return self.realized.size

    def breakpoints(self, lo: float, hi: float) -> np.ndarray:
        """Distinct m values in [lo, hi]: the thresholds where B_t changes."""
        self._stat()
        i = np.searchsorted(self._m_sorted, lo, side="left")
        j = np.searchsorted(self._m_sorted, hi, side="right")
        return np.unique(self._m_sorted[i:j])


def bohr_build(group: Group, frequencies, widths) -> BohrSet:
    """Build a Bohr set and realize it."""
    B = BohrSet(group, frequencies, widths)
    B.realized  # force enumeration so invalid input fails here
    return B


def dilate(B: BohrSet, rho: float) -> BohrSet:
    """The Bohr set with every width scaled by rho (clipped at 2)."""
    if rho <= 0:
        raise ValueError(f"dilation factor must be positive, got {rho}")
    return bohr_build(B.group, B.frequencies, [min(rho * w, 2.0) for w in B.widths])


# -- regularity ---------------------------------------------------------------

@dataclass(frozen=True)
class RegularityReport:
    rho: float
    rank: int
    size: int
    worst_ratio: float
    passed: bool
    checked: int


def is_regular(B: BohrSet, rho: float = 1.0) -> RegularityReport:
    """Check (1-100d|kappa|)|B_rho| <= |B_{rho(1+kappa)}| <= (1+100d|kappa|)|B_rho|.

    The bound is tested for all |kappa| <= 1/100d: at every threshold
    where the realized set changes (counting both sides of the jump),
    on a uniform 64-point grid, and at the window endpoints.
    """
    d = B.rank
    window = 1.0 / (100.0 * d)
    nb = B.count_dilate(rho)
    kappas = {0.0, window, -window}
    kappas.update(float(k) for k in np.linspace(-window, window, 64))
    lo_m = rho * (1.0 - window) - TIE_GUARD
    hi_m = rho * (1.0 + window) + TIE_GUARD
    for m in B.breakpoints(lo_m, hi_m):
        k = float(m) / rho - 1.0
        if -window <= k <= window:
            kappas.add(k)
    worst = 0.0
    checked = 0
    passed = True
    for k in sorted(kappas):
        for strict in (False, True):
            c = B.count_dilate(rho * (1.0 + k), strict=strict)
            checked += 1
            lo = (1.0 - 100.0 * d * abs(k)) * nb
            hi = (1.0 + 100.0 * d * abs(k)) * nb
            if not (lo - 1e-9 <= c <= hi + 1e-9):
                passed = False
            if k != 0.0 and nb > 0:
                ratio = abs(c - nb) / (100.0 * d * abs(k) * nb)
                worst = max(worst, ratio)
    return RegularityReport(
        rho=rho, rank=d, size=nb, worst_ratio=worst, passed=passed, checked=checked
    )


def find_regular_dilate(B: BohrSet, refine_cap: int = 4) -> float:
    """Smallest rho in [1/2, 1] on the search grid with B_rho regular.

    The grid is the set of realized-set thresholds in [1/2, 1] plus a
    uniform grid, refined up to refine_cap times if nothing passes. The
    winner is re-verified on a freshly built dilate before returning.
    """
    base = set(float(m) for m in B.breakpoints(0.5, 1.0))
    base.update((0.5, 1.0))
    grid_n = 65
    for _ in range(refine_cap):
        candidates = sorted(base | {float(r) for r in np.linspace(0.5, 1.0, grid_n)})
        for rho in candidates:
            if is_regular(B, rho=rho).passed and is_regular(dilate(B, rho)).passed:
                return rho
        grid_n = (grid_n - 1) * 4 + 1
    raise RuntimeError(
        f"no regular dilate found in [1/2, 1] after {refine_cap} grid refinements"
    )


# -- convolution lemmas ----------------------------------------------------------

def reg_conv_defect(B: BohrSet, mu: GFunction, rho: float) -> float:
    """||mu_B * mu - mu_B||_1 for a probability measure mu on B_rho.

    For regular B and rho <= 1/100d this is at most 200*rho*d.
    """
    d = B.rank
    if rho > 1.0 / (100.0 * d) + 1e-15:
        raise ValueError(f"rho = {rho} exceeds the regularity budget 1/(100d) = {1/(100*d)}")
    if mu.side != "physical" or mu.group != B.group:
        raise ValueError("mu must be a physical-side function on the same group")
    vals = np.real_if_close(mu.values.astype(complex))
    if np.any(np.abs(np.imag(vals)) > 1e-12) or np.any(np.real(vals) < -1e-12):
        raise ValueError("mu must be a nonnegative real measure")
    if abs(mu.mean() - 1) > 1e-9:
        raise ValueError(f"mu must have total mass 1, got {mu.mean()}")
    inside = B.realize_dilate(rho).bitmap
    if np.any((np.abs(mu.values) > 1e-12) & ~inside):
        raise ValueError("mu is not supported on B_rho")
    mu_b = set_measure(B.realized)
    diff = convolve(mu_b, mu) - mu_b
    return diff.lp_norm(1)


@dataclass(frozen=True)
class EnvelopeReport:
    ok: bool
    witness: int | None
    precondition_ok: bool
    max_excess: float


def envelope_check(
    B: BohrSet, rho: float, Bprime: GSet, L: int, c: float = 1 / 200
) -> EnvelopeReport:
    """Pointwise test of mu_B <= 2 * mu_{B_{1+L rho}} * mu_{B'}^{(L)}.

    B' must sit inside B_rho. The budget rho <= c/(L d) is reported but
    a failing budget does not stop the scan.
    """
    if L < 1:
        raise ValueError(f"fold count must be at least 1, got {L}")
    if not Bprime.issubset(B.realize_dilate(rho)):
        raise ValueError("B' is not contained in B_rho")
    precondition_ok = rho <= c / (L * B.rank) + 1e-15
    lhs = set_measure(B.realized).values
    outer = set_measure(B.realize_dilate(1.0 + L * rho))
    rhs = 2.0 * convolve(outer, iterated_convolution(set_measure(Bprime), L)).values
    excess = np.real(lhs) - np.real(rhs)
    tol = 1e-9 * max(1.0, float(np.max(np.abs(lhs))))
    bad = np.flatnonzero(excess > tol)
    witness = int(bad[0]) if bad.size else None
    return EnvelopeReport(
        ok=witness is None,
        witness=witness,
        precondition_ok=precondition_ok,
        max_excess=float(excess.max()),
    )


# -- size bounds -------------------------------------------------------------------

def dilate_size_bound(B: BohrSet, rho: float) -> float:
    """Lower bound (rho/4)^d |B| for |B_rho|, rho in (0, 1)."""
    if not (0 < rho < 1):
        raise ValueError(f"rho must lie in (0, 1), got {rho}")
    return (rho / 4.0) ** B.rank * B.size


def width_size_bound(B: BohrSet, new_widths) -> float:
    """Lower bound prod(nu'/4 nu) |B| for narrowed widths nu' <= nu."""
    bound = float(B.size)
    for w, wp in zip(B.widths, new_widths):
        if wp > w + 1e-15:
            raise ValueError(f"narrowed width {wp} exceeds original {w}")
        bound *= wp / (4.0 * w) if w > 0 else 1.0
    return bound


# -- serialization --------------------------------------------------------------------

def bohr_to_json(B: BohrSet) -> dict:
    return {
        "factors": list(B.group.factors),
        "frequencies": list(B.frequencies),
        "widths": list(B.widths),
        "rho": 1.0,
    }


def bohr_from_json(obj: dict) -> BohrSet:
    g = build_group(obj["factors"])
    B = BohrSet(g, obj["frequencies"], obj["widths"])
    rho = float(obj.get("rho", 1.0))
    if rho != 1.0:
        return dilate(B, rho)
    B.realized
    return B
