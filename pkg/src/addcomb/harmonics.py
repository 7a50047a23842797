"""Fourier transforms, convolutions, norms, and dyadic pigeonholes.

Normalizations are fixed once: the physical side carries the compact
measure E_x = (1/N) sum_x, the dual side carries counting measure. So

    fhat(gamma) = E_x f(x) conj(gamma(x)),
    omega_check(x) = sum_gamma omega(gamma) gamma(x),

Parseval reads <f, g> = <fhat, ghat> with no stray factors, and the two
convolution conventions (E_y on the physical side, sum_lambda on the
dual side) are Fourier duals of each other.

Combinatorial counts (convolutions of integer-valued dual functions,
and the counting helpers) are computed in exact integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .groups import Group, GSet

__all__ = [
    "GFunction",
    "PigeonholeBand",
    "dft",
    "inverse_dft",
    "convolve",
    "cross_correlate",
    "iterated_convolution",
    "balanced_function",
    "set_measure",
    "count_convolve",
    "count_correlate",
    "dyadic_pigeonhole_l1",
    "dyadic_pigeonhole_l2",
    "gfunction_to_json",
    "gfunction_from_json",
]

PHYSICAL = "physical"
DUAL = "dual"

INT64_SAFE = 1 << 62


@dataclass(frozen=True)
class GFunction:
    """A dense function on a group, tagged with the side it lives on."""

    group: Group
    side: str
    values: np.ndarray = field(compare=False)

    def __post_init__(self):
        if self.side not in (PHYSICAL, DUAL):
            raise ValueError(f"side must be 'physical' or 'dual', got {self.side!r}")
        v = np.asarray(self.values)
        if v.shape != (self.group.order,):
            raise ValueError(
                f"values length {v.shape} does not match group order {self.group.order}"
            )
        object.__setattr__(self, "values", v)

    @classmethod
    def physical(cls, group: Group, values) -> "GFunction":
        return cls(group, PHYSICAL, np.asarray(values))

    @classmethod
    def dual(cls, group: Group, values) -> "GFunction":
        return cls(group, DUAL, np.asarray(values))

    @classmethod
    def indicator(cls, S: GSet, side: str = PHYSICAL) -> "GFunction":
        return cls(S.group, side, S.bitmap.astype(np.int64))

    # -- norms and inner products ------------------------------------------

    def lp_norm(self, p) -> float:
        a = np.abs(self.values.astype(complex))
        if p == np.inf or p == "inf":
            return float(a.max()) if a.size else 0.0
        s = float(np.sum(a ** p))
        if self.side == PHYSICAL:
            s /= self.group.order
        return s ** (1.0 / p)

    def inner(self, other: "GFunction") -> complex:
        _check_same(self, other)
        s = complex(np.sum(self.values.astype(complex) * np.conj(other.values.astype(complex))))
        if self.side == PHYSICAL:
            s /= self.group.order
        return s

    def mean(self) -> complex:
        """E_x f(x) on the physical side, plain sum on the dual side."""
        s = complex(np.sum(self.values.astype(complex)))
        return s / self.group.order if self.side == PHYSICAL else s

    # -- pointwise algebra ---------------------------------------------------

    def __add__(self, other: "GFunction") -> "GFunction":
        _check_same(self, other)
        return GFunction(self.group, self.side, self.values + other.values)

    def __sub__(self, other: "GFunction") -> "GFunction":
        _check_same(self, other)
        return GFunction(self.group, self.side, self.values - other.values)

    def __mul__(self, c) -> "GFunction":
        return GFunction(self.group, self.side, self.values * c)

    __rmul__ = __mul__

    def conj(self) -> "GFunction":
        return GFunction(self.group, self.side, np.conj(self.values))

    def abs(self) -> "GFunction":
        return GFunction(self.group, self.side, np.abs(self.values))


def _check_same(f: GFunction, g: GFunction):
    if f.group != g.group:
        raise ValueError(f"group mismatch: {f.group} vs {g.group}")
    if f.side != g.side:
        raise ValueError(f"side mismatch: {f.side} vs {g.side}")


def _is_integral(values: np.ndarray) -> bool:
    if values.dtype.kind in "iu":
        return True
    if values.dtype.kind == "O":
        return all(isinstance(v, int) for v in values)
    return False


# -- transforms ---------------------------------------------------------------

def dft(f: GFunction) -> GFunction:
    """Fourier transform: physical f to dual fhat, compact normalization."""
    if f.side != PHYSICAL:
        raise ValueError(f"dft expects a physical-side function, got {f.side}")
    shaped = f.values.astype(complex).reshape(f.group.factors)
    out = np.fft.fftn(shaped).reshape(f.group.order) / f.group.order
    return GFunction(f.group, DUAL, out)


def inverse_dft(omega: GFunction) -> GFunction:
    """Inverse transform: dual omega to physical omega-check, counting sums."""
    if omega.side != DUAL:
        raise ValueError(f"inverse_dft expects a dual-side function, got {omega.side}")
    shaped = omega.values.astype(complex).reshape(omega.group.factors)
    out = np.fft.ifftn(shaped).reshape(omega.group.order) * omega.group.order
    return GFunction(omega.group, PHYSICAL, out)


# -- exact counting convolution ----------------------------------------------

def _exact_bound(a: np.ndarray, b: np.ndarray) -> int:
    sa = int(sum(abs(int(v)) for v in a))
    mb = int(max((abs(int(v)) for v in b), default=0))
    sb = int(sum(abs(int(v)) for v in b))
    ma = int(max((abs(int(v)) for v in a), default=0))
    return min(sa * mb, sb * ma)


def _count_combine(group: Group, a, b, correlate: bool):
    a = np.asarray(a)
    b = np.asarray(b)
    if not (_is_integral(a) and _is_integral(b)):
        raise ValueError("exact counting needs integer-valued inputs")
    dtype = np.int64 if _exact_bound(a, b) < INT64_SAFE else object
    out = np.zeros(group.order, dtype=dtype)
    sa = np.flatnonzero(a)
    sb = np.flatnonzero(b)
    if sa.size == 0 or sb.size == 0:
        return out
    if sa.size > sb.size and not correlate:
        a, b, sa, sb = b, a, sb, sa
    bvals = b[sb] if dtype is np.int64 else np.array([int(v) for v in b[sb]], dtype=object)
    for lam in sa.tolist():
        av = int(a[lam])
        lam_arr = np.full(sb.shape, lam, dtype=np.int64)
        if correlate:
            # c(gamma) = sum_lambda a(lambda) b(lambda - gamma): gamma = lambda - sigma
            where = group.sub(lam_arr, sb)
        else:
            # c(gamma) = sum_lambda a(lambda) b(gamma - lambda): gamma = lambda + sigma
            where = group.add(lam_arr, sb)
        np.add.at(out, where, av * bvals)
    return out


def count_convolve(group: Group, a, b) -> np.ndarray:
    """Exact counting convolution (a*b)(x) = sum_y a(y) b(x-y)."""
    return _count_combine(group, a, b, correlate=False)


def count_correlate(group: Group, a, b) -> np.ndarray:
    """Exact counting correlation (a o b)(x) = sum_y a(y) b(y-x), integer inputs."""
    return _count_combine(group, a, b, correlate=True)


# -- convolution on tagged functions -------------------------------------------

def convolve(f: GFunction, g: GFunction) -> GFunction:
    """f*g with the side's normalization: E_y physical, sum_lambda dual."""
    _check_same(f, g)
    n = f.group.order
    if f.side == DUAL and _is_integral(f.values) and _is_integral(g.values):
        return GFunction(f.group, DUAL, count_convolve(f.group, f.values, g.values))
    fa = np.fft.fftn(f.values.astype(complex).reshape(f.group.factors))
    ga = np.fft.fftn(g.values.astype(complex).reshape(f.group.factors))
    out = np.fft.ifftn(fa * ga).reshape(n)
    if f.side == PHYSICAL:
        out = out / n
    return GFunction(f.group, f.side, out)


def cross_correlate(f: GFunction, g: GFunction) -> GFunction:
    """f o g, i.e. E_y f(y) conj(g(y-x)) physical, sum_lambda on the dual side."""
    _check_same(f, g)
    n = f.group.order
    if f.side == DUAL and _is_integral(f.values) and _is_integral(g.values):
        return GFunction(f.group, DUAL, count_correlate(f.group, f.values, g.values))
    fa = np.fft.fftn(f.values.astype(complex).reshape(f.group.factors))
    ga = np.fft.fftn(g.values.astype(complex).reshape(f.group.factors))
    out = np.fft.ifftn(fa * np.conj(ga)).reshape(n)
    if f.side == PHYSICAL:
        out = out / n
    return GFunction(f.group, f.side, out)


def iterated_convolution(f: GFunction, n: int) -> GFunction:
    """The n-fold convolution f^{(n)}; n = 1 returns f itself."""
    if n < 1:
        raise ValueError(f"fold count must be at least 1, got {n}")
    acc = f
    for _ in range(n - 1):
        acc = convolve(acc, f)
    return acc


def set_measure(S: GSet) -> GFunction:
    """The normalized measure mu_S = 1_S / mu(S), a physical-side function."""
    if S.size == 0:
        raise ValueError("cannot normalize the measure of an empty set")
    vals = S.bitmap.astype(float) * (S.group.order / S.size)
    return GFunction(S.group, PHYSICAL, vals)


def balanced_function(A: GSet, B: GSet) -> GFunction:
    """mu_A - mu_B for A inside B; integrates to zero."""
    if A.size == 0:
        raise ValueError("balanced function needs nonempty A")
    if A.group != B.group or not A.issubset(B):
        raise ValueError("balanced function needs A contained in B")
    return set_measure(A) - set_measure(B)


# -- dyadic pigeonholes ---------------------------------------------------------

@dataclass(frozen=True)
class PigeonholeBand:
    """A value band [eta*M, 2*eta*M) and the points landing in it."""

    eta: float
    indices: np.ndarray = field(compare=False)
    lower: float
    upper: float
    mass: float


def _band_ladder(delta: float):
    """Anchors eta = delta/2 * 2^i below 1, then eta = 1 on top."""
    etas = []
    eta = delta / 2.0
    while eta < 1.0:
        etas.append(eta)
        eta *= 2.0
    etas.append(1.0)
    return etas


def _assign_bands(f: np.ndarray, etas, M: float):
    """Index of the largest anchor with eta*M <= f(x), or -1 below the ladder."""
    band = np.full(f.shape, -1, dtype=np.int64)
    for i, eta in enumerate(etas):
        band[f >= eta * M] = i
    return band


def dyadic_pigeonhole_l1(f, delta: float, M: float) -> PigeonholeBand:
    """Pick a dyadic value band carrying a positive fraction of sum(f).

    Needs 0 <= f <= M and sum(f) >= delta*M*len(f). The returned band
    has eta in [delta/2, 1] and mass at least
    delta*M*len(f) / (2*ceil(log2(2/delta) + 1)).
    """
    f = np.asarray(f, dtype=float)
    if not (0 < delta <= 1):
        raise ValueError(f"delta must lie in (0, 1], got {delta}")
    if f.size == 0 or f.min() < 0 or f.max() > M * (1 + 1e-12):
        raise ValueError("need a nonempty function with 0 <= f <= M")
    f = np.minimum(f, M)
    total = float(f.sum())
    if total < delta * M * f.size * (1 - 1e-12):
        raise ValueError(
            f"mass hypothesis fails: sum(f) = {total} < delta*M*|X| = {delta * M * f.size}"
        )
    etas = _band_ladder(delta)
    band = _assign_bands(f, etas, M)
    best = None
    for i, eta in enumerate(etas):
        mask = band == i
        mass = float(f[mask].sum())
        if best is None or mass >= best[0]:
            best = (mass, i, mask)
    mass, i, mask = best
    eta = etas[i]
    return PigeonholeBand(
        eta=eta,
        indices=np.flatnonzero(mask),
        lower=eta * M,
        upper=2 * eta * M,
        mass=mass,
    )


def dyadic_pigeonhole_l2(f, delta: float, M: float) -> PigeonholeBand:
    """Value-window variant under sum(f^2) >= delta*M*sum(f).

    Scans windows [t, 2t) anchored at every value of f as well as the
    dyadic ladder, and returns the window maximizing |X'|*eta^2, ties
    toward larger eta. Mass reported is |X'| (a count, not an f-sum).
    """
    f = np.asarray(f, dtype=float)
    if not (0 < delta <= 1):
        raise ValueError(f"delta must lie in (0, 1], got {delta}")
    if f.size == 0 or f.min() < 0 or f.max() > M * (1 + 1e-12):
        raise ValueError("need a nonempty function with 0 <= f <= M")
    f = np.minimum(f, M)
    total = float(f.sum())
    sq = float((f * f).sum())
    if sq < delta * M * total * (1 - 1e-12):
        raise ValueError(
            f"energy hypothesis fails: sum(f^2) = {sq} < delta*M*sum(f) = {delta * M * total}"
        )
    anchors = {eta * M for eta in _band_ladder(delta)}
    lo = delta * M / 2.0
    for v in np.unique(f):
        if lo <= v <= M:
            anchors.add(float(v))
    best = None
    for t in sorted(anchors):
        mask = f >= M if t == M else (f >= t) & (f < 2 * t)
        eta = t / M
        score = int(mask.sum()) * eta * eta
        if best is None or score >= best[0]:
            best = (score, t, eta, mask)
    _, t, eta, mask = best
    return PigeonholeBand(
        eta=eta,
        indices=np.flatnonzero(mask),
        lower=t,
        upper=2 * t,
        mass=float(mask.sum()),
    )


# -- serialization ----------------------------------------------------------------

def gfunction_to_json(f: GFunction) -> dict:
    """Complex values as [re, im] pairs; exact integers as decimal strings."""
    if _is_integral(f.values):
        payload = [str(int(v)) for v in f.values]
        kind = "integer"
    else:
        v = f.values.astype(complex)
        payload = [[float(z.real), float(z.imag)] for z in v]
        kind = "complex"
    return {
        "factors": list(f.group.factors),
        "side": f.side,
        "kind": kind,
        "values": payload,
    }


def gfunction_from_json(obj: dict) -> GFunction:
    from .groups import build_group

    g = build_group(obj["factors"])
    if obj.get("kind") == "integer":
        vals = [int(s) for s in obj["values"]]
        arr = np.array(vals, dtype=np.int64) if all(abs(v) < INT64_SAFE for v in vals) else np.array(vals, dtype=object)
    else:
        arr = np.array([complex(re, im) for re, im in obj["values"]])
    return GFunction(g, obj["side"], arr)
