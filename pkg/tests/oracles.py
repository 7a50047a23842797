"""Slow reference implementations the fast code is checked against.

Everything here is written the dumb way on purpose: direct sums over
group elements, explicit tuple enumeration, no FFT, no clever counting.
"""

import itertools

import numpy as np


def naive_dft(group, values):
    """O(N^2) transform straight from the definition."""
    n = group.order
    out = np.zeros(n, dtype=complex)
    v = np.asarray(values, dtype=complex)
    for gamma in range(n):
        col = group.char_matrix_column(gamma)
        out[gamma] = np.sum(v * np.conj(col)) / n
    return out


def naive_inverse_dft(group, values):
    n = group.order
    out = np.zeros(n, dtype=complex)
    v = np.asarray(values, dtype=complex)
    for x in range(n):
        acc = 0.0 + 0.0j
        for gamma in range(n):
            k = group.pairing_phase(gamma, x)
            acc += v[gamma] * np.exp(2j * np.pi * k / n)
        out[x] = acc
    return out


def naive_convolve_physical(group, f, g):
    """(f*g)(x) = E_y f(y) g(x-y)."""
    n = group.order
    out = np.zeros(n, dtype=complex)
    for x in range(n):
        acc = 0.0 + 0.0j
        for y in range(n):
            acc += f[y] * g[group.sub(x, y)]
        out[x] = acc / n
    return out


def naive_correlate_physical(group, f, g):
    """(f o g)(x) = E_y f(y) conj(g(y-x))."""
    n = group.order
    out = np.zeros(n, dtype=complex)
    for x in range(n):
        acc = 0.0 + 0.0j
        for y in range(n):
            acc += f[y] * np.conj(g[group.sub(y, x)])
        out[x] = acc / n
    return out


def naive_convolve_counting(group, a, b):
    """Integer counting convolution, plain double loop."""
    n = group.order
    out = [0] * n
    for x in range(n):
        if a[x]:
            for y in range(n):
                if b[y]:
                    out[group.add(x, y)] += int(a[x]) * int(b[y])
    return np.array(out, dtype=object)


def naive_correlate_counting(group, a, b):
    """c(gamma) = sum over pairs with lambda - sigma = gamma."""
    n = group.order
    out = [0] * n
    for lam in range(n):
        if a[lam]:
            for sig in range(n):
                if b[sig]:
                    out[group.sub(lam, sig)] += int(a[lam]) * int(b[sig])
    return np.array(out, dtype=object)


def tuple_energy(group, omega_indices, m, nu_weight):
    """E_2m(omega; nu) by enumerating all 2m-tuples of omega's support.

    nu_weight maps a group index to an integer or float weight. Indicator
    inputs give exact integer counts.
    """
    total = 0
    idx = list(omega_indices)
    for plus in itertools.product(idx, repeat=m):
        s_plus = 0
        for g in plus:
            s_plus = group.add(s_plus, g)
        for minus in itertools.product(idx, repeat=m):
            s = s_plus
            for g in minus:
                s = group.sub(s, g)
            total += nu_weight(s)
    return total


def signed_sum_counts(group, lam_indices, k):
    """Count ordered ways to hit each gamma with k distinct elements and signs.

    Enumerates every k-subset of lam_indices and every sign pattern in
    {+1,-1}^k; returns an array c with c[gamma] = number of (subset, signs)
    pairs whose signed sum is gamma. Subsets are unordered here; the
    caller scales if an ordered count is wanted.
    """
    n = group.order
    out = np.zeros(n, dtype=object)
    for subset in itertools.combinations(lam_indices, k):
        for signs in itertools.product((1, -1), repeat=k):
            s = 0
            for g, e in zip(subset, signs):
                s = group.add(s, g) if e == 1 else group.sub(s, g)
            out[s] += 1
    return out


def ap3_count(group, indices):
    """Number of (x, d) pairs with x, x+d, x+2d all in the set."""
    member = set(int(i) for i in indices)
    count = 0
    for x in member:
        for d in range(group.order):
            if group.add(x, d) in member and group.add(x, group.add(d, d)) in member:
                count += 1
    return count
