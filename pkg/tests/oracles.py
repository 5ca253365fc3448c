"""Independent brute-force oracles for the lattice algebra.

Everything here is written as the naive O(4**p) double loop straight off the
defining sums, deliberately sharing no code with the transforms under test.
"""

from __future__ import annotations

from taildep.coeffs import Kind, SubsetFn
from taildep.rationals import ZERO, Rat


def brute_lambda_from_beta(beta: SubsetFn) -> SubsetFn:
    p = beta.p
    vals = []
    for L in range(1, 1 << p):
        acc = ZERO
        for J in range(1, 1 << p):
            if J & L == L:
                acc += beta[J]
        vals.append(acc)
    return SubsetFn(p, tuple(vals), Kind.LAMBDA)


def brute_theta_from_beta(beta: SubsetFn) -> SubsetFn:
    p = beta.p
    vals = []
    for K in range(1, 1 << p):
        acc = ZERO
        for J in range(1, 1 << p):
            if J & K:
                acc += beta[J]
        vals.append(acc)
    return SubsetFn(p, tuple(vals), Kind.THETA)


def brute_beta_from_lambda(lam: SubsetFn) -> list:
    p = lam.p
    vals = []
    for J in range(1, 1 << p):
        acc = ZERO
        for L in range(1, 1 << p):
            if L & J == J:
                extra = (L & ~J).bit_count()
                acc += lam[L] if extra % 2 == 0 else -lam[L]
        vals.append(acc)
    return vals


def brute_beta_from_theta(theta: SubsetFn) -> list:
    p = theta.p
    full = (1 << p) - 1
    vals = []
    for J in range(1, 1 << p):
        jc = full ^ J
        acc = ZERO
        for K in range(1, 1 << p):
            if K & jc == jc:
                sign = (J & K).bit_count() + 1
                acc += theta[K] if sign % 2 == 0 else -theta[K]
        vals.append(acc)
    return vals


def brute_theta_from_lambda(lam: SubsetFn) -> SubsetFn:
    p = lam.p
    vals = []
    for K in range(1, 1 << p):
        acc = ZERO
        for L in range(1, 1 << p):
            if L & K == L:
                acc += lam[L] if L.bit_count() % 2 == 1 else -lam[L]
        vals.append(acc)
    return SubsetFn(p, tuple(vals), Kind.THETA)


def brute_lambda_from_theta(theta: SubsetFn) -> SubsetFn:
    p = theta.p
    vals = []
    for L in range(1, 1 << p):
        acc = ZERO
        for K in range(1, 1 << p):
            if K & L == K:
                acc += theta[K] if K.bit_count() % 2 == 1 else -theta[K]
        vals.append(acc)
    return SubsetFn(p, tuple(vals), Kind.LAMBDA)


def brute_cut_reconstruction(weights: dict, p: int) -> list[list]:
    """d(i,j) = sum over cuts of weight(J) * |1_J(i) - 1_J(j)| by direct loop."""
    d = [[ZERO] * p for _ in range(p)]
    for i in range(p):
        for j in range(p):
            if i == j:
                continue
            acc = ZERO
            for J, w in weights.items():
                ini = bool(J >> i & 1)
                inj = bool(J >> j & 1)
                if ini != inj:
                    acc += w
            d[i][j] = acc
    return d


def brute_bernoulli_moment(pmf: dict, subset_mask: int) -> Rat:
    """E[prod of indicator(i in Theta) for i in subset] under a set-valued pmf."""
    acc = ZERO
    for J, prob in pmf.items():
        if J & subset_mask == subset_mask:
            acc += prob
    return acc
