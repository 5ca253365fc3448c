"""Max-stable model synthesis from subset coefficients, and its exact laws.

A nonnegative weight beta(J) per nonempty subset J parameterizes the
max-stable vector

    X_i = max over J containing i of beta(J) * Z_J,

with Z_J iid standard 1-Frechet.  Its joint CDF is

    P[X <= x] = exp( - sum_J beta(J) / min_{i in J} x_i ),

so every distributional quantity of interest here has a closed form in the
weights.  The limiting exceedance set of the model (the set of components
that are simultaneously extreme, conditioned on some component being
extreme) is the random subset with pmf beta(J) / theta_total, which is also
the bridge to Bernoulli-compatible moment tensors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from .coeffs import (
    Kind,
    SubsetFn,
    beta_from_lambda,
    beta_from_theta,
    lambda_from_beta,
    theta_from_beta,
)
from .errors import (
    DegenerateModel,
    DomainError,
    InvalidPmf,
    ScaleTooSmall,
)
from .rationals import Rat, RatLike, ZERO, rat
from .subsets import set_str


@dataclass(frozen=True)
class TmModel:
    """Max-stable model given by nonnegative subset weights.

    Degenerate models (all weights zero) are representable; every
    coefficient query on them returns 0.
    """

    p: int
    beta: SubsetFn

    def __post_init__(self) -> None:
        if self.beta.kind is not Kind.BETA:
            raise ValueError("TmModel weights must have kind beta (all >= 0)")
        if self.beta.p != self.p:
            raise ValueError("dimension mismatch between p and weights")

    @classmethod
    def from_entries(
        cls, p: int, entries: Mapping[int, RatLike], *, allow_large: bool = False
    ) -> "TmModel":
        return cls(
            p, SubsetFn.from_entries(p, entries, Kind.BETA, allow_large=allow_large)
        )

    @property
    def is_degenerate(self) -> bool:
        return all(v == 0 for v in self.beta.values)

    def support(self) -> tuple[tuple[int, Rat], ...]:
        return self.beta.support()

    def theta_total(self) -> Rat:
        """Total mass = extremal coefficient of the full index set."""
        return self.beta.total()

    def marginal_scales(self) -> tuple[Rat, ...]:
        """Scale of each 1-Frechet marginal: sum of weights over sets containing i."""
        scales = [ZERO] * self.p
        for mask, v in self.support():
            for i in range(self.p):
                if mask >> i & 1:
                    scales[i] += v
        return tuple(scales)

    def lambdas(self) -> SubsetFn:
        return lambda_from_beta(self.beta)

    def thetas(self) -> SubsetFn:
        return theta_from_beta(self.beta)

    def theta_of(self, mask: int) -> Rat:
        """theta(K) for one subset, via the sparse support (no full transform)."""
        if mask == 0:
            return ZERO
        return sum((v for m, v in self.support() if m & mask), ZERO)

    def lambda_of(self, mask: int) -> Rat:
        return sum((v for m, v in self.support() if m & mask == mask), ZERO)


@dataclass(frozen=True)
class RealizabilityFailure:
    """Witness that a coefficient system is not realizable: its negative atoms."""

    kind: Kind
    negative: tuple  # ((mask, value), ...)

    def masks(self) -> tuple[int, ...]:
        return tuple(m for m, _ in self.negative)

    def describe(self) -> str:
        parts = ", ".join(f"beta({set_str(m)}) = {v}" for m, v in self.negative)
        return f"not realizable; negative atom weights: {parts}"


def synthesize(system: SubsetFn) -> TmModel | RealizabilityFailure:
    """Invert a lambda or theta system to model weights, if one exists.

    Returns the model whose coefficients reproduce the input exactly
    (checked by re-applying the forward transform), or the list of subsets
    with negative inverted weight as the failure witness.
    """
    if system.kind is Kind.LAMBDA:
        inv = beta_from_lambda(system)
        forward = lambda_from_beta
    elif system.kind is Kind.THETA:
        inv = beta_from_theta(system)
        forward = theta_from_beta
    else:
        raise ValueError(f"synthesize expects kind lambda or theta, got {system.kind.value}")
    if inv.kind is Kind.RAW:
        negative = tuple((m, inv[m]) for m in inv.negative_masks())
        return RealizabilityFailure(system.kind, negative)
    model = TmModel(system.p, inv)
    # Moebius inversion is exact, so this can only trip on an internal bug.
    assert forward(inv).values == system.values
    return model


# ---------------------------------------------------------------------------
# Exact distributional formulas.
# ---------------------------------------------------------------------------


def cdf_exponent(model: TmModel, x: Sequence[RatLike]) -> Rat:
    """Exact rational exponent E(x) with P[X <= x] = exp(-E(x)).

    E(x) = sum over atoms J of beta(J) / min_{i in J} x_i.  Exposed
    separately so the max-stability identity n * E(n x) = E(x) can be
    machine-checked symbolically.
    """
    xs = [rat(v) for v in x]
    if len(xs) != model.p:
        raise DomainError(f"expected {model.p} coordinates, got {len(xs)}")
    if any(v <= 0 for v in xs):
        raise DomainError("all coordinates must be positive")
    acc = ZERO
    for mask, w in model.support():
        m = min(xs[i] for i in range(model.p) if mask >> i & 1)
        acc += w / m
    return acc


def cdf(model: TmModel, x: Sequence[float]) -> float:
    """P[X_i <= x_i for all i], evaluated in floating point."""
    if len(x) != model.p:
        raise DomainError(f"expected {model.p} coordinates, got {len(x)}")
    if any(not v > 0 for v in x):
        raise DomainError("all coordinates must be positive")
    acc = 0.0
    for mask, w in model.support():
        m = min(float(x[i]) for i in range(model.p) if mask >> i & 1)
        acc += float(w) / m
    return math.exp(-acc)


def exact_joint_exceedance(model: TmModel, subset: int, u: float) -> float:
    """P[X_i > u for every i in the subset], by inclusion-exclusion.

    Expanding the product of (1 - indicator(X_i <= u)) gives

        P = sum over S inside the subset of (-1)^|S| exp(-theta(S) / u),

    with theta(empty) = 0.  Multiplied by u this converges to lambda(subset)
    as u grows; the gap is O(1/u), so finite-u values are the honest
    comparison target for simulation output.
    """
    if not u > 0:
        raise DomainError(f"threshold must be positive, got {u}")
    if subset == 0 or subset >= (1 << model.p):
        raise DomainError(f"subset mask {subset} out of range")
    support = model.support()
    bits = [1 << i for i in range(model.p) if subset >> i & 1]
    acc = 0.0
    for pick in range(1 << len(bits)):
        s_mask = 0
        for t, bit in enumerate(bits):
            if pick >> t & 1:
                s_mask |= bit
        theta_s = sum((v for m, v in support if m & s_mask), ZERO)
        term = math.exp(-float(theta_s) / u)
        acc += term if pick.bit_count() % 2 == 0 else -term
    return acc


def exact_union_exceedance(model: TmModel, subset: int, u: float) -> float:
    """P[X_i > u for some i in the subset] = 1 - exp(-theta(subset)/u)."""
    if not u > 0:
        raise DomainError(f"threshold must be positive, got {u}")
    if subset == 0 or subset >= (1 << model.p):
        raise DomainError(f"subset mask {subset} out of range")
    return -math.expm1(-float(model.theta_of(subset)) / u)


# ---------------------------------------------------------------------------
# Limiting exceedance set.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExceedanceSetDist:
    """Distribution of the limiting exceedance set of a model.

    pmf(J) = beta(J) / theta_total over the (sparse) support; the hitting
    and inclusion functionals are theta and lambda rescaled by the
    normalizer.
    """

    p: int
    pmf: tuple  # ((mask, probability), ...) over the support
    normalizer: Rat  # theta of the full index set

    def as_dict(self) -> dict[int, Rat]:
        return dict(self.pmf)

    def probability(self, mask: int) -> Rat:
        for m, q in self.pmf:
            if m == mask:
                return q
        return ZERO

    def hitting(self, mask: int) -> Rat:
        """P[exceedance set meets the given subset]."""
        return sum((q for m, q in self.pmf if m & mask), ZERO)

    def inclusion(self, mask: int) -> Rat:
        """P[exceedance set contains the given subset]."""
        return sum((q for m, q in self.pmf if m & mask == mask), ZERO)


def exceedance_set_dist(model: TmModel) -> ExceedanceSetDist:
    if model.is_degenerate:
        raise DegenerateModel("degenerate model has no exceedance-set limit")
    total = model.theta_total()
    pmf = tuple((mask, v / total) for mask, v in model.support())
    return ExceedanceSetDist(model.p, pmf, total)


# ---------------------------------------------------------------------------
# Bernoulli bridge.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BernoulliTensor:
    """Moment tensor T(i_1, ..., i_k) = lambda(distinct indices) / scale.

    Realized by ξ(i) = B * indicator(i in Θ) with Θ the model's limiting
    exceedance set and P[B = 1] = theta_total / scale, which is why the
    scale must be at least theta_total (a sharp bound).  The tensor depends
    on an index tuple only through its set of distinct values, so storage
    is the underlying lambda system plus the scale.
    """

    p: int
    order: int
    scale: Rat
    lam: SubsetFn
    theta_total: Rat

    def value(self, indices: Sequence[int]) -> Rat:
        """Entry for a k-tuple of 0-based component indices (repeats allowed)."""
        if len(indices) != self.order:
            raise DomainError(f"expected {self.order} indices, got {len(indices)}")
        mask = 0
        for i in indices:
            if not 0 <= i < self.p:
                raise DomainError(f"index {i} out of range")
            mask |= 1 << i
        return self.lam[mask] / self.scale

    def bernoulli_success_prob(self) -> Rat:
        """P[B = 1] of the implied thinning variable: theta_total / scale."""
        return self.theta_total / self.scale


def tensor_from_model(model: TmModel, order: int, scale: RatLike) -> BernoulliTensor:
    """Moment tensor of the model at a given scale; scale >= theta_total required."""
    if order < 1:
        raise DomainError(f"tensor order must be >= 1, got {order}")
    c = rat(scale)
    total = model.theta_total()
    if c < total:
        raise ScaleTooSmall(
            f"scale {c} is below theta_total = {total}; the bound is sharp"
        )
    return BernoulliTensor(model.p, order, c, model.lambdas(), total)


@dataclass(frozen=True)
class BernoulliModelResult:
    """Model built from a set-valued pmf, plus the mass dropped at the empty set."""

    model: TmModel
    dropped_empty_mass: Rat


def model_from_bernoulli(
    pmf: Mapping[int, RatLike], p: int, *, allow_large: bool = False
) -> BernoulliModelResult:
    """Model whose atom weights are P[Theta = J] for nonempty J.

    The input pmf may put mass on the empty set (mask 0); that mass cannot
    influence any coefficient and is dropped, but reported.  The output
    model satisfies lambda(L) = E[prod over i in L of xi(i)] exactly, where
    xi is the Bernoulli vector of the input set.
    """
    entries: dict[int, Rat] = {}
    total = ZERO
    dropped = ZERO
    for mask, v in pmf.items():
        q = rat(v)
        if q < 0:
            raise InvalidPmf(f"negative mass {q} at subset {set_str(mask)}")
        if not 0 <= mask < (1 << p):
            raise InvalidPmf(f"subset mask {mask} out of range for p={p}")
        total += q
        if mask == 0:
            dropped += q
        elif q != 0:
            entries[mask] = entries.get(mask, ZERO) + q
    if total != 1:
        raise InvalidPmf(f"pmf sums to {total}, expected exactly 1")
    model = TmModel.from_entries(p, entries, allow_large=allow_large)
    return BernoulliModelResult(model, dropped)


__all__ = [
    "TmModel",
    "RealizabilityFailure",
    "synthesize",
    "cdf",
    "cdf_exponent",
    "exact_joint_exceedance",
    "exact_union_exceedance",
    "ExceedanceSetDist",
    "exceedance_set_dist",
    "BernoulliTensor",
    "tensor_from_model",
    "BernoulliModelResult",
    "model_from_bernoulli",
]
