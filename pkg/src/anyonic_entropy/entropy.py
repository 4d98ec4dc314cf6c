"""Shannon entropies and the anyonic-entropy formulas built on them.

Every quantity here is in bits. Distributions are classical by construction:
the dephasing step (dropping off-diagonal terms in the anyon-occupation basis)
happens upstream, so there is no density-matrix type anywhere in the package.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Mapping, Sequence

import numpy as np

#: Probabilities below this are treated as exact zeros in entropy sums.
ZERO_CUTOFF = 1e-15
#: Slack allowed on probability bounds and on normalisation.
PROB_SLACK = 1e-12
#: Numerical slack tolerated before a Gamma value is reported as malformed.
GAMMA_SLACK = 1e-9


def _check_probability(x: float, name: str = "x") -> float:
    x = float(x)
    if not (-PROB_SLACK <= x <= 1.0 + PROB_SLACK):
        raise ValueError(f"{name}={x!r} is not a probability")
    return min(max(x, 0.0), 1.0)


def _xlog2x(p: np.ndarray) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    out = np.zeros_like(p)
    mask = p > ZERO_CUTOFF
    out[mask] = p[mask] * np.log2(p[mask])
    return out


@dataclass(frozen=True)
class Pmf:
    """A probability mass function over opaque labels."""

    probabilities: np.ndarray
    labels: tuple | None = None

    def __post_init__(self):
        p = np.asarray(self.probabilities, dtype=float).ravel()
        if p.size == 0:
            raise ValueError("empty pmf")
        if np.any(p < -PROB_SLACK) or np.any(p > 1.0 + PROB_SLACK):
            raise ValueError("pmf entries must lie in [0, 1]")
        total = p.sum()
        if abs(total - 1.0) > PROB_SLACK:
            raise ValueError(f"pmf sums to {total!r}, not 1")
        if self.labels is not None and len(self.labels) != p.size:
            raise ValueError("labels and probabilities differ in length")
        object.__setattr__(self, "probabilities", np.clip(p, 0.0, 1.0))

    @classmethod
    def from_mapping(cls, mapping: Mapping[Hashable, float]) -> "Pmf":
        labels = tuple(mapping)
        return cls(np.array([mapping[k] for k in labels], dtype=float), labels)

    def __len__(self) -> int:
        return self.probabilities.size


@dataclass(frozen=True)
class JointClassDistribution:
    """Joint pmf over (net-occupation class of region A, configuration of region B).

    Stored densely as ``table[class_index, b_index]``. ``b_labels`` optionally
    names the B configurations.
    """

    table: np.ndarray
    b_labels: tuple | None = None

    def __post_init__(self):
        t = np.asarray(self.table, dtype=float)
        if t.ndim != 2:
            raise ValueError("joint table must be 2-D (class, B-configuration)")
        if t.shape[0] < 2:
            raise ValueError("need at least two net-occupation classes")
        if np.any(t < -PROB_SLACK) or np.any(t > 1.0 + PROB_SLACK):
            raise ValueError("joint entries must lie in [0, 1]")
        total = t.sum()
        if abs(total - 1.0) > PROB_SLACK:
            raise ValueError(f"joint distribution sums to {total!r}, not 1")
        if self.b_labels is not None and len(self.b_labels) != t.shape[1]:
            raise ValueError("b_labels length does not match table")
        object.__setattr__(self, "table", np.clip(t, 0.0, 1.0))

    @classmethod
    def from_entries(
        cls, n_classes: int, entries: Mapping[tuple[int, Hashable], float]
    ) -> "JointClassDistribution":
        """Build from a sparse ``{(class_index, b_config): probability}`` map."""
        b_labels: dict[Hashable, int] = {}
        for cls_idx, b in entries:
            if not 0 <= cls_idx < n_classes:
                raise ValueError(f"class index {cls_idx} out of range")
            b_labels.setdefault(b, len(b_labels))
        table = np.zeros((n_classes, len(b_labels)))
        for (cls_idx, b), prob in entries.items():
            table[cls_idx, b_labels[b]] += prob
        return cls(table, tuple(b_labels))

    @property
    def n_classes(self) -> int:
        return self.table.shape[0]

    def b_marginal(self) -> np.ndarray:
        return self.table.sum(axis=0)

    def class_marginal(self) -> np.ndarray:
        return self.table.sum(axis=1)


@dataclass(frozen=True)
class GammaValue:
    """A Gamma value in bits together with its ceiling.

    ``raw`` keeps the unclamped number (relevant for the lower bound, which
    can go negative before clamping).
    """

    value: float
    max: float
    raw: float

    def __post_init__(self):
        if not (0.0 <= self.value <= self.max + GAMMA_SLACK):
            raise ValueError(f"Gamma={self.value!r} outside [0, {self.max}]")

    def __float__(self) -> float:
        return self.value


def shannon_binary(x: float) -> float:
    """Binary entropy ``-x log2 x - (1-x) log2 (1-x)`` with ``0 log 0 = 0``."""
    x = _check_probability(x)
    return float(-(_xlog2x(np.array([x, 1.0 - x])).sum()))


def _binary_entropy_derivative(x: float) -> float:
    """d S(x)/dx = log2((1-x)/x); infinite at the endpoints."""
    if x <= 0.0:
        return np.inf
    if x >= 1.0:
        return -np.inf
    return float(np.log2((1.0 - x) / x))


def entropy_of_pmf(p: Pmf | Sequence[float] | np.ndarray) -> float:
    if not isinstance(p, Pmf):
        p = Pmf(np.asarray(p, dtype=float))
    return float(-_xlog2x(p.probabilities).sum())


def _entropy_unchecked(p: np.ndarray) -> float:
    return float(-_xlog2x(p).sum())


def gamma_from_joint(j: JointClassDistribution) -> GammaValue:
    """``log2(n_classes) + S_B - S_AB`` for a classical joint distribution.

    ``log2(n_classes)`` plays the role of ``2 log D``; it is 2 bits for the
    planar code's four classes and 1 bit for a single anyon species.
    """
    ceiling = float(np.log2(j.n_classes))
    s_b = _entropy_unchecked(j.b_marginal())
    s_ab = _entropy_unchecked(j.table.ravel())
    conditional = s_ab - s_b
    if conditional < -GAMMA_SLACK or conditional > ceiling + GAMMA_SLACK:
        raise ValueError(
            f"conditional entropy {conditional!r} outside [0, {ceiling}]; "
            "joint distribution is malformed"
        )
    raw = ceiling - conditional
    return GammaValue(min(max(raw, 0.0), ceiling), ceiling, raw)


def mutual_information_bound(p_correct: float, pi_vacuum: float) -> float:
    """Mutual information between a region's net occupation and a decoder's guess.

    Computed as ``S(P pi + (1-P)(1-pi)) - S(P)``. The intent is a lower bound
    on the information the syndrome carries about the class, since a decoder
    can only lose information. The formula models the decoder as a binary
    symmetric channel with success probability ``P``; when the error rate
    depends on the true class this can overshoot. See
    :func:`confusion_information` for a version without that assumption.
    """
    p = _check_probability(p_correct, "p_correct")
    pi = _check_probability(pi_vacuum, "pi_vacuum")
    mixed = p * pi + (1.0 - p) * (1.0 - pi)
    return max(shannon_binary(mixed) - shannon_binary(p), 0.0)


def confusion_information(counts: np.ndarray) -> float:
    """Plug-in mutual information between true class and guess from a 2x2 count table.

    ``counts[a, g]`` is the number of samples with true class ``a`` and guess
    ``g``. Unlike :func:`mutual_information_bound` this makes no symmetry
    assumption about the decoder, so by data processing it never exceeds
    the information the syndrome carries about the class.
    """
    counts = np.asarray(counts, dtype=float)
    total = counts.sum()
    if total <= 0:
        raise ValueError("empty confusion table")
    joint = counts / total
    value = (
        _entropy_unchecked(joint.sum(axis=1))
        + _entropy_unchecked(joint.sum(axis=0))
        - _entropy_unchecked(joint.ravel())
    )
    return max(value, 0.0)


def gamma_lower_bound(i_s: float, i_p: float, pi_s: float, pi_p: float) -> GammaValue:
    """``2 + I_s + I_p - S(pi_s) - S(pi_p)`` bits, clamped below at zero."""
    if i_s < -GAMMA_SLACK or i_p < -GAMMA_SLACK:
        raise ValueError("mutual information terms must be non-negative")
    raw = 2.0 + i_s + i_p - shannon_binary(pi_s) - shannon_binary(pi_p)
    return GammaValue(min(max(raw, 0.0), 2.0), 2.0, raw)


def bound_gradient(p_correct: float, pi_vacuum: float) -> tuple[float, float]:
    """Partial derivatives of ``I(P, pi) - S(pi)`` with respect to ``P`` and ``pi``.

    Used for first-order error propagation of the Gamma lower bound. Infinite
    entries appear only at the endpoints, where the matching standard error
    is zero; callers treat ``0 * inf`` as zero.
    """
    p = _check_probability(p_correct)
    pi = _check_probability(pi_vacuum)
    mixed = p * pi + (1.0 - p) * (1.0 - pi)
    d_mixed = _binary_entropy_derivative(mixed)
    with np.errstate(invalid="ignore"):
        d_p = d_mixed * (2.0 * pi - 1.0) - _binary_entropy_derivative(p)
        d_pi = d_mixed * (2.0 * p - 1.0) - _binary_entropy_derivative(pi)
    return float(d_p), float(d_pi)
