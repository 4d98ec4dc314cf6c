"""Gamma for the planar code under i.i.d. noise.

Region A is represented by the logical class (net e / m transported across
the code) and region B by the whole syndrome. Two routes are provided:

* ``estimate_gamma_mc``: Monte Carlo estimate of decoder success rates and
  vacuum-class probabilities, turned into a lower bound on Gamma.
* ``gamma_exact_enum``: the exact Gamma from the enumerated joint
  distribution of (class, syndrome), for ``L <= 4``.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .decoders import (
    coset_probabilities,
    guess_table,
    matching_classes,
    ml_class_lookup,
    sector_data,
    sector_probability,
)
from .entropy import (
    GammaValue,
    JointClassDistribution,
    bound_gradient,
    confusion_information,
    gamma_from_joint,
    gamma_lower_bound,
    mutual_information_bound,
)
from .noise import BLOCK_SIZE, NoiseModel, SeededStream, iter_blocks
from .planar import PlanarLayout, build_layout, cut_parity, pack_bits, syndrome_bits

DECODERS = ("matching", "ml")

# Order of the integer counters accumulated per batch.
_COUNT_FIELDS = ("n", "correct_e", "correct_m", "vacuum_e", "vacuum_m", "correct_vacuum_e", "correct_vacuum_m")


@dataclass(frozen=True)
class GammaEstimate:
    L: int
    p_x: float
    p_z: float
    decoder: str
    n_samples: int
    seed: int
    stream_id: int
    p_success_e: float
    p_success_m: float
    pi_e: float
    pi_m: float
    gamma_lb: float
    gamma_lb_raw: float
    gamma_lb_confusion: float
    std_errors: dict = field(default_factory=dict)

    def to_row(self) -> dict:
        row = asdict(self)
        row.pop("std_errors")
        row.pop("gamma_lb_confusion")
        row.update({f"se_{k}": v for k, v in self.std_errors.items()})
        return row


def _sector_outcomes(layout: PlanarLayout, sector: str, flips: np.ndarray, decoder: str, lookup):
    h, cut = sector_data(layout, sector)
    syn = syndrome_bits(h, flips)
    true_cls = cut_parity(cut, flips)
    if decoder == "ml":
        guess = lookup[pack_bits(syn)]
    else:
        guess = matching_classes(layout, sector, syn)
    return guess == true_cls, true_cls == 0


def _ml_lookups(layout: PlanarLayout, model: NoiseModel, decoder: str):
    if decoder != "ml":
        return None, None
    return ml_class_lookup(layout, "e", model.p_z), ml_class_lookup(layout, "m", model.p_x)


def sample_outcomes(
    layout: PlanarLayout,
    model: NoiseModel,
    decoder: str,
    n_samples: int,
    stream: SeededStream,
) -> dict[str, np.ndarray]:
    """Per-sample boolean outcomes (decoder correct / class is vacuum, per sector)."""
    if decoder not in DECODERS:
        raise ValueError(f"unknown decoder {decoder!r}")
    lk_e, lk_m = _ml_lookups(layout, model, decoder)
    parts: dict[str, list] = {k: [] for k in _COUNT_FIELDS[1:]}
    for x, z in iter_blocks(layout, model, stream, n_samples):
        ok_e, vac_e = _sector_outcomes(layout, "e", z, decoder, lk_e)
        ok_m, vac_m = _sector_outcomes(layout, "m", x, decoder, lk_m)
        parts["correct_e"].append(ok_e)
        parts["correct_m"].append(ok_m)
        parts["vacuum_e"].append(vac_e)
        parts["vacuum_m"].append(vac_m)
        parts["correct_vacuum_e"].append(ok_e & vac_e)
        parts["correct_vacuum_m"].append(ok_m & vac_m)
    return {k: np.concatenate(v) if v else np.zeros(0, bool) for k, v in parts.items()}


def _count_blocks(args) -> np.ndarray:
    L, p_x, p_z, decoder, seed, stream_id, first_block, n = args
    layout = build_layout(L)
    model = NoiseModel(p_x, p_z)
    lk_e, lk_m = _ml_lookups(layout, model, decoder)
    counts = np.zeros(len(_COUNT_FIELDS), dtype=np.int64)
    for x, z in iter_blocks(layout, model, SeededStream(seed, stream_id), n, first_block):
        ok_e, vac_e = _sector_outcomes(layout, "e", z, decoder, lk_e)
        ok_m, vac_m = _sector_outcomes(layout, "m", x, decoder, lk_m)
        counts += (
            len(ok_e),
            ok_e.sum(),
            ok_m.sum(),
            vac_e.sum(),
            vac_m.sum(),
            (ok_e & vac_e).sum(),
            (ok_m & vac_m).sum(),
        )
    return counts


def _work_chunks(L, model, decoder, stream, n_samples, workers):
    n_blocks = math.ceil(n_samples / BLOCK_SIZE)
    per_chunk = max(1, math.ceil(n_blocks / max(1, workers)))
    chunks = []
    for first in range(0, n_blocks, per_chunk):
        last = min(first + per_chunk, n_blocks)
        n = min(n_samples, last * BLOCK_SIZE) - first * BLOCK_SIZE
        chunks.append((L, model.p_x, model.p_z, decoder, stream.seed, stream.stream_id, first, n))
    return chunks


def _confusion(n: int, correct: int, vacuum: int, correct_vacuum: int) -> np.ndarray:
    """2x2 table ``[true class, guess]`` from the four accumulated counters."""
    return np.array(
        [
            [correct_vacuum, vacuum - correct_vacuum],
            [n - vacuum - correct + correct_vacuum, correct - correct_vacuum],
        ]
    )


def _binomial_se(p: float, n: int) -> float:
    return math.sqrt(max(p * (1.0 - p), 0.0) / n)


def estimate_from_counts(
    layout: PlanarLayout,
    model: NoiseModel,
    decoder: str,
    stream: SeededStream,
    counts: np.ndarray,
) -> GammaEstimate:
    n, ok_e, ok_m, vac_e, vac_m, okvac_e, okvac_m = (int(c) for c in counts)
    p_e, p_m, pi_e, pi_m = ok_e / n, ok_m / n, vac_e / n, vac_m / n
    i_s = mutual_information_bound(p_e, pi_e)
    i_p = mutual_information_bound(p_m, pi_m)
    bound = gamma_lower_bound(i_s, i_p, pi_e, pi_m)
    se = {
        "P_e": _binomial_se(p_e, n),
        "P_m": _binomial_se(p_m, n),
        "pi_e": _binomial_se(pi_e, n),
        "pi_m": _binomial_se(pi_m, n),
    }
    # First-order propagation; covariance between P and pi (shared samples) ignored.
    var = 0.0
    for p_hat, pi_hat, se_p, se_pi in ((p_e, pi_e, se["P_e"], se["pi_e"]), (p_m, pi_m, se["P_m"], se["pi_m"])):
        d_p, d_pi = bound_gradient(p_hat, pi_hat)
        for grad, s in ((d_p, se_p), (d_pi, se_pi)):
            if s > 0.0 and math.isfinite(grad):
                var += (grad * s) ** 2
    se["gamma_lb"] = math.sqrt(var)
    confusion = gamma_lower_bound(
        confusion_information(_confusion(n, ok_e, vac_e, okvac_e)),
        confusion_information(_confusion(n, ok_m, vac_m, okvac_m)),
        pi_e,
        pi_m,
    )
    return GammaEstimate(
        L=layout.L,
        p_x=model.p_x,
        p_z=model.p_z,
        decoder=decoder,
        n_samples=n,
        seed=stream.seed,
        stream_id=stream.stream_id,
        p_success_e=p_e,
        p_success_m=p_m,
        pi_e=pi_e,
        pi_m=pi_m,
        gamma_lb=bound.value,
        gamma_lb_raw=bound.raw,
        gamma_lb_confusion=confusion.value,
        std_errors=se,
    )


def estimate_gamma_mc(
    layout: PlanarLayout,
    model: NoiseModel,
    decoder: str,
    n_samples: int,
    stream: SeededStream,
    workers: int = 1,
) -> GammaEstimate:
    """Monte Carlo lower bound on Gamma from decoder success statistics.

    Samples ``n_samples`` error patterns, decodes each syndrome and compares
    the guessed class with the true one. The result is bitwise independent
    of ``workers``: blocks are keyed by index and counters are integers.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    if decoder not in DECODERS:
        raise ValueError(f"unknown decoder {decoder!r}")
    if decoder == "ml":
        # Fail early (and in the parent process) if the layout is too large.
        coset_probabilities(layout, "e", model.p_z)
    chunks = _work_chunks(layout.L, model, decoder, stream, n_samples, workers)
    if workers > 1 and len(chunks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_count_blocks, chunks))
    else:
        results = [_count_blocks(c) for c in chunks]
    counts = np.sum(results, axis=0)
    return estimate_from_counts(layout, model, decoder, stream, counts)


def sector_joint(layout: PlanarLayout, sector: str, p: float) -> np.ndarray:
    """Exact ``P(class, syndrome)`` for one sector, shape ``(2, 2**m)``."""
    return coset_probabilities(layout, sector, p).T


def exact_joint(layout: PlanarLayout, model: NoiseModel) -> JointClassDistribution:
    """Exact joint over (4-valued logical class, full syndrome).

    Class index is ``e_parity + 2 * m_parity``; B index packs the e-syndrome
    in the low bits and the m-syndrome above it.
    """
    je = sector_joint(layout, "e", model.p_z)
    jm = sector_joint(layout, "m", model.p_x)
    full = jm[:, None, :, None] * je[None, :, None, :]
    return JointClassDistribution(full.reshape(4, -1))


def gamma_exact_enum(layout: PlanarLayout, model: NoiseModel) -> GammaValue:
    return gamma_from_joint(exact_joint(layout, model))


@dataclass(frozen=True)
class ExactBound:
    """Exact (sampling-free) value of the decoder-based bound for small layouts."""

    p_success_e: float
    p_success_m: float
    pi_e: float
    pi_m: float
    gamma_lb: float
    gamma_lb_confusion: float


def gamma_bound_exact(layout: PlanarLayout, model: NoiseModel, decoder: str) -> ExactBound:
    """The Monte Carlo bound's expectation target, computed by enumeration."""
    stats = []
    for sector in ("e", "m"):
        p = sector_probability(model, sector)
        joint = coset_probabilities(layout, sector, p)
        guess = guess_table(layout, sector, decoder, p)
        confusion = np.zeros((2, 2))
        for true_cls in (0, 1):
            np.add.at(confusion[true_cls], guess, joint[:, true_cls])
        success = min(float(np.trace(confusion)), 1.0)
        vacuum = min(float(confusion[0].sum()), 1.0)
        stats.append((success, vacuum, confusion_information(confusion)))
    (p_e, pi_e, ie), (p_m, pi_m, im) = stats
    bound = gamma_lower_bound(
        mutual_information_bound(p_e, pi_e), mutual_information_bound(p_m, pi_m), pi_e, pi_m
    )
    return ExactBound(p_e, p_m, pi_e, pi_m, bound.value, gamma_lower_bound(ie, im, pi_e, pi_m).value)


def sweep(
    layout_sizes,
    p_grid,
    n_samples: int,
    seed: int,
    decoder: str = "matching",
    workers: int = 1,
    stream_id: int = 0,
) -> list[GammaEstimate]:
    """Cartesian sweep over (L, p) with ``p_x = p_z = p``.

    Every point draws from the same stream, so neighbouring p values share
    their uniforms (common random numbers) and the table is deterministic.
    """
    sizes, grid = list(layout_sizes), list(p_grid)
    if not sizes or not grid:
        raise ValueError("sweep grids must be non-empty")
    stream = SeededStream(seed, stream_id)
    return [
        estimate_gamma_mc(build_layout(L), NoiseModel.symmetric(p), decoder, n_samples, stream, workers)
        for L in sizes
        for p in grid
    ]
