"""Decoders: syndrome -> guess of the logical class.

Two decoders are provided so that the gap between a practical decoder and the
optimal one can be measured:

``decode_matching``
    Minimum-weight perfect matching per sector, with every defect free to pair
    with the nearest absorbing boundary instead of another defect. The
    matching itself is delegated to PyMatching's blossom implementation on
    the decoding graph (stabilizers as nodes, qubits as unit-weight edges,
    single-check qubits as boundary edges), which is exact for any number of
    defects. The returned correction is a set of shortest chains.

``decode_ml_exact``
    Exact maximum likelihood by enumerating all ``2**n`` flip patterns of a
    sector and summing their probabilities by (syndrome, class) coset. Only
    feasible for ``qubit_count <= 16``.

The two sectors (sigma-z flips / e anyons and sigma-x flips / m anyons) are
decoded independently.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import pymatching

from .noise import NoiseModel
from .planar import (
    ErrorPattern,
    LogicalClass,
    PlanarLayout,
    Syndrome,
    build_layout,
    cut_parity,
    logical_class_of,
    pack_bits,
    syndrome_bits,
)

#: Largest qubit count accepted by the enumeration-based routines.
ML_MAX_QUBITS = 16

SECTORS = ("e", "m")


@dataclass(frozen=True)
class Correction:
    pattern: ErrorPattern
    guessed_class: LogicalClass


def sector_data(layout: PlanarLayout, sector: str) -> tuple[np.ndarray, np.ndarray]:
    """Check matrix and cut vector for a sector ('e' -> sigma-z flips, 'm' -> sigma-x)."""
    if sector == "e":
        return layout.s_check_matrix, layout.z_cut_vector
    if sector == "m":
        return layout.p_check_matrix, layout.x_cut_vector
    raise ValueError(f"unknown sector {sector!r}")


def sector_probability(model: NoiseModel, sector: str) -> float:
    return model.p_z if sector == "e" else model.p_x


@lru_cache(maxsize=None)
def _matcher(L: int, sector: str) -> pymatching.Matching:
    h, _ = sector_data(build_layout(L), sector)
    return pymatching.Matching.from_check_matrix(h)


def _defects_to_bits(defects, count: int) -> np.ndarray:
    bits = np.zeros(count, dtype=np.uint8)
    bits[list(defects)] = 1
    return bits


def decode_matching(layout: PlanarLayout, s: Syndrome) -> Correction:
    """Minimum-weight matching correction for one syndrome."""
    n_s, n_p = len(layout.s_stabilizers), len(layout.p_stabilizers)
    for d in s.e_defects:
        if not 0 <= d < n_s:
            raise ValueError(f"e defect {d} out of range")
    for d in s.m_defects:
        if not 0 <= d < n_p:
            raise ValueError(f"m defect {d} out of range")
    z_fix = _matcher(layout.L, "e").decode(_defects_to_bits(s.e_defects, n_s))
    x_fix = _matcher(layout.L, "m").decode(_defects_to_bits(s.m_defects, n_p))
    pattern = ErrorPattern.from_arrays(x_fix, z_fix)
    return Correction(pattern, logical_class_of(layout, pattern))


def matching_corrections(layout: PlanarLayout, sector: str, syndromes: np.ndarray) -> np.ndarray:
    """Batch matching: rows of syndrome bits -> rows of correction flips."""
    if syndromes.shape[0] == 0:
        return np.zeros((0, layout.qubit_count), dtype=np.uint8)
    return _matcher(layout.L, sector).decode_batch(syndromes).astype(np.uint8)


def matching_classes(layout: PlanarLayout, sector: str, syndromes: np.ndarray) -> np.ndarray:
    """Batch matching: rows of syndrome bits -> guessed class bit per row."""
    _, cut = sector_data(layout, sector)
    return cut_parity(cut, matching_corrections(layout, sector, syndromes))


# --- exact enumeration -------------------------------------------------------

def _check_enumerable(layout: PlanarLayout) -> None:
    if layout.qubit_count > ML_MAX_QUBITS:
        raise ValueError(
            f"exact enumeration limited to {ML_MAX_QUBITS} qubits, L={layout.L} has {layout.qubit_count}"
        )


@lru_cache(maxsize=None)
def coset_weight_table(L: int, sector: str) -> np.ndarray:
    """Count flip patterns by (syndrome, class, Hamming weight).

    Returns an integer array ``t[syndrome_int, class_bit, weight]`` built by
    enumerating every pattern of the sector. Probabilities for any flip rate
    follow by weighting each Hamming weight with ``p**w (1-p)**(n-w)``.
    """
    layout = build_layout(L)
    _check_enumerable(layout)
    h, cut = sector_data(layout, sector)
    n = layout.qubit_count
    patterns = ((np.arange(2**n, dtype=np.int64)[:, None] >> np.arange(n)) & 1).astype(np.uint8)
    syn = pack_bits(syndrome_bits(h, patterns))
    cls = cut_parity(cut, patterns)
    weight = patterns.sum(axis=1)
    table = np.zeros((2 ** h.shape[0], 2, n + 1), dtype=np.int64)
    np.add.at(table, (syn, cls, weight), 1)
    table.setflags(write=False)
    return table


def weight_probabilities(n: int, p: float) -> np.ndarray:
    w = np.arange(n + 1)
    return np.power(p, w) * np.power(1.0 - p, n - w)


def coset_probabilities(layout: PlanarLayout, sector: str, p: float) -> np.ndarray:
    """Exact ``P(syndrome, class)`` for one sector, shape ``(2**m, 2)``."""
    _check_enumerable(layout)
    table = coset_weight_table(layout.L, sector)
    return table @ weight_probabilities(layout.qubit_count, p)


def ml_class_lookup(layout: PlanarLayout, sector: str, p: float) -> np.ndarray:
    """ML guess for every packed syndrome of a sector; ties go to class 0."""
    probs = coset_probabilities(layout, sector, p)
    return (probs[:, 1] > probs[:, 0]).astype(np.uint8)


def decode_ml_exact(layout: PlanarLayout, s: Syndrome, model: NoiseModel) -> LogicalClass:
    """Maximum-likelihood class for a syndrome (ties broken toward the trivial class)."""
    _check_enumerable(layout)
    e_int = sum(1 << d for d in s.e_defects)
    m_int = sum(1 << d for d in s.m_defects)
    e_guess = ml_class_lookup(layout, "e", model.p_z)[e_int]
    m_guess = ml_class_lookup(layout, "m", model.p_x)[m_int]
    return LogicalClass(int(e_guess), int(m_guess))


def enumerate_syndromes(n_checks: int) -> np.ndarray:
    """All syndromes of a sector as bit rows, row ``k`` packing to ``k``."""
    return ((np.arange(2**n_checks, dtype=np.int64)[:, None] >> np.arange(n_checks)) & 1).astype(np.uint8)


def guess_table(layout: PlanarLayout, sector: str, decoder: str, p: float) -> np.ndarray:
    """Decoder guess for every packed syndrome of a sector (small layouts)."""
    if decoder == "ml":
        return ml_class_lookup(layout, sector, p)
    if decoder == "matching":
        h, _ = sector_data(layout, sector)
        return matching_classes(layout, sector, enumerate_syndromes(h.shape[0]))
    raise ValueError(f"unknown decoder {decoder!r}")
