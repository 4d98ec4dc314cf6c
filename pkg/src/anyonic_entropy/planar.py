"""Geometry and stabilizer structure of the L x L planar code.

The layout is the checkerboard ("rotated") realisation with one qubit per
vertex of an L x L grid. Qubit ``(r, c)`` has index ``r * L + c``. Plaquettes
sit at corner coordinates ``(i, j)`` with ``0 <= i, j <= L`` and cover the
qubits ``(i-1..i, j-1..j)`` that exist. A plaquette is coloured ``s`` when
``i + j`` is even and ``p`` otherwise.

* interior plaquettes (``1 <= i, j <= L-1``) have weight 4 and are kept for
  both colours;
* weight-2 plaquettes on the top and bottom rows are kept only if they are
  ``s``-coloured, those on the left and right columns only if ``p``-coloured.

``s``-plaquettes (``A_s``, products of sigma-x) detect sigma-z errors and host
``e`` anyons, which are absorbed at the left and right edges (where only
``p``-type boundary checks live). Symmetrically ``m`` anyons live on
``p``-plaquettes and are absorbed at the top and bottom edges.

Logical classes are cut parities:

* ``z_cut`` is column 0. A sigma-z chain that carries an ``e`` from the left
  edge to the right edge crosses it an odd number of times.
* ``x_cut`` is row 0, the analogue for sigma-x chains carrying ``m`` anyons
  from top to bottom.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable

import numpy as np


@dataclass(frozen=True)
class ErrorPattern:
    x_flips: frozenset[int] = frozenset()
    z_flips: frozenset[int] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "x_flips", frozenset(int(q) for q in self.x_flips))
        object.__setattr__(self, "z_flips", frozenset(int(q) for q in self.z_flips))

    def __xor__(self, other: "ErrorPattern") -> "ErrorPattern":
        return ErrorPattern(self.x_flips ^ other.x_flips, self.z_flips ^ other.z_flips)

    @classmethod
    def from_arrays(cls, x_bits: np.ndarray, z_bits: np.ndarray) -> "ErrorPattern":
        return cls(frozenset(np.flatnonzero(x_bits)), frozenset(np.flatnonzero(z_bits)))

    def to_arrays(self, qubit_count: int) -> tuple[np.ndarray, np.ndarray]:
        x = np.zeros(qubit_count, dtype=np.uint8)
        z = np.zeros(qubit_count, dtype=np.uint8)
        x[list(self.x_flips)] = 1
        z[list(self.z_flips)] = 1
        return x, z


@dataclass(frozen=True)
class Syndrome:
    e_defects: frozenset[int] = frozenset()
    m_defects: frozenset[int] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "e_defects", frozenset(int(i) for i in self.e_defects))
        object.__setattr__(self, "m_defects", frozenset(int(i) for i in self.m_defects))

    def __xor__(self, other: "Syndrome") -> "Syndrome":
        return Syndrome(self.e_defects ^ other.e_defects, self.m_defects ^ other.m_defects)

    @property
    def is_trivial(self) -> bool:
        return not self.e_defects and not self.m_defects


@dataclass(frozen=True, order=True)
class LogicalClass:
    """Parities of net ``e`` and ``m`` transport across the code."""

    e_parity: int = 0
    m_parity: int = 0

    @property
    def index(self) -> int:
        """Class index in 0..3 (vacuum, e, m, e and m)."""
        return self.e_parity + 2 * self.m_parity

    @classmethod
    def from_index(cls, index: int) -> "LogicalClass":
        return cls(index & 1, (index >> 1) & 1)


@dataclass(frozen=True)
class PlanarLayout:
    L: int
    qubit_count: int
    qubit_coords: tuple[tuple[int, int], ...]
    s_stabilizers: tuple[tuple[int, ...], ...]
    p_stabilizers: tuple[tuple[int, ...], ...]
    s_positions: tuple[tuple[int, int], ...]
    p_positions: tuple[tuple[int, int], ...]
    z_cut: tuple[int, ...]
    x_cut: tuple[int, ...]
    e_boundaries: tuple[str, str] = ("left", "right")
    m_boundaries: tuple[str, str] = ("top", "bottom")
    z_logical: tuple[int, ...] = field(default=(), compare=False)
    x_logical: tuple[int, ...] = field(default=(), compare=False)

    @cached_property
    def s_check_matrix(self) -> np.ndarray:
        """Rows are s-plaquettes, columns qubits; detects sigma-z flips."""
        return _check_matrix(self.s_stabilizers, self.qubit_count)

    @cached_property
    def p_check_matrix(self) -> np.ndarray:
        return _check_matrix(self.p_stabilizers, self.qubit_count)

    @cached_property
    def z_cut_vector(self) -> np.ndarray:
        v = np.zeros(self.qubit_count, dtype=np.uint8)
        v[list(self.z_cut)] = 1
        return v

    @cached_property
    def x_cut_vector(self) -> np.ndarray:
        v = np.zeros(self.qubit_count, dtype=np.uint8)
        v[list(self.x_cut)] = 1
        return v

    def to_dict(self) -> dict:
        return {
            "L": self.L,
            "qubit_count": self.qubit_count,
            "qubit_coords": [list(c) for c in self.qubit_coords],
            "s_stabilizers": [
                {"position": list(pos), "support": list(sup)}
                for pos, sup in zip(self.s_positions, self.s_stabilizers)
            ],
            "p_stabilizers": [
                {"position": list(pos), "support": list(sup)}
                for pos, sup in zip(self.p_positions, self.p_stabilizers)
            ],
            "e_boundaries": list(self.e_boundaries),
            "m_boundaries": list(self.m_boundaries),
            "z_cut": list(self.z_cut),
            "x_cut": list(self.x_cut),
            "z_logical": list(self.z_logical),
            "x_logical": list(self.x_logical),
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def _check_matrix(supports: Iterable[Iterable[int]], n: int) -> np.ndarray:
    supports = list(supports)
    h = np.zeros((len(supports), n), dtype=np.uint8)
    for row, sup in enumerate(supports):
        h[row, list(sup)] = 1
    h.setflags(write=False)
    return h


@lru_cache(maxsize=None)
def build_layout(L: int) -> PlanarLayout:
    """Build the L x L planar code (L qubits per side, L**2 - 1 stabilizers)."""
    if int(L) != L or L < 2:
        raise ValueError(f"planar code needs integer L >= 2, got {L!r}")
    L = int(L)

    def qubit(r: int, c: int) -> int:
        return r * L + c

    s_stabs, p_stabs, s_pos, p_pos = [], [], [], []
    for i in range(L + 1):
        for j in range(L + 1):
            support = tuple(
                qubit(r, c)
                for r in (i - 1, i)
                for c in (j - 1, j)
                if 0 <= r < L and 0 <= c < L
            )
            is_s = (i + j) % 2 == 0
            if len(support) == 4:
                keep = True
            elif len(support) == 2:
                on_top_bottom = i in (0, L)
                keep = is_s if on_top_bottom else not is_s
            else:
                keep = False
            if not keep:
                continue
            if is_s:
                s_stabs.append(support)
                s_pos.append((i, j))
            else:
                p_stabs.append(support)
                p_pos.append((i, j))

    return PlanarLayout(
        L=L,
        qubit_count=L * L,
        qubit_coords=tuple((r, c) for r in range(L) for c in range(L)),
        s_stabilizers=tuple(s_stabs),
        p_stabilizers=tuple(p_stabs),
        s_positions=tuple(s_pos),
        p_positions=tuple(p_pos),
        z_cut=tuple(qubit(r, 0) for r in range(L)),
        x_cut=tuple(qubit(0, c) for c in range(L)),
        z_logical=tuple(qubit(0, c) for c in range(L)),
        x_logical=tuple(qubit(r, 0) for r in range(L)),
    )


def _validate(layout: PlanarLayout, err: ErrorPattern) -> None:
    for q in err.x_flips | err.z_flips:
        if not 0 <= q < layout.qubit_count:
            raise ValueError(f"qubit index {q} out of range for L={layout.L}")


def syndrome_of(layout: PlanarLayout, err: ErrorPattern) -> Syndrome:
    _validate(layout, err)
    e = [i for i, sup in enumerate(layout.s_stabilizers) if len(err.z_flips.intersection(sup)) % 2]
    m = [i for i, sup in enumerate(layout.p_stabilizers) if len(err.x_flips.intersection(sup)) % 2]
    return Syndrome(frozenset(e), frozenset(m))


def logical_class_of(layout: PlanarLayout, err: ErrorPattern) -> LogicalClass:
    _validate(layout, err)
    return LogicalClass(
        len(err.z_flips.intersection(layout.z_cut)) % 2,
        len(err.x_flips.intersection(layout.x_cut)) % 2,
    )


def is_equivalent(layout: PlanarLayout, e1: ErrorPattern, e2: ErrorPattern) -> bool:
    """True iff ``e1 ^ e2`` is a stabilizer (no syndrome, trivial class)."""
    diff = e1 ^ e2
    return syndrome_of(layout, diff).is_trivial and logical_class_of(layout, diff) == LogicalClass()


# Vectorised helpers used by the Monte Carlo and enumeration code paths.

def syndrome_bits(check_matrix: np.ndarray, flips: np.ndarray) -> np.ndarray:
    """Syndrome bits for a batch of flip vectors (rows)."""
    return ((flips.astype(np.int32) @ check_matrix.T.astype(np.int32)) & 1).astype(np.uint8)


def cut_parity(cut_vector: np.ndarray, flips: np.ndarray) -> np.ndarray:
    return ((flips.astype(np.int32) @ cut_vector.astype(np.int32)) & 1).astype(np.uint8)


def pack_bits(bits: np.ndarray) -> np.ndarray:
    """Pack rows of bits into integers, bit ``k`` weighted by ``2**k``."""
    weights = np.left_shift(np.int64(1), np.arange(bits.shape[-1], dtype=np.int64))
    return bits.astype(np.int64) @ weights
