"""The 16 admissible sparsity patterns of 4x4 coefficient matrices.

A pattern is a set of three upper-triangle positions whose graph on the
frame indices {0, 1, 2, 3} has no isolated vertex (no zero column), i.e. a
spanning tree of K4. Permutations of the normal indices 1..3 act on
patterns; the four orbits are the frame types B, C, D, F.

Pattern ids (stable, used in CSV files):

    B: 0             {01 02 03}
    C: 1..6          {01 02 13} {01 02 23} {01 03 23} {01 03 12} {02 03 12} {02 03 13}
    D: 7..9          {01 12 13} {02 12 23} {03 13 23}
    F: 10..15        {01 12 23} {03 12 13} {03 12 23} {01 13 23} {02 12 13} {02 13 23}

Within each pattern the channels x1, x2, x3 are the entries in row-major
order, e.g. type C id 1 is ((0,1), (0,2), (1,3)).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Tuple

import numpy as np

TYPES = ("B", "C", "D", "F")

_RAW = [
    ("B", "01 02 03"),
    ("C", "01 02 13"), ("C", "01 02 23"), ("C", "01 03 23"),
    ("C", "01 03 12"), ("C", "02 03 12"), ("C", "02 03 13"),
    ("D", "01 12 13"), ("D", "02 12 23"), ("D", "03 13 23"),
    ("F", "01 12 23"), ("F", "03 12 13"), ("F", "03 12 23"),
    ("F", "01 13 23"), ("F", "02 12 13"), ("F", "02 13 23"),
]

CANONICAL = {"B": 0, "C": 1, "D": 7, "F": 10}

# permutations of the frame rows fixing row 0: new row k = old row perm[k]
PERMUTATIONS: Tuple[Tuple[int, ...], ...] = tuple(
    (0,) + p for p in itertools.permutations((1, 2, 3)))


def _pairs(text):
    return tuple(sorted((int(a), int(b)) for a, b in text.split()))


def permute_pairs(pairs, perm):
    """Positions of a pattern after reordering frame rows by ``perm``.

    Entry (a, b) of P X P^T is X[perm[a], perm[b]], so old position (i, j)
    moves to (inv[i], inv[j]).
    """
    inv = {v: k for k, v in enumerate(perm)}
    return tuple(sorted(tuple(sorted((inv[i], inv[j]))) for i, j in pairs))


def permutation_matrix(perm):
    return np.eye(4)[list(perm)]


@dataclass(frozen=True)
class PatternCatalog:
    masks: Tuple[Tuple[Tuple[int, int], ...], ...]
    type_of: Tuple[str, ...]
    orbit: Dict[int, FrozenSet[int]] = field(compare=False)

    @classmethod
    def build(cls):
        masks = tuple(_pairs(t) for _, t in _RAW)
        types = tuple(t for t, _ in _RAW)
        index = {m: k for k, m in enumerate(masks)}
        orbit = {k: frozenset(index[permute_pairs(m, p)] for p in PERMUTATIONS)
                 for k, m in enumerate(masks)}
        return cls(masks, types, orbit)

    def __len__(self):
        return len(self.masks)

    def id_of(self, pairs) -> int:
        return self.masks.index(tuple(sorted(pairs)))

    def ids_of_type(self, frame_type) -> List[int]:
        return [k for k, t in enumerate(self.type_of) if t == frame_type]

    def matrix(self, pattern_id) -> np.ndarray:
        """Boolean 4x4 mask, symmetric (both triangles marked)."""
        M = np.zeros((4, 4), dtype=bool)
        for i, j in self.masks[pattern_id]:
            M[i, j] = M[j, i] = True
        return M

    def channels(self, X, pattern_id):
        """x1, x2, x3 samples of a stack of coefficient matrices."""
        return np.stack([X[..., i, j] for i, j in self.masks[pattern_id]], axis=-1)

    def assemble(self, channels, pattern_id):
        channels = np.asarray(channels, dtype=float)
        X = np.zeros(channels.shape[:-1] + (4, 4))
        for k, (i, j) in enumerate(self.masks[pattern_id]):
            X[..., i, j] = channels[..., k]
            X[..., j, i] = -channels[..., k]
        return X

    def residual(self, X, pattern_id) -> float:
        """Largest off-pattern upper-triangle magnitude over all samples."""
        off = ~self.matrix(pattern_id)
        np.fill_diagonal(off, False)
        X = np.asarray(X)
        if not off.any():
            return 0.0
        return float(np.abs(X[..., off]).max()) if X.size else 0.0


CATALOG = PatternCatalog.build()


@dataclass(frozen=True)
class Match:
    pattern_id: int
    permutation: Tuple[int, ...]
    residual: float

    @property
    def frame_type(self):
        return CATALOG.type_of[self.pattern_id]


@dataclass(frozen=True)
class Classification:
    matches: Tuple[Match, ...]
    degenerate: bool
    best_residual: Dict[str, float]
    tol: float

    @property
    def types(self):
        return sorted({m.frame_type for m in self.matches})

    @property
    def unique_type(self):
        t = self.types
        if self.degenerate or len(t) != 1:
            return None
        return t[0]


_UPPER = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
_OFF = np.array([[p not in m for p in _UPPER] for m in CATALOG.masks])


def type_residuals(X) -> Dict[str, float]:
    """Smallest pattern residual within each type (orbits are closed under
    the permutations, so this is permutation independent)."""
    X = np.asarray(X, dtype=float).reshape(-1, 4, 4)
    peak = np.array([np.abs(X[:, i, j]).max() if len(X) else 0.0 for i, j in _UPPER])
    res = np.where(_OFF, peak, 0.0).max(axis=1)
    return {t: float(min(res[k] for k in CATALOG.ids_of_type(t))) for t in TYPES}


def classify_pattern(X, tol=1e-6) -> Classification:
    """All (pattern, permutation) pairs that P X P^T satisfies within tol.

    ``X`` is a stack of coefficient matrices (or a CoefficientPath). A frame
    index whose row of X stays within tol everywhere makes the data
    degenerate: it then fits several types and no unique type is reported.
    """
    X = np.asarray(getattr(X, "X", X), dtype=float)
    if X.ndim == 2:
        X = X[None]
    matches = []
    for perm in PERMUTATIONS:
        P = permutation_matrix(perm)
        Y = P @ X @ P.T
        for k in range(len(CATALOG)):
            r = CATALOG.residual(Y, k)
            if r <= tol:
                matches.append(Match(k, perm, r))
    row_max = np.abs(X).max(axis=(0, 2))
    degenerate = bool(np.any(row_max <= tol))
    return Classification(tuple(matches), degenerate, type_residuals(X), tol)
