"""Cached six-fold coefficients for resonant tuples.

Λ(n1..n6) depends only on the multiset of its six indices, but the
resonant sum pairs a triple ``(n1, n2, n3)`` with a triple
``(n4, n5, n6)`` of equal total.  The table therefore indexes the sorted
triples with entries ``<= N`` and stores one symmetric matrix ``L`` with
``L[a, b] = Λ(triple_a + triple_b)`` when the two triples have the same sum
and zero otherwise.  Canonical keys sort each triple and put the smaller
triple first.

``constant`` is the factor that turns the Λ-sum into the space-time
integral: the resonant time integral ``pi/2``.  The direct space-time
oracle in :mod:`strichartz.flows` checks it.
"""
from __future__ import annotations

import hashlib
import json
import math
import os
from dataclasses import dataclass, field
from itertools import combinations_with_replacement, permutations
from pathlib import Path

import numpy as np

from .hermite import hermite_functions
from .integrals import time_integral
from .quadrature import gauss_hermite_rule

TABLE_CAP = 16
SCHEMA_VERSION = 1
CONVENTION_ID = "physicists-hermite/lambda-bare/constant-time-integral"


class TableCapError(ValueError):
    pass


def canonical_key(tup) -> tuple[int, ...]:
    """Canonical form of a resonant 6-tuple under the 72-element symmetry group."""
    a = tuple(sorted(tup[:3]))
    b = tuple(sorted(tup[3:]))
    return a + b if a <= b else b + a


def _multiplicity(t) -> int:
    return len(set(permutations(t)))


@dataclass
class LambdaTable:
    max_order: int
    triples: np.ndarray            # (T, 3) sorted triples, grouped by sum
    matrix: np.ndarray             # (T, T) block matrix of Λ values
    constant: float = field(default_factory=lambda: time_integral(0.0))
    convention: str = CONVENTION_ID

    def __post_init__(self):
        self.triples = np.asarray(self.triples, dtype=np.int64).reshape(-1, 3)
        self.sums = self.triples.sum(axis=1)
        self.multiplicity = np.array([_multiplicity(tuple(t)) for t in self.triples])
        self._index = {tuple(int(v) for v in t): i for i, t in enumerate(self.triples)}

    @property
    def size(self) -> int:
        return self.max_order + 1

    def __getitem__(self, tup) -> float:
        """Λ for any 6-tuple (zero when non-resonant or out of range)."""
        tup = tuple(int(v) for v in tup)
        if len(tup) != 6:
            raise KeyError("expected a 6-tuple")
        if sum(tup[:3]) != sum(tup[3:]):
            return 0.0
        key = canonical_key(tup)
        try:
            i, j = self._index[key[:3]], self._index[key[3:]]
        except KeyError:
            raise KeyError(f"{tup} outside table of order {self.max_order}") from None
        return float(self.matrix[i, j])

    def entries(self) -> dict[tuple[int, ...], float]:
        """Canonical entries ``{(n1..n6): Λ}`` with both triples summing equally."""
        out = {}
        for i, j in zip(*np.nonzero(np.triu(self.sums[:, None] == self.sums[None, :]))):
            out[tuple(int(v) for v in self.triples[i]) + tuple(int(v) for v in self.triples[j])] = float(self.matrix[i, j])
        return out

    def digest(self) -> str:
        return hashlib.sha256(self.to_json().encode()).hexdigest()

    def to_json(self) -> str:
        entries = [list(k) + [v] for k, v in sorted(self.entries().items())]
        doc = {
            "schema_version": SCHEMA_VERSION,
            "convention": self.convention,
            "max_order": self.max_order,
            "constant": self.constant,
            "n_entries": len(entries),
            "entries": entries,
        }
        return json.dumps(doc, indent=None, separators=(",", ":"))

    def save(self, path) -> Path:
        path = Path(path)
        path.write_text(self.to_json() + "\n")
        return path

    @classmethod
    def from_json(cls, text: str) -> "LambdaTable":
        doc = json.loads(text)
        if doc.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema version {doc.get('schema_version')}")
        N = int(doc["max_order"])
        triples = _sorted_triples(N)
        index = {t: i for i, t in enumerate(triples)}
        L = np.zeros((len(triples), len(triples)))
        for row in doc["entries"]:
            key, value = tuple(int(v) for v in row[:6]), float(row[6])
            i, j = index[key[:3]], index[key[3:]]
            L[i, j] = L[j, i] = value
        return cls(max_order=N, triples=np.array(triples), matrix=L,
                   constant=float(doc["constant"]), convention=doc["convention"])

    @classmethod
    def load(cls, path) -> "LambdaTable":
        return cls.from_json(Path(path).read_text())


def _sorted_triples(N: int) -> list[tuple[int, int, int]]:
    triples = list(combinations_with_replacement(range(N + 1), 3))
    return sorted(triples, key=lambda t: (sum(t), t))


def build_lambda_table(N: int, cap: int = TABLE_CAP) -> LambdaTable:
    """Compute Λ for every resonant tuple with entries ``<= N``.

    Each sorted triple is evaluated once at the quadrature nodes; the
    block for total ``k`` is then a weighted Gram product, which visits
    each canonical pair once and is symmetric by construction.
    """
    N = int(N)
    if N < 0:
        raise ValueError("table order must be non-negative")
    if N > cap:
        raise TableCapError(f"table order {N} exceeds cap {cap}")
    triples = _sorted_triples(N)
    t = np.array(triples)
    # degree of the six-fold product is at most 6N
    rule = gauss_hermite_rule(3 * N + 2)
    x = rule.nodes / math.sqrt(3.0)
    psi = hermite_functions(N, x)
    F = psi[t[:, 0]] * psi[t[:, 1]] * psi[t[:, 2]]
    w = rule.scaled_weights / math.sqrt(3.0)
    sums = t.sum(axis=1)
    L = np.zeros((len(t), len(t)))
    for k in np.unique(sums):
        sel = np.nonzero(sums == k)[0]
        block = (F[sel] * w) @ F[sel].T
        L[np.ix_(sel, sel)] = 0.5 * (block + block.T)
    return LambdaTable(max_order=N, triples=t, matrix=L)


CACHE_ENV = "STRICHARTZ_CACHE_DIR"


def cached_table(N: int, cache_dir=None, cap: int = TABLE_CAP) -> LambdaTable:
    """Load ``lambda-N.json`` from the cache directory, building it if needed.

    The cache directory defaults to ``$STRICHARTZ_CACHE_DIR``; without
    either the table is built in memory.  A stored table is reused only if
    its digest matches the ``.sha256`` file written next to it.
    """
    cache_dir = cache_dir or os.environ.get(CACHE_ENV)
    if not cache_dir:
        return build_lambda_table(N, cap)
    root = Path(cache_dir)
    path = root / f"lambda-{int(N)}.json"
    sha = path.with_suffix(".sha256")
    if path.exists() and sha.exists():
        try:
            table = LambdaTable.load(path)
            if table.digest() == sha.read_text().strip() and table.max_order == N:
                return table
        except (ValueError, KeyError):
            pass
    table = build_lambda_table(N, cap)
    root.mkdir(parents=True, exist_ok=True)
    table.save(path)
    sha.write_text(table.digest() + "\n")
    return table
