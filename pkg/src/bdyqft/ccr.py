"""Degree-truncated CCR algebras with full or partial commutation relations.

Generators Phi_0, ..., Phi_{n-1} are self-adjoint.  For every pair (i, j)
marked as commuting, [Phi_i, Phi_j] = i tau_ij 1; other pairs are free.
Elements are dicts {word: coeff} with words tuples of generator indices.

Normal words are the lexicographically smallest representatives of their
partial-commutation class: the first letter is the smallest letter that can
be moved to the front, and the rest is again normal.  Moving a letter
leftwards past a commuting one produces the scalar correction of the CCR.
With every pair commuting this is plain sorting (a PBW basis).
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from .errors import DegreeOverflow

CLEAN = 1e-14


class SymplecticSpace:
    """Real antisymmetric form on a labelled finite basis."""

    def __init__(self, tau, labels=None):
        self.tau = np.asarray(tau, dtype=float)
        n = self.tau.shape[0]
        self.labels = list(labels) if labels is not None else [str(k) for k in range(n)]

    @property
    def n(self):
        return self.tau.shape[0]

    def antisymmetry_defect(self):
        return float(np.max(np.abs(self.tau + self.tau.T), initial=0.0))


def _add(out, word, c):
    v = out.get(word, 0) + c
    if abs(v) <= CLEAN:
        out.pop(word, None)
    else:
        out[word] = v


class CCRPolyAlgebra:
    def __init__(self, tau, commuting=None, max_degree=4, labels=None, name="ccr"):
        self.space = tau if isinstance(tau, SymplecticSpace) else SymplecticSpace(tau, labels)
        n = self.space.n
        comm = np.ones((n, n), dtype=bool) if commuting is None else np.array(commuting, dtype=bool)
        comm = comm | comm.T
        np.fill_diagonal(comm, True)
        self.comm = comm
        self.max_degree = int(max_degree)
        self.name = name
        self._nf = lru_cache(maxsize=None)(self._nf_word)
        self._basis = None

    @property
    def n(self):
        return self.space.n

    @property
    def labels(self):
        return self.space.labels

    @property
    def tau(self):
        return self.space.tau

    # ---- words ----------------------------------------------------------------
    def _smallest_movable(self, word):
        best = None
        for k, x in enumerate(word):
            if best is not None and x >= word[best]:
                continue
            if all(self.comm[x, word[m]] for m in range(k)):
                best = k
        return best

    def is_normal(self, word):
        return all(self._smallest_movable(word[j:]) == 0 for j in range(len(word)))

    def _nf_word(self, word):
        if self.is_normal(word):
            return ((word, 1.0 + 0j),)
        k = self._smallest_movable(word)
        x = word[k]
        rest = word[:k] + word[k + 1:]
        out = {}
        for r, c in self._nf(rest):
            for w, c2 in self._nf((x,) + r):
                _add(out, w, c * c2)
        # Phi_y Phi_x = Phi_x Phi_y + i tau(y, x)
        for m in range(k):
            y = word[m]
            t = self.tau[y, x]
            if t != 0:
                shorter = word[:m] + word[m + 1:k] + word[k + 1:]
                for w, c2 in self._nf(shorter):
                    _add(out, w, 1j * t * c2)
        return tuple(out.items())

    def normal_form(self, elem):
        out = {}
        for w, c in elem.items():
            for w2, c2 in self._nf(tuple(w)):
                _add(out, w2, c * c2)
        return out

    # ---- algebra --------------------------------------------------------------
    def unit(self):
        return {(): 1.0 + 0j}

    def gen(self, i, coeff=1.0):
        return {(i,): complex(coeff)}

    def degree(self, elem):
        return max((len(w) for w in elem), default=0)

    def mul(self, x, y, check=True):
        if check and self.degree(x) + self.degree(y) > self.max_degree:
            raise DegreeOverflow(
                "product exceeds the truncation degree", degree=self.degree(x) + self.degree(y), max_degree=self.max_degree
            )
        out = {}
        for (w1, c1), (w2, c2) in itertools.product(x.items(), y.items()):
            for w, c in self._nf(w1 + w2):
                _add(out, w, c1 * c2 * c)
        return out

    def add(self, *elems, coeffs=None):
        out = {}
        coeffs = coeffs or [1] * len(elems)
        for e, s in zip(elems, coeffs):
            for w, c in e.items():
                _add(out, w, s * c)
        return out

    def star(self, x):
        return self.normal_form({tuple(reversed(w)): np.conj(c) for w, c in x.items()})

    def commutator(self, x, y):
        return self.add(self.mul(x, y), self.mul(y, x), coeffs=[1, -1])

    # ---- filtered pieces as vectors -----------------------------------------------
    def basis(self, degree=None):
        degree = self.max_degree if degree is None else degree
        if self._basis is None or self._basis[0] != degree:
            words = [
                w for d in range(degree + 1) for w in itertools.product(range(self.n), repeat=d) if self.is_normal(w)
            ]
            self._basis = (degree, words, {w: k for k, w in enumerate(words)})
        return self._basis[1]

    def index(self, degree=None):
        self.basis(degree)
        return self._basis[2]

    def vector(self, elem, degree=None):
        idx = self.index(degree)
        v = np.zeros(len(idx), dtype=complex)
        for w, c in self.normal_form(elem).items():
            if w not in idx:
                raise DegreeOverflow("element exceeds the truncation degree", word=list(w))
            v[idx[w]] += c
        return v

    def element(self, vec, degree=None):
        return {w: complex(c) for w, c in zip(self.basis(degree), vec) if abs(c) > CLEAN}

    def dim(self, degree=None):
        return len(self.basis(degree))

    def free_pairs(self):
        return [(i, j) for i in range(self.n) for j in range(i + 1, self.n) if not self.comm[i, j]]
