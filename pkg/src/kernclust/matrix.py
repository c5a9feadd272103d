"""Dense symmetric matrices, PSD checks, Gram factorization and matrix I/O."""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import NotPsd, ParseError, SolverError

log = logging.getLogger(__name__)

DEFAULT_TOL = 1e-9
ASYMMETRY_WARN = 1e-8


class SymMatrix:
    """Real symmetric matrix; symmetry is enforced on construction.

    The input is replaced by ``(M + M.T) / 2``.  ``asymmetry`` records the
    largest ``|m_ij - m_ji|`` of the raw input and a warning is logged when
    it exceeds 1e-8.
    """

    __slots__ = ("_entries", "asymmetry")

    def __init__(self, entries):
        a = np.array(entries, dtype=float, copy=True)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {a.shape}")
        if a.shape[0] == 0:
            raise ValueError("matrix dimension must be at least 1")
        if not np.all(np.isfinite(a)):
            raise ValueError("matrix entries must be finite")
        self.asymmetry = float(np.max(np.abs(a - a.T)))
        if self.asymmetry > ASYMMETRY_WARN:
            log.warning("input matrix asymmetric by %.3g; symmetrizing", self.asymmetry)
        a = 0.5 * (a + a.T)
        a.setflags(write=False)
        self._entries = a

    @property
    def entries(self) -> np.ndarray:
        return self._entries

    @property
    def dim(self) -> int:
        return self._entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self._entries
        return self._entries.astype(dtype)

    def __repr__(self):
        return f"SymMatrix(dim={self.dim})"

    def __eq__(self, other):
        if not isinstance(other, SymMatrix):
            return NotImplemented
        return np.array_equal(self._entries, other._entries)

    __hash__ = None


def as_array(M) -> np.ndarray:
    """Return the entries of ``M`` (a SymMatrix or array-like) as a float array."""
    if isinstance(M, SymMatrix):
        return M.entries
    return SymMatrix(M).entries


def _scale(a: np.ndarray) -> float:
    return max(1.0, float(np.max(np.abs(a))))


@dataclass(frozen=True)
class GramFactor:
    """Vectors (rows of ``vectors``) whose inner products reproduce a PSD matrix."""

    vectors: np.ndarray

    @property
    def count(self) -> int:
        return self.vectors.shape[0]

    @property
    def ambient_dim(self) -> int:
        return self.vectors.shape[1]

    def gram(self) -> np.ndarray:
        return self.vectors @ self.vectors.T


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # columns

    def reconstruct(self) -> np.ndarray:
        V = self.eigenvectors
        return (V * self.eigenvalues) @ V.T


def symmetric_eig(M) -> Spectrum:
    """Eigendecomposition with ascending eigenvalues (LAPACK ``syevd``)."""
    a = as_array(M)
    try:
        w, V = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:
        raise SolverError(f"eigensolver failed: {exc}") from exc
    return Spectrum(w, V)


def min_eigenvalue(M) -> float:
    a = as_array(M)
    try:
        return float(np.linalg.eigvalsh(a)[0])
    except np.linalg.LinAlgError as exc:
        raise SolverError(f"eigensolver failed: {exc}") from exc


def is_psd(M, tol: float = DEFAULT_TOL) -> bool:
    a = as_array(M)
    return min_eigenvalue(a) >= -tol * _scale(a)


def is_centered(M, tol: float = DEFAULT_TOL) -> bool:
    a = as_array(M)
    return abs(float(a.sum())) <= tol * max(1.0, float(np.abs(a).sum()))


def gram_factor(M, tol: float = DEFAULT_TOL) -> GramFactor:
    """Pivoted (outer-product) Cholesky factorization of a PSD matrix.

    Pivots on the largest remaining diagonal entry and stops once that entry
    drops to ``tol * max|m_ij|``; the returned vectors therefore live in
    dimension equal to the numerical rank.

    Raises:
        NotPsd: a pivot is below ``-tol * scale`` or the discarded Schur
            complement is not negligible.
    """
    a = as_array(M)
    n = a.shape[0]
    scale = _scale(a)
    thresh = tol * scale
    S = a.copy()
    L = np.zeros((n, n))
    perm = np.arange(n)
    rank = 0
    for j in range(n):
        d = np.diag(S)[j:]
        p = j + int(np.argmax(d))
        if S[p, p] <= thresh:
            break
        if p != j:
            S[[j, p], :] = S[[p, j], :]
            S[:, [j, p]] = S[:, [p, j]]
            L[[j, p], :] = L[[p, j], :]
            perm[[j, p]] = perm[[p, j]]
        piv = math.sqrt(S[j, j])
        L[j:, j] = S[j:, j] / piv
        S[j:, j:] -= np.outer(L[j:, j], L[j:, j])
        rank += 1
    rest = S[rank:, rank:]
    if rest.size:
        if np.min(np.diag(rest)) < -thresh:
            raise NotPsd(f"negative pivot {np.min(np.diag(rest)):.3g}")
        if np.max(np.abs(rest)) > thresh:
            raise NotPsd("residual Schur complement is not negligible")
    vectors = np.zeros((n, rank))
    vectors[perm] = L[:, :rank]
    return GramFactor(vectors)


def gram_error(M, factor: GramFactor) -> float:
    return float(np.max(np.abs(as_array(M) - factor.gram())))


# --- file formats ---------------------------------------------------------

def _check_finite(a: np.ndarray, source: str) -> np.ndarray:
    if not np.all(np.isfinite(a)):
        raise ParseError(f"{source}: NaN or Inf entries are not allowed")
    return a


def parse_matrix_text(text: str, source: str = "<text>") -> SymMatrix:
    """Parse ``n`` on the first line followed by ``n`` rows of ``n`` reals."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ParseError(f"{source}: empty input")
    try:
        n = int(lines[0].split()[0])
    except ValueError as exc:
        raise ParseError(f"{source}: first line must be the dimension") from exc
    if n < 1 or len(lines) < n + 1:
        raise ParseError(f"{source}: expected {n} matrix rows")
    try:
        rows = [[float(t) for t in ln.split()] for ln in lines[1:n + 1]]
    except ValueError as exc:
        raise ParseError(f"{source}: non-numeric entry") from exc
    if any(len(r) != n for r in rows):
        raise ParseError(f"{source}: every row needs {n} entries")
    return SymMatrix(_check_finite(np.array(rows), source))


def parse_matrix_json(text: str, source: str = "<json>") -> SymMatrix:
    try:
        obj = json.loads(text)
        n = int(obj["dim"])
        a = np.array(obj["rows"], dtype=float)
    except (ValueError, KeyError, TypeError) as exc:
        raise ParseError(f"{source}: malformed matrix JSON") from exc
    if a.shape != (n, n) or n < 1:
        raise ParseError(f"{source}: rows do not form a {n}x{n} matrix")
    return SymMatrix(_check_finite(a, source))


def read_matrix(path) -> SymMatrix:
    """Read a matrix file; JSON is detected by a leading ``{``."""
    path = Path(path)
    text = path.read_text()
    if text.lstrip().startswith("{"):
        return parse_matrix_json(text, str(path))
    return parse_matrix_text(text, str(path))


def format_matrix_text(M) -> str:
    a = as_array(M)
    rows = "\n".join(" ".join(repr(float(x)) for x in row) for row in a)
    return f"{a.shape[0]}\n{rows}\n"


def format_matrix_json(M) -> str:
    a = as_array(M)
    return json.dumps({"dim": a.shape[0], "rows": a.tolist()})
