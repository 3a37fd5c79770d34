"""The magic projection grid P_ij and the truncation tensors T_p.

P_ij is the rank-1 projection onto the entrywise ratio of rows i and j of a
Hadamard matrix; its closed entry formula is

    (P_ij)_kl = (1/N) * H_ik H_jl / (H_il H_jk).

Rows and columns of the grid each sum to the identity, which is exactly the
magic condition.  The truncation tensor T_p collects normalized traces of
p-fold products of grid entries and drives the truncated integration
functional: the (a, b) entry of T_p^r integrates the word u_{a1 b1}...u_{ap bp}
at truncation depth r.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CapExceededError, MagicGridError

DEFAULT_CAP = 4096
MAGIC_TOL = 1e-9

_CHUNK = 64  # row multi-indices processed per batch in truncation_tensor


def check_cap(dim, cap):
    if dim > cap:
        raise CapExceededError(dim, cap)


def multi_indices(n, length):
    """All multi-indices in [0,n)^length, row-major, first digit most significant.

    Returned as an (n^length, length) integer array whose k-th row is the
    digit expansion of k.
    """
    if length == 0:
        return np.zeros((1, 0), dtype=np.intp)
    return np.indices((n,) * length).reshape(length, -1).T


@dataclass(frozen=True)
class MagicGrid:
    """N x N grid of N x N rank-1 projections; projections[i, j] is P_ij."""

    n: int
    projections: np.ndarray  # shape (N, N, N, N)
    source_provenance: str = "unknown"

    def __post_init__(self):
        self.projections.setflags(write=False)


@dataclass(frozen=True)
class MagicReport:
    idempotency_dev: float
    self_adjointness_dev: float
    row_sum_dev: float
    col_sum_dev: float
    tolerance: float

    @property
    def passed(self):
        return max(self.idempotency_dev, self.self_adjointness_dev,
                   self.row_sum_dev, self.col_sum_dev) < self.tolerance

    def to_dict(self):
        return {
            "idempotency_dev": self.idempotency_dev,
            "self_adjointness_dev": self.self_adjointness_dev,
            "row_sum_dev": self.row_sum_dev,
            "col_sum_dev": self.col_sum_dev,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


def _grid_array(h):
    arr = h.array
    n = arr.shape[0]
    return np.einsum("ik,jl,il,jk->ijkl", arr, arr, arr.conj(), arr.conj()) / n


def magic_grid(h, tol=MAGIC_TOL):
    """Build the projection grid of H and abort if any invariant fails.

    Uses the closed entry formula throughout; the diagnostics name the first
    grid position whose idempotency or self-adjointness breaks.
    """
    n = h.n
    p = _grid_array(h)
    grid = MagicGrid(n, p, h.provenance)
    prod = np.einsum("ijkm,ijml->ijkl", p, p)
    idem = np.abs(prod - p).max(axis=(2, 3))
    sadj = np.abs(p - p.conj().transpose(0, 1, 3, 2)).max(axis=(2, 3))
    for devs, what in ((idem, "idempotency"), (sadj, "self-adjointness")):
        if devs.max() > tol:
            i, j = np.unravel_index(int(devs.argmax()), devs.shape)
            raise MagicGridError(
                f"{what} fails at P_({i},{j}): deviation {devs.max():.3e} > {tol:.1e}"
            )
    report = verify_magic(grid, tol=tol)
    if not report.passed:
        raise MagicGridError(f"row/column sums fail: {report.to_dict()}")
    return grid


def verify_magic(grid, tol=MAGIC_TOL):
    """Max deviations from idempotency, self-adjointness and unit row/col sums."""
    p = grid.projections
    n = grid.n
    eye = np.eye(n)
    prod = np.einsum("ijkm,ijml->ijkl", p, p)
    idem = float(np.abs(prod - p).max())
    sadj = float(np.abs(p - p.conj().transpose(0, 1, 3, 2)).max())
    row = float(np.abs(p.sum(axis=1) - eye[None, :, :]).max())
    col = float(np.abs(p.sum(axis=0) - eye[None, :, :]).max())
    return MagicReport(idem, sadj, row, col, tol)


def truncation_tensor(grid, p, cap=DEFAULT_CAP):
    """Dense N^p x N^p tensor with entries tr(P_{i1 j1} ... P_{ip jp}).

    The trace is normalized (tr = Tr/N).  Multi-indices are flattened
    row-major with the first letter most significant.
    """
    if p < 1:
        raise ValueError("word length p must be >= 1")
    n = grid.n
    dim = n**p
    check_cap(dim, cap)
    proj = grid.projections
    digits = multi_indices(n, p)
    out = np.empty((dim, dim), dtype=complex)
    for start in range(0, dim, _CHUNK):
        rows = digits[start:start + _CHUNK]
        # batch of matrix products over all column multi-indices
        block = proj[rows[:, 0][:, None], digits[:, 0][None, :]]
        for s in range(1, p):
            block = block @ proj[rows[:, s][:, None], digits[:, s][None, :]]
        out[start:start + _CHUNK] = np.einsum("abkk->ab", block) / n
    return out


def truncated_integral_word(h, r, a, b, cap=DEFAULT_CAP):
    """Truncated integral of the word u_{a1 b1}...u_{ap bp} at depth r.

    Returns the (a, b) entry of T_p^r; depth 0 gives the Kronecker delta of
    the two index words.
    """
    a = list(a)
    b = list(b)
    if len(a) != len(b) or not a:
        raise ValueError("index lists must be nonempty and of equal length")
    n = h.n
    for idx in (*a, *b):
        if not 0 <= idx < n:
            raise IndexError(f"index {idx} out of range [0, {n})")
    if r < 0:
        raise ValueError("truncation depth must be >= 0")
    if r == 0:
        return complex(a == b)
    p = len(a)
    check_cap(n**p, cap)
    t = truncation_tensor(magic_grid(h), p, cap=cap)
    power = np.linalg.matrix_power(t, r)
    flat_a = int(np.ravel_multi_index(a, (n,) * p))
    flat_b = int(np.ravel_multi_index(b, (n,) * p))
    return complex(power[flat_a, flat_b])


def grid_relations_check(h):
    """Max residual over the four entrywise grid relations for H, conj(H),
    H^t and H^*:

        P^{conj}_ij       = P_ji
        (P^{t})_ij[k,l]   = P_kl[i,j]
        (P^{*})_ij[k,l]   = P_lk[i,j]
        P_ij[k,l]         = P_ji[l,k]

    All four grids are recomputed from scratch; the identities are exact in
    exact arithmetic, so the residual certifies the implementation.
    """
    from . import matrices

    p = _grid_array(h)
    pc = _grid_array(matrices.conjugate(h))
    pt = _grid_array(matrices.transpose(h))
    pa = _grid_array(matrices.adjoint(h))
    residuals = [
        np.abs(pc - np.einsum("jikl->ijkl", p)).max(),
        np.abs(pt - np.einsum("klij->ijkl", p)).max(),
        np.abs(pa - np.einsum("lkij->ijkl", p)).max(),
        np.abs(p - np.einsum("jilk->ijkl", p)).max(),
    ]
    return float(max(residuals))
