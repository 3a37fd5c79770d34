"""Complex Hadamard matrices: constructors, transforms, validation, serialization.

A complex Hadamard matrix is a square matrix with unimodular entries and
pairwise-orthogonal rows.  Everything here is double precision; the validation
tolerances below are deliberately loose enough to absorb roundoff growth with
the matrix size.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import HadamardValidationError

UNIMODULARITY_TOL = 1e-10
ORTHOGONALITY_TOL = 1e-8  # multiplied by N

_MASK64 = (1 << 64) - 1
_SM64_GAMMA = 0x9E3779B97F4A7C15


def splitmix64(seed, count):
    """First `count` outputs of the SplitMix64 generator, as Python ints."""
    state = int(seed) & _MASK64
    out = []
    for _ in range(count):
        state = (state + _SM64_GAMMA) & _MASK64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        z ^= z >> 31
        out.append(z)
    return out


def seeded_phase_matrix(m, n, seed):
    """M x N unimodular phase matrix from a seed.

    Each 64-bit word u maps to the angle 2*pi*u/2^64; entries are filled
    row-major, so the result is bit-reproducible for a given seed.
    """
    words = splitmix64(seed, m * n)
    angles = 2.0 * np.pi * np.array([u / 2.0**64 for u in words])
    return np.exp(1j * angles).reshape(m, n)


def phase_matrix_from_angles(angles):
    """Unimodular matrix exp(i*theta) from a real angle array."""
    theta = np.asarray(angles, dtype=float)
    if theta.ndim != 2:
        raise ValueError("angle array must be two-dimensional")
    return np.exp(1j * theta)


def _check_phase_matrix(q):
    q = np.ascontiguousarray(q, dtype=complex)
    if q.ndim != 2:
        raise ValueError("phase parameter matrix must be two-dimensional")
    dev = np.abs(np.abs(q) - 1.0).max()
    if dev > 1e-12:
        raise ValueError(f"phase parameter matrix is not unimodular (deviation {dev:.3e})")
    return q


@dataclass(frozen=True)
class ValidationReport:
    n: int
    unimodularity_dev: float
    orthogonality_dev: float
    passed: bool
    unimodularity_tol: float
    orthogonality_tol: float

    def to_dict(self):
        return {
            "n": self.n,
            "unimodularity_dev": self.unimodularity_dev,
            "orthogonality_dev": self.orthogonality_dev,
            "unimodularity_tol": self.unimodularity_tol,
            "orthogonality_tol": self.orthogonality_tol,
            "passed": self.passed,
        }


def validate(matrix, uni_tol=UNIMODULARITY_TOL, orth_tol=ORTHOGONALITY_TOL):
    """Check unimodularity and row orthogonality of a square complex matrix.

    The orthogonality tolerance is scaled by N (off-diagonal Gram entries of
    an exact Hadamard matrix vanish; diagonal ones equal N).
    """
    arr = np.asarray(matrix, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {arr.shape}")
    n = arr.shape[0]
    uni_dev = float(np.abs(np.abs(arr) - 1.0).max())
    gram = arr @ arr.conj().T
    orth_dev = float(np.abs(gram - n * np.eye(n)).max())
    passed = uni_dev <= uni_tol and orth_dev <= orth_tol * n
    return ValidationReport(n, uni_dev, orth_dev, passed, uni_tol, orth_tol * n)


@dataclass(frozen=True)
class HadamardMatrix:
    """Validated N x N Hadamard matrix plus a record of how it was built."""

    array: np.ndarray
    provenance: str = "unknown"

    @property
    def n(self):
        return self.array.shape[0]

    def __post_init__(self):
        self.array.setflags(write=False)


def hadamard(matrix, provenance="unknown", check=True):
    """Wrap a raw array as a HadamardMatrix, validating unless told otherwise."""
    arr = np.ascontiguousarray(matrix, dtype=complex)
    if check:
        report = validate(arr)
        if not report.passed:
            raise HadamardValidationError(
                f"matrix is not Hadamard: unimodularity dev {report.unimodularity_dev:.3e}, "
                f"orthogonality dev {report.orthogonality_dev:.3e}"
            )
    return HadamardMatrix(arr, provenance)


def fourier(n):
    """Fourier matrix F_N = (w^{ij}) with w = exp(2*pi*i/N)."""
    if n < 1:
        raise ValueError("Fourier order must be >= 1")
    idx = np.arange(n)
    arr = np.exp(2j * np.pi * np.outer(idx, idx) / n)
    return HadamardMatrix(arr, f"fourier:{n}")


def tensor(h, k):
    """Kronecker product, pair index (i,a) -> i*N_K + a on rows and columns."""
    arr = np.kron(h.array, k.array)
    return HadamardMatrix(
        np.ascontiguousarray(arr), f"tensor({h.provenance},{k.provenance})"
    )


def fourier_group(orders):
    """F_{N_1} (x) ... (x) F_{N_k}, the Fourier matrix of the product group."""
    orders = list(orders)
    if not orders:
        raise ValueError("fourier_group needs at least one order")
    out = fourier(orders[0])
    for n in orders[1:]:
        out = tensor(out, fourier(n))
    prov = "fouriergroup:" + "x".join(str(n) for n in orders)
    return HadamardMatrix(out.array, prov)


def dita(m, n, q, provenance=None):
    """Deformed Fourier matrix with entries Q_{ib} (F_M)_{ij} (F_N)_{ab}.

    Rows are indexed by (i,a) -> i*N + a and columns by (j,b) -> j*N + b.
    With Q identically 1 this is exactly tensor(fourier(M), fourier(N)).
    """
    q = _check_phase_matrix(q)
    if q.shape != (m, n):
        raise ValueError(f"phase parameter matrix has shape {q.shape}, expected {(m, n)}")
    fm = fourier(m).array
    fn = fourier(n).array
    arr = np.einsum("ib,ij,ab->iajb", q, fm, fn).reshape(m * n, m * n)
    if provenance is None:
        provenance = f"dita({m},{n};explicit)"
    return HadamardMatrix(np.ascontiguousarray(arr), provenance)


def conjugate(h):
    return HadamardMatrix(
        np.ascontiguousarray(h.array.conj()), f"conj({h.provenance})"
    )


def transpose(h):
    return HadamardMatrix(
        np.ascontiguousarray(h.array.T), f"transpose({h.provenance})"
    )


def adjoint(h):
    return HadamardMatrix(
        np.ascontiguousarray(h.array.conj().T), f"adjoint({h.provenance})"
    )


def dephase(h):
    """Equivalent matrix with first row and first column all equal to 1.

    Column j is divided by H_{0j}, then row i by the resulting (i,0) entry.
    Idempotent, and absorbs any row/column phase multiplications of the input.
    """
    arr = h.array.copy()
    arr = arr / arr[0, :][None, :]
    arr = arr / arr[:, 0][:, None]
    return HadamardMatrix(np.ascontiguousarray(arr), f"dephase({h.provenance})")


def equivalence_fingerprint(h, digits=9):
    """Sorted multiset of the entry phase quadruples H_ia H_jb / (H_ib H_ja).

    Row/column permutations permute the quadruples and row/column phase
    multiplications cancel exactly, so equal fingerprints are a necessary
    (not sufficient) condition for equivalence.  Values are rounded to
    `digits` decimals before sorting so the result is deterministic.
    """
    arr = h.array
    vals = np.einsum("ia,jb,ib,ja->ijab", arr, arr, arr.conj(), arr.conj())
    vals = np.round(vals.ravel(), digits) + 0.0  # normalize -0.0
    order = np.lexsort((vals.imag, vals.real))
    return tuple(complex(v) for v in vals[order])


# -- JSON serialization -------------------------------------------------------

def matrix_to_dict(h):
    arr = h.array if isinstance(h, HadamardMatrix) else np.asarray(h, dtype=complex)
    return {
        "n": arr.shape[0],
        "entries": [[[float(z.real), float(z.imag)] for z in row] for row in arr],
    }


def matrix_from_dict(data):
    if not isinstance(data, dict) or "n" not in data or "entries" not in data:
        raise ValueError("matrix JSON must be an object with 'n' and 'entries'")
    n = data["n"]
    entries = data["entries"]
    if not isinstance(n, int) or n < 1:
        raise ValueError("'n' must be a positive integer")
    if len(entries) != n:
        raise ValueError(f"expected {n} rows, got {len(entries)}")
    arr = np.empty((n, n), dtype=complex)
    for i, row in enumerate(entries):
        if len(row) != n:
            raise ValueError(f"row {i} has length {len(row)}, expected {n}")
        for j, pair in enumerate(row):
            if len(pair) != 2:
                raise ValueError(f"entry ({i},{j}) is not a [re, im] pair")
            arr[i, j] = complex(pair[0], pair[1])
    if not np.isfinite(arr.view(float)).all():
        raise ValueError("matrix contains non-finite entries")
    return arr


def save_matrix(h, path):
    with open(path, "w") as fh:
        json.dump(matrix_to_dict(h), fh)


def load_matrix(path, check=True):
    with open(path) as fh:
        data = json.load(fh)
    return hadamard(matrix_from_dict(data), provenance=f"file={path}", check=check)


def load_phase_matrix(path):
    """Read an M x N angle matrix {"m", "n", "angles"} (radians) from JSON."""
    with open(path) as fh:
        data = json.load(fh)
    if not isinstance(data, dict) or not {"m", "n", "angles"} <= set(data):
        raise ValueError("phase matrix JSON must be an object with 'm', 'n', 'angles'")
    m, n = data["m"], data["n"]
    angles = np.asarray(data["angles"], dtype=float)
    if angles.shape != (m, n):
        raise ValueError(f"angle array has shape {angles.shape}, expected {(m, n)}")
    return phase_matrix_from_angles(angles)
