"""Conjugations (antilinear involutive isometries) as symmetric unitaries.

An antilinear map ``C f = A conj(f)`` is a conjugation exactly when the matrix
``A`` is unitary and symmetric: ``C^2 = I`` becomes ``A conj(A) = I`` which,
for unitary ``A``, is the same as ``A = A^T``.  An operator ``T`` satisfies
``T = C T* C`` if and only if ``T A = A T^T``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .serialize import matrix_to_pairs, pairs_to_matrix
from .shift import ShiftMatrix

__all__ = [
    "Conjugation",
    "ConjugationError",
    "conjugation_from_matrix",
    "conjugation_from_images",
    "CSymmetryReport",
    "verify_c_symmetry",
]


class ConjugationError(ValueError):
    """The proposed matrix is not a symmetric unitary within tolerance."""


@dataclass(frozen=True, eq=False)
class Conjugation:
    """The conjugation ``C f = matrix @ conj(f)`` over a labelled basis."""

    matrix: np.ndarray
    basis: tuple[str, ...]
    residual_unitary: float
    residual_symmetric: float

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def apply(self, vec: np.ndarray) -> np.ndarray:
        return self.matrix @ np.conj(np.asarray(vec, dtype=complex))

    def to_doc(self) -> dict:
        return {
            "basis": list(self.basis),
            "matrix": matrix_to_pairs(self.matrix),
            "residual_unitary": float(self.residual_unitary),
            "residual_symmetric": float(self.residual_symmetric),
        }

    @classmethod
    def from_doc(cls, doc: dict, tol: float = 1e-10) -> "Conjugation":
        matrix = pairs_to_matrix(doc["matrix"])
        basis = tuple(doc.get("basis") or _default_basis(matrix.shape[0]))
        return conjugation_from_matrix(matrix, basis=basis, tol=tol)


def _default_basis(n: int) -> tuple[str, ...]:
    return tuple(str(i) for i in range(n))


def _residuals(a: np.ndarray) -> tuple[float, float]:
    eye = np.eye(a.shape[0])
    return (
        float(np.linalg.norm(a @ a.conj().T - eye)),
        float(np.linalg.norm(a - a.T)),
    )


def conjugation_from_matrix(
    a: np.ndarray, basis: Optional[Sequence[str]] = None, tol: float = 1e-10
) -> Conjugation:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ConjugationError("conjugation matrix must be square")
    res_u, res_s = _residuals(a)
    if res_u > tol or res_s > tol:
        raise ConjugationError(
            f"not a conjugation: unitary residual {res_u:.3e}, "
            f"symmetry residual {res_s:.3e} (tol {tol:.1e})"
        )
    basis = tuple(basis) if basis is not None else _default_basis(a.shape[0])
    if len(basis) != a.shape[0]:
        raise ConjugationError("basis length does not match matrix size")
    return Conjugation(
        matrix=a, basis=basis, residual_unitary=res_u, residual_symmetric=res_s
    )


def conjugation_from_images(
    images: Sequence[tuple[Union[str, int, np.ndarray], np.ndarray]],
    basis: Sequence[str],
    tol: float = 1e-10,
) -> Conjugation:
    """Build ``C`` from its action on an orthonormal family.

    Each item ``(source, image)`` declares ``C source = image``; a source may
    be a basis label, a basis index, or an explicit vector.  With sources as
    columns of ``B`` and images as columns of ``Y``, antilinearity forces
    ``A = Y B^T`` (for orthonormal ``B``), which is then validated.
    """
    basis = tuple(basis)
    n = len(basis)
    if len(images) != n:
        raise ConjugationError(f"need exactly {n} image pairs, got {len(images)}")
    b = np.zeros((n, n), dtype=complex)
    y = np.zeros((n, n), dtype=complex)
    for k, (source, image) in enumerate(images):
        if isinstance(source, str):
            col = np.zeros(n, dtype=complex)
            col[basis.index(source)] = 1.0
        elif isinstance(source, (int, np.integer)):
            col = np.zeros(n, dtype=complex)
            col[int(source)] = 1.0
        else:
            col = np.asarray(source, dtype=complex)
        b[:, k] = col
        y[:, k] = np.asarray(image, dtype=complex)
    if np.linalg.norm(b.conj().T @ b - np.eye(n)) > tol * max(1.0, n):
        raise ConjugationError("image sources are not an orthonormal family")
    a = y @ b.T
    return conjugation_from_matrix(a, basis=basis, tol=tol)


@dataclass(frozen=True)
class CSymmetryReport:
    residual: float
    passed: bool
    tol: float
    worst_basis_vector: str

    def to_doc(self) -> dict:
        return {
            "residual": float(self.residual),
            "passed": bool(self.passed),
            "tol": float(self.tol),
            "worst_basis_vector": self.worst_basis_vector,
        }


def verify_c_symmetry(t, conj: Conjugation, tol: float = 1e-10) -> CSymmetryReport:
    """Check ``T = C T* C`` through the residual ``||T A - A T^T||_F``.

    The reported tolerance is scale-aware: the test passes when the residual
    is at most ``tol * max(1, ||T||_F)``.
    """
    m = t.matrix if isinstance(t, ShiftMatrix) else np.asarray(t, dtype=complex)
    basis = conj.basis
    if m.shape != conj.matrix.shape:
        raise ConjugationError(
            f"dimension mismatch: operator is {m.shape[0]}x{m.shape[1]}, "
            f"conjugation is {conj.matrix.shape[0]}x{conj.matrix.shape[1]}"
        )
    defect = m @ conj.matrix - conj.matrix @ m.T
    residual = float(np.linalg.norm(defect))
    column_norms = np.linalg.norm(defect, axis=0)
    worst = basis[int(np.argmax(column_norms))] if len(basis) else ""
    scale = max(1.0, float(np.linalg.norm(m)))
    return CSymmetryReport(
        residual=residual,
        passed=residual <= tol * scale,
        tol=tol,
        worst_basis_vector=worst,
    )
