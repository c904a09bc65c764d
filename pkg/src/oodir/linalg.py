"""Minimum-norm least squares."""

import numpy as np


def min_norm_lstsq(A, B):
    """Minimum-norm least-squares solution of ``A X = B``.

    Solves through the thin SVD. Singular values at or below
    ``max(p, q) * eps * sigma_max`` are treated as zero, so rank-deficient
    systems return the pseudoinverse solution: among all minimisers of
    ``||A X - B||`` the one with the smallest norm.

    Parameters
    ----------
    A : (p, q) array_like
    B : (p,) or (p, r) array_like

    Returns
    -------
    X : (q,) or (q, r) ndarray
    """
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    if A.ndim != 2 or A.shape[0] < 1 or A.shape[1] < 1:
        raise ValueError(f"A must be a non-empty 2-D matrix, got shape {A.shape}")
    vector = B.ndim == 1
    if vector:
        B = B[:, None]
    if B.shape[0] != A.shape[0]:
        raise ValueError(f"row mismatch: A has {A.shape[0]}, B has {B.shape[0]}")

    U, s, Vt = np.linalg.svd(A, full_matrices=False)
    tol = max(A.shape) * np.finfo(float).eps * (s[0] if s.size else 0.0)
    keep = s > tol
    inv_s = np.zeros_like(s)
    inv_s[keep] = 1.0 / s[keep]
    X = Vt.T @ (inv_s[:, None] * (U.T @ B))
    return X[:, 0] if vector else X
