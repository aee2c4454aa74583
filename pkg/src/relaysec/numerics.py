"""Small dense complex linear algebra used by the transmit schemes.

All functions accept stacked inputs (leading batch dimensions) and lean on
LAPACK through numpy for the factorizations; problem sizes never exceed a
few antennas, so accuracy and convergence are not a concern. Inputs to the
generalized eigensolver must form a Hermitian positive-definite pencil
(Hermitian within 1e-10, Cholesky must succeed).
"""

import numpy as np

_HERM_TOL = 1e-10


class NumericalError(Exception):
    """Cholesky failure or singular linear system."""


def nullspace_basis(h) -> np.ndarray:
    """Orthonormal basis Z of the nullspace of the row vector h, so h @ Z = 0.

    h has shape (..., N) with N >= 2; the result has shape (..., N, N-1).
    Computed by completing h/||h|| to a unitary basis via Householder QR and
    dropping the first column.
    """
    h = np.asarray(h, dtype=complex)
    n = h.shape[-1]
    if n < 2:
        raise ValueError("a 1-antenna channel has no transmit nullspace")
    norms = np.linalg.norm(h, axis=-1)
    if np.any(norms == 0):
        raise ValueError("zero channel vector")
    u = (h.conj() / norms[..., None])[..., :, None]
    q_full, _ = np.linalg.qr(u, mode="complete")
    return q_full[..., :, 1:]


def _check_hermitian(mat: np.ndarray, name: str) -> None:
    scale = np.maximum(np.abs(mat).max(axis=(-2, -1)), 1.0)
    dev = np.abs(mat - mat.conj().swapaxes(-2, -1)).max(axis=(-2, -1))
    if np.any(dev > _HERM_TOL * scale):
        raise NumericalError(f"{name} is not Hermitian within {_HERM_TOL}")


def max_generalized_eigvec(a, b):
    """Unit-norm maximizer v of (v^H a v)/(v^H b v) and the ratio it attains.

    Solved by reducing the pencil with the Cholesky factor of b and taking
    the top eigenpair of the resulting Hermitian matrix. The global phase is
    fixed so the largest-magnitude entry of v is real nonnegative.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    _check_hermitian(a, "pencil matrix A")
    _check_hermitian(b, "pencil matrix B")
    try:
        np.linalg.cholesky(a)
        chol = np.linalg.cholesky(b)
    except np.linalg.LinAlgError as err:
        raise NumericalError(f"pencil is not positive definite: {err}") from err
    half = np.linalg.solve(chol, a)
    reduced = np.linalg.solve(chol, half.conj().swapaxes(-2, -1)).conj().swapaxes(-2, -1)
    reduced = 0.5 * (reduced + reduced.conj().swapaxes(-2, -1))
    eigvals, eigvecs = np.linalg.eigh(reduced)
    lam = eigvals[..., -1]
    z = eigvecs[..., :, -1]
    v = np.linalg.solve(chol.conj().swapaxes(-2, -1), z[..., :, None])[..., 0]
    v = v / np.linalg.norm(v, axis=-1, keepdims=True)
    top = np.take_along_axis(v, np.argmax(np.abs(v), axis=-1)[..., None], axis=-1)
    v = v * (top.conj() / np.abs(top))
    return v, lam


def mmse_solve(h, rn, rs, y) -> np.ndarray:
    """Linear MMSE estimate rs h^H (h rs h^H + rn)^{-1} y.

    h: (..., n, m) effective channel, rn: (..., n, n) noise covariance,
    rs: (..., m, m) signal covariance, y: (..., n) observation. The 2x2
    system is solved in closed form (adjugate); larger systems go through
    a general solve.
    """
    h = np.asarray(h, dtype=complex)
    rn = np.asarray(rn, dtype=complex)
    rs = np.asarray(rs, dtype=complex)
    y = np.asarray(y, dtype=complex)
    gain = rs @ h.conj().swapaxes(-2, -1)
    gram = h @ gain + rn
    n = gram.shape[-1]
    if n == 2:
        det = gram[..., 0, 0] * gram[..., 1, 1] - gram[..., 0, 1] * gram[..., 1, 0]
        scale = np.abs(gram).max(axis=(-2, -1))
        if np.any(np.abs(det) <= 1e-30 * np.maximum(scale, 1.0) ** 2):
            raise NumericalError("singular 2x2 MMSE system")
        sol = np.empty_like(y)
        sol[..., 0] = (gram[..., 1, 1] * y[..., 0] - gram[..., 0, 1] * y[..., 1]) / det
        sol[..., 1] = (gram[..., 0, 0] * y[..., 1] - gram[..., 1, 0] * y[..., 0]) / det
    else:
        try:
            sol = np.linalg.solve(gram, y[..., :, None])[..., 0]
        except np.linalg.LinAlgError as err:
            raise NumericalError(f"singular MMSE system: {err}") from err
    return (gain @ sol[..., :, None])[..., 0]
