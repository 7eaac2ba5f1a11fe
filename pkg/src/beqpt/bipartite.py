"""Dense linear algebra for operators on a bipartite Hilbert space.

Everything works on explicit dense complex matrices.  One indexing
convention is fixed here and used by every other module:

* composite basis ordering is row-major, ``|i>|k| -> i*dB + k``;
* ``vec`` stacks rows, so ``vec(|i><j|) = |i>|j>`` and
  ``vec(A X B) = (A kron B^T) vec(X)``;
* the realignment of ``rho = sum rho_{ij,kl} |i><j| kron |k><l|`` is the
  dA^2 x dB^2 matrix holding ``rho_{ij,kl}`` at row ``i*dA + j``,
  column ``k*dB + l``, so that ``realign(A kron B) = vec(A) vec(B)^T``.

With this choice the three fixed points

    realign(Id) = |u><u|,   realign(F) = F,   realign(|u><u|) = Id

hold exactly (``|u> = sum_i |ii>``, ``F`` the swap); the test suite pins
the convention against them.
"""

from __future__ import annotations

from dataclasses import InitVar, dataclass

import numpy as np

HERM_TOL = 1e-12
PSD_TOL = 1e-10
TRACE_TOL = 1e-12


def as_complex_matrix(m) -> np.ndarray:
    """Coerce to a finite, 2-D, C-contiguous complex128 array."""
    mat = np.ascontiguousarray(m, dtype=np.complex128)
    if mat.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got ndim={mat.ndim}")
    if not np.all(np.isfinite(mat.real)) or not np.all(np.isfinite(mat.imag)):
        raise ValueError("matrix contains non-finite entries")
    return mat


def herm_part(m: np.ndarray) -> np.ndarray:
    return (m + m.conj().T) / 2.0


@dataclass(frozen=True)
class BipartiteOperator:
    """Square operator on C^dA kron C^dB with the factorization recorded.

    The local dimensions are always stored explicitly, never inferred
    from the matrix size.
    """

    mat: np.ndarray
    dA: int
    dB: int

    def __post_init__(self):
        if self.dA < 1 or self.dB < 1:
            raise ValueError("local dimensions must be positive")
        mat = as_complex_matrix(self.mat)
        n = self.dA * self.dB
        if mat.shape != (n, n):
            raise ValueError(
                f"matrix shape {mat.shape} does not match dA*dB = {n}"
            )
        mat.setflags(write=False)
        object.__setattr__(self, "mat", mat)

    @property
    def dim(self) -> int:
        return self.dA * self.dB


@dataclass(frozen=True)
class DensityMatrix(BipartiteOperator):
    """A BipartiteOperator that is Hermitian, PSD and unit trace.

    Tolerances can be relaxed for states transcribed from rounded
    published data; the defaults are the strict ones.
    """

    herm_tol: InitVar[float] = HERM_TOL
    psd_tol: InitVar[float] = PSD_TOL
    trace_tol: InitVar[float] = TRACE_TOL

    def __post_init__(self, herm_tol, psd_tol, trace_tol):
        super().__post_init__()
        m = self.mat
        dev = np.abs(m - m.conj().T).max()
        if dev > herm_tol:
            raise ValueError(f"not Hermitian: max entry deviation {dev:.3e}")
        tr = m.trace()
        if abs(tr - 1.0) > trace_tol:
            raise ValueError(f"trace {tr:.17g} is not 1")
        min_eig = float(np.linalg.eigvalsh(herm_part(m)).min())
        if min_eig < -psd_tol:
            raise ValueError(f"not PSD: min eigenvalue {min_eig:.3e}")


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product, (a kron b)_{(i,k),(j,l)} = a_ij b_kl."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def basis_ket(d: int, i: int) -> np.ndarray:
    v = np.zeros(d, dtype=complex)
    v[i] = 1.0
    return v


def vec(m: np.ndarray) -> np.ndarray:
    """Row-stacking vectorization, vec(|i><j|) = |i>|j>."""
    return np.asarray(m, dtype=complex).reshape(-1)


def unvec(v: np.ndarray, rows: int, cols: int) -> np.ndarray:
    return np.asarray(v, dtype=complex).reshape(rows, cols)


def swap_operator(k: int) -> BipartiteOperator:
    """Flip operator F = sum_ij |ij><ji| on C^k kron C^k."""
    if k < 1:
        raise ValueError("dimension must be >= 1")
    F = np.zeros((k * k, k * k), dtype=complex)
    for i in range(k):
        for j in range(k):
            F[i * k + j, j * k + i] = 1.0
    return BipartiteOperator(F, k, k)


def max_entangled(k: int, normalized: bool = False) -> np.ndarray:
    """|u> = sum_i |ii>, or the unit vector |Phi+> = |u>/sqrt(k)."""
    if k < 1:
        raise ValueError("dimension must be >= 1")
    u = np.zeros(k * k, dtype=complex)
    u[np.arange(k) * (k + 1)] = 1.0
    return u / np.sqrt(k) if normalized else u


def _realign(mat: np.ndarray, dA: int, dB: int) -> np.ndarray:
    t = mat.reshape(dA, dB, dA, dB)
    return t.transpose(0, 2, 1, 3).reshape(dA * dA, dB * dB)


def realign(rho: BipartiteOperator) -> np.ndarray:
    """Entrywise rearrangement rho_{ij,kl} -> entry (i*dA+j, k*dB+l).

    A Hilbert-Schmidt isometry onto dA^2 x dB^2 matrices; for a product
    operator, realign(A kron B) = vec(A) vec(B)^T.
    """
    return _realign(rho.mat, rho.dA, rho.dB)


def realign_inverse(m: np.ndarray, dA: int, dB: int) -> BipartiteOperator:
    """Inverse index permutation of realign."""
    m = np.asarray(m, dtype=complex)
    if m.shape != (dA * dA, dB * dB):
        raise ValueError(
            f"expected shape {(dA * dA, dB * dB)}, got {m.shape}"
        )
    mat = m.reshape(dA, dA, dB, dB).transpose(0, 2, 1, 3)
    return BipartiteOperator(mat.reshape(dA * dB, dA * dB), dA, dB)


def _partial_transpose(mat: np.ndarray, dA: int, dB: int, subsystem: str) -> np.ndarray:
    t = mat.reshape(dA, dB, dA, dB)
    if subsystem == "A":
        t = t.transpose(2, 1, 0, 3)
    elif subsystem == "B":
        t = t.transpose(0, 3, 2, 1)
    else:
        raise ValueError("subsystem must be 'A' or 'B'")
    return t.reshape(dA * dB, dA * dB)


def partial_transpose(rho: BipartiteOperator, subsystem: str = "B") -> BipartiteOperator:
    """Transpose one tensor factor: (rho^{T_B})_{ij,kl} = rho_{il,kj}."""
    return BipartiteOperator(
        _partial_transpose(rho.mat, rho.dA, rho.dB, subsystem), rho.dA, rho.dB
    )


def check_realign(rho: BipartiteOperator) -> np.ndarray:
    """The variant (rho^{T_B} F)^{T_A}; shares its singular values with
    realign(rho).  Defined only for square bipartitions."""
    if rho.dA != rho.dB:
        raise ValueError("check_realign requires dA == dB")
    d = rho.dA
    F = swap_operator(d).mat
    m = _partial_transpose(rho.mat, d, d, "B") @ F
    return _partial_transpose(m, d, d, "A")


def partial_trace(rho: BipartiteOperator, subsystem: str) -> np.ndarray:
    """Trace out the named subsystem, returning the other factor."""
    t = rho.mat.reshape(rho.dA, rho.dB, rho.dA, rho.dB)
    if subsystem == "A":
        return np.trace(t, axis1=0, axis2=2)
    if subsystem == "B":
        return np.trace(t, axis1=1, axis2=3)
    raise ValueError("subsystem must be 'A' or 'B'")


def singular_values(m: np.ndarray) -> np.ndarray:
    """Singular values in descending order."""
    return np.linalg.svd(np.asarray(m, dtype=complex), compute_uv=False)


def trace_norm(m: np.ndarray) -> float:
    """Schatten 1-norm, the sum of singular values."""
    return float(singular_values(m).sum())


def operator_schmidt_rank(rho: BipartiteOperator, rel_tol: float = 1e-9) -> int:
    """Number of realigned singular values above rel_tol * sigma_max.

    Returns 0 for the zero operator.
    """
    if not 0.0 < rel_tol < 1.0:
        raise ValueError("rel_tol must lie in (0, 1)")
    s = singular_values(realign(rho))
    if s[0] <= 0.0:
        return 0
    return int(np.count_nonzero(s > rel_tol * s[0]))


def _permute_subsystems(mat: np.ndarray, dims, order) -> np.ndarray:
    n = len(dims)
    t = mat.reshape(*dims, *dims)
    axes = list(order) + [n + a for a in order]
    d = int(np.prod(dims))
    return t.transpose(axes).reshape(d, d)


def permute_qubit_subsystems(rho: BipartiteOperator, perm) -> BipartiteOperator:
    """Relabel the four qubit factors of a 16-dimensional operator.

    ``perm`` lists the source slots in their new order (numpy transpose
    semantics): perm=(0, 2, 1, 3) puts factor 2 into the second slot.
    """
    if rho.dim != 16:
        raise ValueError("expects four qubits (total dimension 16)")
    perm = tuple(int(p) for p in perm)
    if sorted(perm) != [0, 1, 2, 3]:
        raise ValueError("perm must be a permutation of (0, 1, 2, 3)")
    return BipartiteOperator(
        _permute_subsystems(rho.mat, (2, 2, 2, 2), perm), rho.dA, rho.dB
    )


def haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed d x d unitary (QR of a Ginibre matrix with the
    phase convention that makes the distribution uniform)."""
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    diag = np.diag(r)
    return q * (diag / np.abs(diag))
