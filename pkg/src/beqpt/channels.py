"""Quantum channel representations and conversions.

Channels are kept in Kraus form E(rho) = sum_n K_n rho K_n^dag with the
completeness relation sum_n K_n^dag K_n = Id enforced at construction.
The Choi state uses the trace-1 normalization

    S = (E kron Id)(|Phi+><Phi+|),

so the inverse relation carries a factor d:  E(rho) = d Tr_2[(Id kron rho^T) S].
Under the row-stacking vec convention the superoperator matrix is
E_hat = sum_n K_n kron conj(K_n) and S = realign_inverse(E_hat) / d.
"""

from __future__ import annotations

from dataclasses import InitVar, dataclass

import numpy as np

from .bipartite import (
    BipartiteOperator,
    as_complex_matrix,
    basis_ket,
    partial_trace,
    vec,
    unvec,
)

COMPLETENESS_TOL = 1e-10
CHOI_PSD_TOL = 1e-10
CHOI_TRACE_TOL = 1e-10
CHOI_TP_TOL = 1e-9
KRAUS_EIG_CUTOFF = 1e-12


@dataclass(frozen=True)
class KrausChannel:
    """CPTP map as an ordered tuple of d_out x d_in Kraus operators."""

    kraus: tuple
    d_in: int
    d_out: int

    def __post_init__(self):
        if self.d_in != self.d_out:
            raise ValueError("only d_in == d_out channels are supported")
        ops = tuple(as_complex_matrix(k) for k in self.kraus)
        if not ops:
            raise ValueError("need at least one Kraus operator")
        for k in ops:
            if k.shape != (self.d_out, self.d_in):
                raise ValueError(f"Kraus operator shape {k.shape} != "
                                 f"({self.d_out}, {self.d_in})")
            k.setflags(write=False)
        total = sum(k.conj().T @ k for k in ops)
        residual = np.linalg.norm(total - np.eye(self.d_in))
        if residual > COMPLETENESS_TOL:
            raise ValueError(f"completeness relation violated: residual {residual:.3e}")
        object.__setattr__(self, "kraus", ops)


@dataclass(frozen=True)
class ChoiMatrix:
    """Trace-1 Choi state of a channel on C^d; PSD with Tr over the
    output factor equal to Id/d (trace preservation)."""

    mat: np.ndarray
    d: int
    psd_tol: InitVar[float] = CHOI_PSD_TOL
    trace_tol: InitVar[float] = CHOI_TRACE_TOL
    tp_tol: InitVar[float] = CHOI_TP_TOL

    def __post_init__(self, psd_tol, trace_tol, tp_tol):
        mat = as_complex_matrix(self.mat)
        n = self.d * self.d
        if mat.shape != (n, n):
            raise ValueError(f"Choi matrix shape {mat.shape} != ({n}, {n})")
        dev = np.abs(mat - mat.conj().T).max()
        if dev > psd_tol:
            raise ValueError(f"Choi matrix not Hermitian: deviation {dev:.3e}")
        if abs(mat.trace() - 1.0) > trace_tol:
            raise ValueError(f"Choi trace {mat.trace():.17g} is not 1")
        min_eig = float(np.linalg.eigvalsh((mat + mat.conj().T) / 2).min())
        if min_eig < -psd_tol:
            raise ValueError(f"Choi matrix not PSD: min eigenvalue {min_eig:.3e}")
        marginal = partial_trace(BipartiteOperator(mat, self.d, self.d), "A")
        tp_dev = np.abs(marginal - np.eye(self.d) / self.d).max()
        if tp_dev > tp_tol:
            raise ValueError(f"trace preservation violated: deviation {tp_dev:.3e}")
        mat.setflags(write=False)
        object.__setattr__(self, "mat", mat)


def apply(ch: KrausChannel, rho: np.ndarray) -> np.ndarray:
    """E(rho) = sum_n K_n rho K_n^dag."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (ch.d_in, ch.d_in):
        raise ValueError(f"state shape {rho.shape} != ({ch.d_in}, {ch.d_in})")
    out = np.zeros((ch.d_out, ch.d_out), dtype=complex)
    for k in ch.kraus:
        out += k @ rho @ k.conj().T
    return out


def apply_extended(ch: KrausChannel, rho: BipartiteOperator) -> BipartiteOperator:
    """(E kron Id) acting on the A factor of a bipartite operator."""
    if rho.dA != ch.d_in:
        raise ValueError(f"probe dA={rho.dA} does not match channel d_in={ch.d_in}")
    eye = np.eye(rho.dB)
    out = np.zeros((ch.d_out * rho.dB,) * 2, dtype=complex)
    for k in ch.kraus:
        kk = np.kron(k, eye)
        out += kk @ rho.mat @ kk.conj().T
    return BipartiteOperator(out, ch.d_out, rho.dB)


def superoperator_matrix(ch: KrausChannel) -> np.ndarray:
    """Matrix E_hat with E_hat vec(X) = vec(E(X)) (row-stacking vec)."""
    d2 = ch.d_in * ch.d_out
    out = np.zeros((d2, d2), dtype=complex)
    for k in ch.kraus:
        out += np.kron(k, k.conj())
    return out


def choi_of(ch: KrausChannel) -> ChoiMatrix:
    """S = (E kron Id)(|Phi+><Phi+|) = (1/d) sum_n vec(K_n) vec(K_n)^dag."""
    d = ch.d_in
    s = np.zeros((d * d, d * d), dtype=complex)
    for k in ch.kraus:
        v = vec(k)
        s += np.outer(v, v.conj())
    return ChoiMatrix(s / d, d)


def channel_from_choi(s: ChoiMatrix, eig_cutoff: float = KRAUS_EIG_CUTOFF) -> KrausChannel:
    """Kraus operators from the eigendecomposition of the Choi state.

    Eigenvalues below the cutoff are dropped to avoid spurious
    near-zero Kraus operators.  The resulting channel satisfies
    E(rho) = d Tr_2[(Id kron rho^T) S].
    """
    d = s.d
    w, v = np.linalg.eigh((s.mat + s.mat.conj().T) / 2)
    kraus = [
        np.sqrt(d * wi) * unvec(v[:, i], d, d)
        for i, wi in enumerate(w)
        if wi > eig_cutoff
    ]
    return KrausChannel(tuple(kraus), d, d)


def identity_channel(d: int) -> KrausChannel:
    return KrausChannel((np.eye(d),), d, d)


def depolarizing(d: int, p: float) -> KrausChannel:
    """E(rho) = (1-p) rho + p Tr(rho) Id/d."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p={p} outside [0, 1]")
    kraus = []
    if p < 1.0:
        kraus.append(np.sqrt(1.0 - p) * np.eye(d))
    if p > 0.0:
        scale = np.sqrt(p / d)
        for i in range(d):
            for j in range(d):
                kraus.append(scale * np.outer(basis_ket(d, i), basis_ket(d, j).conj()))
    return KrausChannel(tuple(kraus), d, d)


def dephasing(d: int, p: float) -> KrausChannel:
    """E(rho) = (1-p) rho + p diag(rho)."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p={p} outside [0, 1]")
    kraus = []
    if p < 1.0:
        kraus.append(np.sqrt(1.0 - p) * np.eye(d))
    if p > 0.0:
        for i in range(d):
            e = basis_ket(d, i)
            kraus.append(np.sqrt(p) * np.outer(e, e.conj()))
    return KrausChannel(tuple(kraus), d, d)


def unitary_channel(u: np.ndarray) -> KrausChannel:
    u = as_complex_matrix(u)
    d = u.shape[0]
    if u.shape != (d, d) or np.linalg.norm(u.conj().T @ u - np.eye(d)) > 1e-10:
        raise ValueError("matrix is not unitary")
    return KrausChannel((u,), d, d)


def random_cptp(d: int, n_kraus: int, seed: int) -> KrausChannel:
    """Deterministic Haar-style random channel: QR of a Ginibre matrix
    gives an isometry C^d -> C^d kron C^n whose blocks are the Kraus set."""
    if n_kraus < 1:
        raise ValueError("n_kraus must be >= 1")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((n_kraus * d, d)) + 1j * rng.standard_normal((n_kraus * d, d))
    q, _ = np.linalg.qr(g)
    kraus = tuple(q[i * d:(i + 1) * d, :] for i in range(n_kraus))
    return KrausChannel(kraus, d, d)
