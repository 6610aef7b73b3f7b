"""
Fubini-Study geometry of CP^n.

CP^n is the unit sphere S^(2n+1) in C^(n+1) divided by the diagonal phase
circle; CP^1 is therefore the round sphere of radius 1/2. Conventions:

    <a, b>    = sum_k a_k conj(b_k)        (linear in the first slot)
    g(a, b)   = Re <a, b>
    omega(u, v) = g(u, i v) = Im <u, v>    (omega(u, i u) = -|u|^2)

The *_array helpers act on numpy arrays with the homogeneous coordinate
on the last axis and broadcast over any leading batch axes; the public
operations take and return domain models.
"""

import logging

import numpy as np

from exceptions import (
    ZeroVectorError,
    DimensionMismatchError,
    NotHorizontalError,
    BasePointMismatchError,
    DegenerateFrameError
)
from models import ProjectivePoint, HorizontalFrame, UnitaryMatrix, real_coordinates

logger = logging.getLogger(__name__)

ZERO_TOLERANCE = 1e-14
GAUGE_TIE_TOLERANCE = 1e-12
PAIRING_TOLERANCE = 1e-6
BASE_POINT_TOLERANCE = 1e-10
GRAM_TOLERANCE = 1e-12


# ==================== ARRAY KERNELS ====================
def hermitian(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """<a, b> along the last axis."""
    return np.sum(a * np.conj(b), axis=-1)


def normalize_array(z: np.ndarray) -> np.ndarray:
    """
    Scale homogeneous vectors to unit length.
    Raises: ZeroVectorError if a vector is shorter than 1e-14
    """
    z = np.asarray(z, dtype=complex)
    norms = np.linalg.norm(z, axis=-1, keepdims=True)
    if np.any(norms < ZERO_TOLERANCE):
        raise ZeroVectorError("Cannot normalize a zero homogeneous vector.")
    return z / norms


def gauge_fix_array(z: np.ndarray) -> np.ndarray:
    """
    Canonical unit representatives: the largest-modulus entry (lowest index
    among ties) is made real and positive.
    """
    z = normalize_array(z)
    modulus = np.abs(z)
    top = modulus.max(axis=-1, keepdims=True)
    pivot_index = np.argmax(modulus >= top - GAUGE_TIE_TOLERANCE, axis=-1)
    pivot = np.take_along_axis(z, pivot_index[..., None], axis=-1)
    fixed = z * (np.conj(pivot) / np.abs(pivot))
    # the pivot is real up to rounding; make it exactly real
    np.put_along_axis(
        fixed, pivot_index[..., None],
        np.abs(np.take_along_axis(fixed, pivot_index[..., None], axis=-1)), axis=-1
    )
    return fixed


def vertical_residual(zp: np.ndarray, zq: np.ndarray) -> np.ndarray:
    """Component of zq orthogonal to the complex line of zp."""
    return zq - hermitian(zq, zp)[..., None] * zp


def chordal_gap_array(zp: np.ndarray, zq: np.ndarray) -> np.ndarray:
    """1 - |<zp, zq>|^2 evaluated without cancellation near zero."""
    w = vertical_residual(zp, zq)
    return np.clip(np.sum(np.abs(w) ** 2, axis=-1), 0.0, 1.0)


def fs_distance_array(zp: np.ndarray, zq: np.ndarray) -> np.ndarray:
    """Geodesic distance arccos|<zp, zq>| in its stable atan2 form."""
    w = vertical_residual(zp, zq)
    return np.arctan2(np.linalg.norm(w, axis=-1), np.abs(hermitian(zq, zp)))


def project_vectors(z: np.ndarray, w: np.ndarray) -> np.ndarray:
    """w - <w, z> z for vectors w of the same shape as z."""
    return w - hermitian(w, z)[..., None] * z


def project_frames(z: np.ndarray, frames: np.ndarray) -> np.ndarray:
    """Horizontal projection of frames (..., k, m) based at z (..., m)."""
    base = z[..., None, :]
    return frames - hermitian(frames, base)[..., None] * base


def omega_array(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """The symplectic form Im <u, v> on horizontal vectors."""
    return np.imag(hermitian(u, v))


def gram_sqrt_det(frames: np.ndarray) -> np.ndarray:
    """sqrt(det G) of the real Gram matrix of frames (..., k, m)."""
    real = real_coordinates(frames)
    gram = real @ np.swapaxes(real, -1, -2)
    return np.sqrt(np.clip(np.linalg.det(gram), 0.0, None))


def orthonormalize_real(vectors: np.ndarray) -> np.ndarray:
    """
    Gram-Schmidt with one re-orthogonalization pass over the reals.
    Raises: DegenerateFrameError if the Gram determinant is below 1e-12
    """
    vectors = np.asarray(vectors, dtype=float)
    if np.linalg.det(vectors @ vectors.T) < GRAM_TOLERANCE:
        raise DegenerateFrameError("Cannot orthonormalize a degenerate frame.")

    basis = []
    for v in vectors:
        w = v.copy()
        for _ in range(2):
            for b in basis:
                w -= (b @ w) * b
        basis.append(w / np.linalg.norm(w))
    return np.array(basis)


def wedge_volume(u_vectors: np.ndarray, v_vectors: np.ndarray) -> float:
    """|u_1 ^ ... ^ u_n ^ v_1 ^ ... ^ v_n| of two orthonormalized frames."""
    u = orthonormalize_real(real_coordinates(u_vectors))
    v = orthonormalize_real(real_coordinates(v_vectors))
    stacked = np.concatenate([u, v], axis=0)
    det = np.linalg.det(stacked @ stacked.T)
    return float(np.sqrt(max(det, 0.0)))


# ==================== DOMAIN OPERATIONS ====================
def _check_same_dimension(p: ProjectivePoint, q: ProjectivePoint):
    """Raises DimensionMismatchError if p and q live in different CP^n."""
    if p.n != q.n:
        raise DimensionMismatchError(
            f"Points live in CP^{p.n} and CP^{q.n}."
        )


def gauge_fix(z: np.ndarray) -> ProjectivePoint:
    """
    Canonical representative of [z].
    Raises: ZeroVectorError if ||z|| < 1e-14
    """
    return ProjectivePoint(gauge_fix_array(np.asarray(z, dtype=complex)))


def fs_distance(p: ProjectivePoint, q: ProjectivePoint) -> float:
    """
    Fubini-Study distance, in [0, pi/2].
    Raises: DimensionMismatchError
    """
    _check_same_dimension(p, q)
    return float(fs_distance_array(p.z, q.z))


def chordal_gap(p: ProjectivePoint, q: ProjectivePoint) -> float:
    """
    Smooth zero detector 1 - |<z_p, z_q>|^2 = sin^2(fs_distance).
    Raises: DimensionMismatchError
    """
    _check_same_dimension(p, q)
    return float(chordal_gap_array(p.z, q.z))


def horizontal_project(p: ProjectivePoint, w: np.ndarray) -> np.ndarray:
    """Remove the components of w along z and iz."""
    w = np.asarray(w, dtype=complex)
    if w.shape != p.z.shape:
        raise DimensionMismatchError("Vector and point have different lengths.")
    return project_vectors(p.z, w)


def _horizontality(p: ProjectivePoint, u: np.ndarray) -> float:
    return float(np.abs(hermitian(u, p.z)) / max(1.0, np.linalg.norm(u)))


def symplectic_pairing(p: ProjectivePoint, u: np.ndarray, v: np.ndarray) -> float:
    """
    omega(u, v) for horizontal u, v at p.
    Raises: NotHorizontalError if a residual exceeds 1e-6
    """
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    if u.shape != p.z.shape or v.shape != p.z.shape:
        raise DimensionMismatchError("Vectors and point have different lengths.")
    for vector in (u, v):
        if _horizontality(p, vector) > PAIRING_TOLERANCE:
            raise NotHorizontalError("symplectic_pairing needs horizontal vectors.")
    return float(omega_array(u, v))


def sigma_angle(a: HorizontalFrame, b: HorizontalFrame) -> float:
    """
    Wedge volume of two tangent planes moved to a common point.

    The representative of b's base may differ from a's by a phase mu;
    b's vectors are carried along (v -> mu v) before comparing.

    Raises:
        DimensionMismatchError: frames in different CP^n
        BasePointMismatchError: bases more than 1e-10 apart
        DegenerateFrameError: Gram determinant below 1e-12
    """
    _check_same_dimension(a.base, b.base)
    if fs_distance(a.base, b.base) > BASE_POINT_TOLERANCE:
        raise BasePointMismatchError("Frames are based at different points.")

    mu = hermitian(a.base.z, b.base.z)
    mu = mu / abs(mu)
    return wedge_volume(a.vectors, mu * b.vectors)


def transform_frame(unitary: UnitaryMatrix, frame: HorizontalFrame) -> HorizontalFrame:
    """Push a frame forward by a unitary: (z, v) -> (Uz, Uv)."""
    base = ProjectivePoint(unitary.apply(frame.base.z))
    return HorizontalFrame(base, unitary.apply(frame.vectors))
