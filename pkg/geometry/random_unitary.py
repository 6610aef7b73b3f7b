"""
Reproducible Haar sampling on U(m), SU(m) and point stabilizers.

Every draw is a pure function of a SeedStream, so sample i of an
experiment never depends on sample j, whatever the parallel schedule.
"""

import logging

import numpy as np
from scipy.linalg import qr

from exceptions import NumericalError, ValidationError
from models import ProjectivePoint, SeedStream, UnitaryMatrix

logger = logging.getLogger(__name__)

RANK_TOLERANCE = 1e-12
MAX_REDRAWS = 8


def derive_stream(master: int, index: int, domain: int = 0) -> SeedStream:
    """
    Stream number `index` of an experiment seeded with `master`.
    Raises: ValidationError for seeds outside the 64-bit range
    """
    return SeedStream(int(master), int(index), int(domain))


def haar_from_generator(m: int, rng: np.random.Generator) -> np.ndarray:
    """
    Haar-random m x m unitary from a Ginibre matrix and its QR factors.
    Columns are rephased so the diagonal of R is real positive.
    Raises: NumericalError if every redraw is rank-deficient
    """
    for _ in range(MAX_REDRAWS):
        ginibre = (rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))) / np.sqrt(2)
        q, r = qr(ginibre)
        d = np.diag(r)
        if np.min(np.abs(d)) > RANK_TOLERANCE:
            return q * (d / np.abs(d))
        logger.debug("Rank-deficient Ginibre draw, drawing again")
    raise NumericalError("Could not draw a full-rank Ginibre matrix.")


def haar_unitary(m: int, stream: SeedStream) -> UnitaryMatrix:
    """
    Haar-distributed element of U(m), deterministic given the stream.
    Raises: ValidationError if m < 1
    """
    if m < 1:
        raise ValidationError("Unitary dimension must be >= 1.")
    return UnitaryMatrix(haar_from_generator(m, stream.generator()))


def to_special(unitary: UnitaryMatrix) -> UnitaryMatrix:
    """U * det(U)^(-1/m) with the principal root; same action on CP^n."""
    m = unitary.dimension
    det = np.linalg.det(unitary.entries)
    root = np.exp(1j * np.angle(det) / m)
    return UnitaryMatrix(unitary.entries / root, special=True)


def frame_unitary(z: np.ndarray) -> np.ndarray:
    """
    A unitary V with V e_1 = z for a unit vector z.
    The remaining columns come from a QR completion against the
    coordinate axes other than the one where z is largest.
    """
    z = np.asarray(z, dtype=complex)
    m = z.size
    pivot = int(np.argmax(np.abs(z)))
    others = [k for k in range(m) if k != pivot]
    columns = np.column_stack([z] + [np.eye(m)[:, k] for k in others])
    q, _ = np.linalg.qr(columns)
    q[:, 0] = z
    return q


def stabilizer_from_generator(z: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Haar element V blockdiag(phase, W) V* of the stabilizer of [z]."""
    m = z.size
    v = frame_unitary(z)
    block = np.zeros((m, m), dtype=complex)
    block[0, 0] = np.exp(2j * np.pi * rng.random())
    block[1:, 1:] = haar_from_generator(m - 1, rng)
    return v @ block @ v.conj().T


def stabilizer_sample(r: ProjectivePoint, stream: SeedStream) -> UnitaryMatrix:
    """Haar-random unitary k with [k z_r] = [z_r]."""
    return UnitaryMatrix(stabilizer_from_generator(r.z, stream.generator()))


def transport_unitary(source: np.ndarray, target: np.ndarray) -> np.ndarray:
    """A unitary carrying the unit vector source to target."""
    return frame_unitary(target) @ frame_unitary(source).conj().T
