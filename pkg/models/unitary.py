"""
Unitary group models.
Haar samples are carried as validated UnitaryMatrix values; their
randomness comes from reproducible SeedStream values.
"""

from dataclasses import dataclass

import numpy as np

from exceptions import ValidationError

UNITARITY_TOLERANCE = 1e-12
DETERMINANT_TOLERANCE = 1e-10
MAX_SEED = 2 ** 64


@dataclass(frozen=True, eq=False)
class UnitaryMatrix:
    """
    A unitary matrix acting on homogeneous coordinates of CP^n.

    Domain Rules:
    - entries form a square complex matrix of size m >= 1
    - ||U*U - I||_max <= 1e-12
    - if special is set, |det U - 1| <= 1e-10

    Attributes:
        entries: (m, m) complex matrix (read-only)
        special: whether the determinant is normalized to 1
    """

    entries: np.ndarray
    special: bool = False

    def __post_init__(self):
        """Validate data immediately after object creation."""
        object.__setattr__(self, 'entries', np.array(self.entries, dtype=complex))
        self._validate()
        self.entries.setflags(write=False)

    def _validate(self):
        """
        Validate unitarity and, if requested, the determinant.
        Raises ValidationError if any rule is violated.
        """
        if self.entries.ndim != 2 or self.entries.shape[0] != self.entries.shape[1]:
            raise ValidationError("A unitary matrix must be square.")
        if not np.all(np.isfinite(self.entries)):
            raise ValidationError("Unitary entries must be finite.")

        m = self.entries.shape[0]
        defect = self.entries.conj().T @ self.entries - np.eye(m)
        if np.max(np.abs(defect)) > UNITARITY_TOLERANCE:
            raise ValidationError(
                f"Matrix is not unitary (defect {np.max(np.abs(defect)):.2e})."
            )
        if self.special and abs(np.linalg.det(self.entries) - 1.0) > DETERMINANT_TOLERANCE:
            raise ValidationError("Special unitary matrix must have determinant 1.")

    @property
    def dimension(self) -> int:
        """Size m of the matrix (m = n + 1)."""
        return self.entries.shape[0]

    @classmethod
    def identity(cls, m: int) -> 'UnitaryMatrix':
        """The identity of U(m), which is also special."""
        return cls(np.eye(m, dtype=complex), special=True)

    def adjoint(self) -> 'UnitaryMatrix':
        """The inverse matrix U*."""
        return UnitaryMatrix(self.entries.conj().T, special=self.special)

    def apply(self, vectors: np.ndarray) -> np.ndarray:
        """Apply U to vectors stored along the last axis."""
        return np.asarray(vectors) @ self.entries.T

    def describe(self) -> dict:
        """Serializable descriptor (real and imaginary parts)."""
        return {
            'real': self.entries.real.tolist(),
            'imag': self.entries.imag.tolist(),
            'special': self.special
        }


@dataclass(frozen=True)
class SeedStream:
    """
    Counter-based random stream addressed by (master_seed, domain, index).

    Domain Rules:
    - 0 <= master_seed < 2^64
    - index >= 0 and domain >= 0
    - equal addresses reproduce identical draws; distinct addresses are
      statistically independent

    Attributes:
        master_seed: experiment-wide seed
        index: sample counter
        domain: namespace separating unrelated uses of one master seed
    """

    master_seed: int
    index: int
    domain: int = 0

    def __post_init__(self):
        """Validate data immediately after object creation."""
        self._validate()

    def _validate(self):
        """Raises ValidationError if any rule is violated."""
        for name in ('master_seed', 'index', 'domain'):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                raise ValidationError(f"Seed stream {name} must be an integer.")
        if not 0 <= self.master_seed < MAX_SEED:
            raise ValidationError("Master seed must be a 64-bit unsigned integer.")
        if self.index < 0 or self.domain < 0:
            raise ValidationError("Seed stream index and domain must be >= 0.")

    def seed_sequence(self) -> np.random.SeedSequence:
        """Hash the stream address into a numpy seed sequence."""
        return np.random.SeedSequence(
            entropy=int(self.master_seed),
            spawn_key=(int(self.domain), int(self.index))
        )

    def generator(self) -> np.random.Generator:
        """A fresh Philox (counter-based) generator for this stream."""
        return np.random.Generator(np.random.Philox(self.seed_sequence()))

    def fingerprint(self) -> tuple:
        """The first 128 output bits of the stream."""
        raw = np.random.Philox(self.seed_sequence()).random_raw(2)
        return tuple(int(x) for x in raw)
