"""
Exception hierarchy for localqst
"""

from typing import Optional


class LocalQSTError(Exception):
    """Base class for every error raised by localqst"""


class DimensionError(LocalQSTError, ValueError):
    """Array length or matrix shape does not match what the operation expects"""


class InvalidStateError(LocalQSTError, ValueError):
    """State vector or density matrix violates normalization, trace or Hermiticity"""


class NonFiniteError(LocalQSTError, ValueError):
    """NaN or infinity where only finite numbers are allowed"""


class DegenerateGroundStateError(LocalQSTError):
    """Spectral gap of a Hamiltonian is below the configured tolerance"""

    def __init__(self, gap: float, gap_tol: float):
        super().__init__(gap, gap_tol)
        self.gap = gap
        self.gap_tol = gap_tol

    def __str__(self) -> str:
        return f"ground state is degenerate: gap {self.gap:.3e} < gap_tol {self.gap_tol:.3e}"


class NotPSDError(LocalQSTError, ValueError):
    """Density matrix has an eigenvalue below the negative tolerance"""

    def __init__(self, min_eigenvalue: float):
        super().__init__(min_eigenvalue)
        self.min_eigenvalue = min_eigenvalue

    def __str__(self) -> str:
        return f"matrix is not positive semidefinite: min eigenvalue {self.min_eigenvalue:.3e}"


class GenerationFailedError(LocalQSTError):
    """Every resample of a record produced a degenerate Hamiltonian"""

    # args mirror __init__ so instances survive pickling across worker processes
    def __init__(self, seed: int, index: Optional[int] = None, attempts: int = 0):
        super().__init__(seed, index, attempts)
        self.seed = seed
        self.index = index
        self.attempts = attempts

    def __str__(self) -> str:
        where = f"record {self.index} " if self.index is not None else ""
        return (
            f"generation failed for {where}(seed {self.seed}) "
            f"after {self.attempts} attempts"
        )


class DatasetFormatError(LocalQSTError):
    """Dataset file is malformed"""


class DatasetVersionError(DatasetFormatError):
    """Dataset file declares an unsupported format version"""


class DatasetTruncatedError(DatasetFormatError):
    """Dataset file holds fewer records than its header declares"""


class DatasetTopologyError(DatasetFormatError):
    """Dataset records or header disagree with the expected topology"""


class CheckpointError(LocalQSTError):
    """Checkpoint file is malformed"""


class CheckpointMagicError(CheckpointError):
    """File does not start with the checkpoint magic bytes"""


class CheckpointVersionError(CheckpointError):
    """Checkpoint declares an unsupported format version"""


class CheckpointTruncatedError(CheckpointError):
    """Checkpoint ends before its declared content"""


class CheckpointShapeError(CheckpointError):
    """Checkpoint header layer sizes disagree with the payload"""


class TrainingDivergedError(NonFiniteError):
    """Loss became non-finite during training"""

    def __init__(self, epoch: int, batch: int, loss: float):
        super().__init__(epoch, batch, loss)
        self.epoch = epoch
        self.batch = batch
        self.loss = loss

    def __str__(self) -> str:
        return (
            f"training diverged at epoch {self.epoch}, batch {self.batch}: "
            f"loss={self.loss}"
        )


class InsufficientDataError(LocalQSTError, ValueError):
    """Base dataset is smaller than a requested training size"""
