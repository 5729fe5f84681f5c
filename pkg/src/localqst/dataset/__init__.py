"""Training data: random k-local Hamiltonians and their ground-state measurements"""

from .generator import (
    FORMAT_VERSION,
    DatasetFile,
    DatasetRecord,
    generate_dataset,
    generate_record,
    records_to_arrays,
    shuffled_split,
    split_dataset,
)
from .sampling import (
    SamplingSpec,
    add_measurement_noise,
    measurement_noise,
    perturb,
    sample_coeffs,
)
from .storage import read_dataset, write_dataset

__all__ = [
    "FORMAT_VERSION",
    "DatasetFile",
    "DatasetRecord",
    "SamplingSpec",
    "add_measurement_noise",
    "generate_dataset",
    "generate_record",
    "measurement_noise",
    "perturb",
    "read_dataset",
    "records_to_arrays",
    "sample_coeffs",
    "shuffled_split",
    "split_dataset",
    "write_dataset",
]
