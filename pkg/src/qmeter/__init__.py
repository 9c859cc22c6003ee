"""qmeter: quantum measuring devices treated as Shannon communication channels."""
from .core import (BipartiteState, DensityOperator, PureState, SchmidtDecomposition,
                   SpectralDecomposition, collapse_mixture, partial_trace,
                   schmidt_decompose, spectral_decompose, tensor_compose)
from .device import (MeasurementDevice, apply_device, bsc_device, from_unitary,
                     interference_device, make_disturbing, make_ideal, make_imperfect,
                     mhi_reliability, pointer_distribution, validate_device)
from .kernels import BACKEND

__version__ = "0.1.0"
