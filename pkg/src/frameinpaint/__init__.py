"""Parseval wavelet and shearlet frames on the torus, masked line-singularity
data, sparse inpainting, and the coherence diagnostics behind it."""
from .bands import BandFrame, Coeffs
from .diagnostics import (BoundReport, ClusterSet, cluster_coherence, cluster_set,
                          clustered_sparsity_delta, concentration_estimate, error_bounds,
                          masked_cluster_mass, phase_space_portrait)
from .errors import (ArgumentError, ConfigError, FormatError, FrameError, ModelError, ParseError,
                     ScaleError, ShapeError, SizeError)
from .grid import Grid2D, Spectrum2D, dft, idft, norm
from .meyer import MeyerFrame
from .model import LineModelSpec, MaskSpec, filtered_line_image, strip_mask
from .recovery import (iterative_threshold_inpaint, l1_inpaint, one_step_threshold,
                       relative_error)
from .shearlet import ShearletFrame

__version__ = "0.1.0"
