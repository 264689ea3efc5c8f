"""Classical and quantum continuous-time walks on random networks."""

__version__ = "0.1.0"

from .errors import GenerationError, NumericalError, ParameterError  # noqa: E402
from .graphs import (  # noqa: E402
    Graph,
    GraphModelParams,
    generate_complete,
    generate_complete_minus_m,
    generate_configuration,
    generate_cycle,
    generate_er,
    make_rng,
    randomize_by_edge_interchange,
)
from .spectral import Spectrum, cluster_degeneracies, eigendecompose, laplacian  # noqa: E402
from .transport import (  # noqa: E402
    TimeGrid,
    avg_amplitude_bound,
    avg_return_classical,
    avg_return_quantum,
    classical_transition,
    linear_grid,
    log_grid,
    long_time_average,
    quantum_transition,
)
