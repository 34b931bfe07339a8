"""Matrix-free estimators of matrix-based Renyi entropy, mutual information and total correlation."""

from .bench import BenchmarkRecord, BenchmarkSpec, generate_mixture, run_benchmark
from .blocklr import BlockLowRank, build_block_lowrank, kmeans_partition, randomized_svd
from .errors import CollapsedEstimateError, NotPSDError, NumericalError
from .exact import (
    eigen_spectrum,
    exact_entropy,
    exact_joint_entropy,
    exact_mutual_information,
    exact_total_correlation,
)
from .kernels import KernelSpec, build_gram, hadamard_joint, load_csv
from .lanczos import lanczos_entropy, lanczos_steps
from .measures import (
    MeasureRequest,
    estimate_entropy,
    greedy_feature_selection,
    mutual_information,
    total_correlation,
)
from .poly import chebyshev_degree, chebyshev_entropy, taylor_degree, taylor_entropy
from .sketch import EntropyEstimate, EstimatorConfig, integer_entropy, power_iteration, sample_sketch

__version__ = "0.1.0"
