"""Modified-Laplacian opinion dynamics on signed digraphs.

Pick an invertible P with ``P A P^-1 >= 0``, set the out-degree in opinion
coordinates to ``theta_x = P^-1 diag(row sums of P A P^-1) P`` and the flow
``xdot = -(theta_x - A) x`` settles on a steady state whose shape is fixed by
``P^-1 1``.
"""

from .design import (DesignResult, ExistenceVerdict, TransformMatrix, Verdict, block_design,
                     check_membership, design_laplacian, existence_report, gauge_design,
                     ratio_design, reverse_design, weight_balanced)
from .dynamics import (SpectrumReport, SteadyStatePrediction, Trajectory, VerificationReport,
                       null_pair, predict, predict_block, predict_steady_state, predict_uniform,
                       simulate, spectrum, stability, verify)
from .errors import OpinionFlowError
from .files import dump_graph, load_graph, parse_graph
from .graphs import (BalanceCertificate, BlockDecomposition, ConnectivityReport, GraphClass,
                     SignedDigraph, block_decompose, classify, connectivity, unsigned_counterpart)

__version__ = "0.1.0"
