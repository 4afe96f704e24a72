"""The two worked example networks.

``GRAPH2`` is a reconstruction. Only its leader block, transform, modified
out-degree and final state are published; the follower weights below are
one choice reproducing all of those (theta_x follower entries 3, 0.5, 0.5,
three zero eigenvalues of A, final followers -11.43, 22.86, 22.86).
"""

import numpy as np

from .graphs import SignedDigraph

GRAPH1_A = np.array([[0.0, -1.0, 0.0],
                     [0.0, 0.0, 4.0],
                     [-2.0, 0.0, 0.0]])
GRAPH1 = SignedDigraph(GRAPH1_A)
GRAPH1_X0 = np.array([10.0, 20.0, 50.0])

# polarising gauge and the non-diagonal clustering transform
GRAPH1_P_GAUGE = np.diag([2.0, -2.0, -2.0])
GRAPH1_P_CLUSTER = np.array([[-2.0, -1.0, 2.0],
                             [-2.0, 1.0, -2.0],
                             [2.0, 1.0, 2.0]])

GRAPH2_A = np.zeros((6, 6))
GRAPH2_A[:3, :3] = GRAPH1_A
GRAPH2_A[3, 0] = 4.0     # agent 4 listens to 1 ...
GRAPH2_A[3, 1] = 1.0     # ... and to 2
GRAPH2_A[4, 0] = -1.0    # agent 5 distrusts 1
GRAPH2_A[5, 4] = 0.5     # agent 6 follows 5
GRAPH2 = SignedDigraph(GRAPH2_A)
GRAPH2_X0 = np.array([10.0, 20.0, 50.0, -10.0, -20.0, 30.0])
GRAPH2_P = np.diag([2.0, -2.0, -2.0, 1.2, 1.0, 1.0])
