"""
Random networks and their Laplacian spectra
===========================================

"""

# generate one network of each random model from a fixed seed
import numpy as np
from qwalk.graphs import GraphModelParams, generate_model
from qwalk.spectral import eigendecompose, laplacian

er, _ = generate_model(GraphModelParams("er", 100, p=10 / 99), seed=1)
reg, _ = generate_model(GraphModelParams("config", 100, k=10), seed=1)
print("ER edges:", er.num_edges, "mean degree:", er.mean_degree())
print("uniform-degree edges:", reg.num_edges, "degrees:", set(reg.degrees().tolist()))

# diagonalize the Laplacians with the Jacobi solver
for name, g in (("ER", er), ("config", reg)):
    s = eigendecompose(laplacian(g))
    print(f"{name}: smallest eigenvalues {np.round(s.eigenvalues[:3], 4)}, "
          f"largest {s.eigenvalues[-1]:.3f}, "
          f"degenerate classes {sum(len(c) > 1 for c in s.degeneracy_classes)}")

# the eigenvalue variance for ER reflects degree fluctuations as well as the adjacency part
s = eigendecompose(laplacian(er))
print("ER eigenvalue variance:", round(float(s.eigenvalues.var()), 2))
