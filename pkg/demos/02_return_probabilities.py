"""
Classical and quantum return probabilities
==========================================

"""

# a small ensemble of ER networks, N=100 and mean degree 10
import numpy as np
from qwalk.ensemble import EnsembleConfig, run_ensemble
from qwalk.graphs import GraphModelParams
from qwalk.transport import TransitionSeries, linear_grid, plateau

params = GraphModelParams("er", 100, p=10 / 99, seed=7)
res = run_ensemble(EnsembleConfig(params, realizations=20, grid=linear_grid(20, 0.05)))

# classical walks spread out to 1/N, quantum walks stay on a plateau well above it
for t in (0.0, 0.5, 1.0, 5.0, 20.0):
    i = int(np.argmin(np.abs(res.grid.points - t)))
    print(f"t={t:5.1f}  classical {res.mean_pbar[i]:.4f}  quantum {res.mean_pibar[i]:.4f}")

mean, std = plateau(TransitionSeries(res.grid, "quantum", res.mean_pibar))
print(f"quantum plateau {mean:.4f} +- {std:.4f}; long-time average {res.mean_chi_bar:.4f}")
