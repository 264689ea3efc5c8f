"""
Long-time averages and degenerate spectra
=========================================

"""

# complete graphs and cycles have closed forms for the averaged return probability
from qwalk.graphs import generate_complete, generate_cycle
from qwalk.spectral import eigendecompose, laplacian
from qwalk.transport import long_time_average

for n in (10, 100):
    got = long_time_average(eigendecompose(laplacian(generate_complete(n)))).chi_bar
    print(f"K{n}: {got:.6f} vs {(n * n - 2 * n + 2) / n**2:.6f}")

for n in (4, 5, 100, 101):
    got = long_time_average(eigendecompose(laplacian(generate_cycle(n)))).chi_bar
    exact = (2 * n - 2) / n**2 if n % 2 == 0 else (2 * n - 1) / n**2
    print(f"C{n}: {got:.6f} vs {exact:.6f}")

# histogram of the averaged transition probabilities for an ER ensemble
from qwalk.ensemble import EnsembleConfig, chi_distribution, run_ensemble
from qwalk.graphs import GraphModelParams

res = run_ensemble(EnsembleConfig(GraphModelParams("er", 100, p=10 / 99, seed=3), 10, None))
h = chi_distribution(res, bins=10)
print("diagonal counts:", h.diag_counts.tolist(), "outside:", h.diag_below, h.diag_above)
