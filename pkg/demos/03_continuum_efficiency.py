"""
Infinite networks: power laws and exponential decay
===================================================

"""

# with a semicircle spectrum the classical return probability decays like t^-1.5
# only when kbar = 4; for denser networks it decays exponentially
from qwalk.continuum import compare_efficiency

for kbar in (4.0, 9.0):
    rep = compare_efficiency(kbar)
    print(f"kbar={kbar:g}: classical exponent {rep.classical_fit.exponent:.3f}, "
          f"exponential={rep.classical_exponential}, "
          f"quantum maxima exponent {rep.maxima_fit.exponent:.3f}, "
          f"more efficient: {rep.more_efficient}")
