"""
Removing edges from a complete graph
====================================

"""

# the complete graph stays near its initial node; random edge removal breaks
# the huge degeneracy and the long-time average falls roughly exponentially
from qwalk.ensemble import edge_removal_scan

scan = edge_removal_scan(100, [0, 25, 50, 100, 150, 200], realizations=10, seed=0)
for row in scan.rows:
    print(f"m={row['m']:4d}  chi_bar {row['chi_bar']:.4f}")
print("fitted decay rate:", round(scan.fits["complete-minus-m"].beta, 4))
