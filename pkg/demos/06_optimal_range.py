"""How fast should the range grow?

For heavy-tailed densities the best truncation range at a given series
length balances the range-truncation error against series resolution.
Searching a log-spaced grid per N shows the optimal range growing almost
linearly with N on a log-log scale.
"""

import pathlib

from coskit.harness import run_l_optimal

here = pathlib.Path(__file__).resolve().parent
out = run_l_optimal(out=str(here / "l_optimal.csv"), n_max_exp=14)

for key, res in out["results"].items():
    print(f"\n{key}: optimal range per series length")
    for n, l_opt, err in res["optimal_rows"]:
        print(f"  N = {n:6d}   L* = {l_opt:10.2f}   error {err:.2e}")
    print(f"  log-log growth rate of L* in N: {res['range_slope']:.2f}")
