"""How sharp is the certified series length?

For the lognormal at-the-money put we tabulate the certified N across
derivative orders and compare with the smallest N that actually meets the
tolerance.  The certified value lands within ~50% of the empirical minimum
at sensible orders, and scanning orders recovers the flat optimum.
"""

from coskit import BS, MarketContext, TuningRequest, tune_semiheavy
from coskit.harness import run_table1
from coskit.tuning import minimize_series_order

out = run_table1(time_reps=8)

print("derivative order -> certified N (pricing / numeric-bound time, ms)")
for j, n, cpu_cos, cpu_hj in out["rows"]:
    print(f"  j = {j:2d}   N = {n:4d}   ({cpu_cos:.3f} / {cpu_hj:.3f})")
print(f"\nempirically minimal N meeting the tolerance: {out['n_min']}"
      f"  (COS call at that N: {out['cpu_nmin_ms']:.3f} ms)")

ctx = MarketContext(S0=100.0, r=0.0, T=1.0)
req = TuningRequest(BS(0.2), ctx, payoff_bound=100.0, tol=1e-8,
                    moment_order=8, series_order=40)
j_star, n_star = minimize_series_order(req)
print(f"\nscanning all orders: best N = {n_star} at order {j_star}")
print(f"certified N at the default order 40: {tune_semiheavy(req).N}")
print(f"conservatism vs the empirical minimum: "
      f"{tune_semiheavy(req).N / out['n_min']:.2f}x")
