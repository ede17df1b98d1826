"""Heavy tails change the rules.

The finite moment log stable model has a Pareto left tail, so the moment
rule for the truncation range does not apply; the tuner switches to the
Pareto tail-mass rule and picks the density range from the coefficient-
substitution bound.  The certified parameters price a one-year call to a
cent in about a millisecond.
"""

from coskit import FMLS, MarketContext, tail_profile
from coskit.harness import run_fmls_study

model = FMLS(alpha=1.5597, sigma=0.1486)
ctx = MarketContext(S0=100.0, r=0.0, T=1.0)

prof = tail_profile(model, ctx)
print(f"tail profile: Pareto index {prof.index}, amplitude {prof.amplitude:.5f}")
print("(the density decays like amplitude * |x|^-(1+index) on the left)\n")

out = run_fmls_study(time_reps=16)
p = out["params"]
print(f"tuned payoff range   M = {p.M:.2f}")
print(f"tuned density range  L = {p.L:.2f}")
print(f"certified terms      N = {p.N}")
print(f"COS price            {out['price']:.7f}")
print(f"reference (damped)   {out['reference']:.7f}")
print(f"|error|              {out['err']:.2e}  (certified <= 0.01)")
print(f"empirical minimal N  {out['n_min']}")
print(f"pricing time         {out['cpu_tuned_ms']:.2f} ms at certified N, "
      f"{out['cpu_nmin_ms']:.2f} ms at minimal N")
print(f"default-parameter damped-transform price: {out['cm_default']:.7f}")
