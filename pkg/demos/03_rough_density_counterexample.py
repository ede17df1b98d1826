"""When the selection rule is honest but useless.

The variance gamma density at short maturity has exactly one bounded
derivative, so only the square-root rule applies -- and it demands an
absurd number of terms.  Meanwhile fifty terms already price the option
to within a cent.  The rule is not wrong (the bound holds); it is simply
dominated by the worst case that the single-derivative smoothness allows.
"""

from coskit.harness import run_vg_counterexample

out = run_vg_counterexample()

print("variance gamma, sigma=0.1, nu=0.2, T=0.25, at-the-money call, "
      "tolerance 0.01\n")
print(f"damped-transform reference price : {out['reference']:.7f}")
print(f"sup |f'| by direct optimization  : {out['h1_sup']:.1f}")
print(f"sup |f'| by the integral bound   : {out['h1_integral']:.1f}")
print(f"range from the 4th-moment rule   : {out['L']:.4f}")
print(f"square-root-rule series length   : {out['n_rule']:.3g}   (!)")
print(f"COS price with just N = 50       : {out['price_n50']:.7f}")
print(f"its actual error                 : {out['err_n50']:.2e}")
print("\nThe certified N is ~12 orders of magnitude above what the problem"
      "\nneeds; for short-dated VG books, switch to a smoother model (NIG)"
      "\nor accept an uncertified N.")
