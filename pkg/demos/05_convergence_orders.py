"""Convergence orders under different range schedules.

Keep the range fixed and the error stalls at a range-limited plateau no
matter how many terms you add.  Grow the range with N and convergence is
restored: exponentially fast for light tails, polynomially for heavy ones
(the heavier the tail, the lower the order).  CSVs land next to this script.
"""

import pathlib

from coskit.harness import run_convergence_experiment

here = pathlib.Path(__file__).resolve().parent

for key, note in (("bs", "lognormal: exponential once the range grows"),
                  ("cauchy", "Cauchy digital: polynomial, index 1 tail"),
                  ("fmls", "FMLS call: polynomial, index 1.56 tail")):
    out = run_convergence_experiment(key, out=str(here / f"convergence_{key}.csv"),
                                     n_max_exp=16)
    print(f"\n{note}")
    for name, res in out["results"].items():
        slope = res["slope"]
        last = res["records"][-1]
        tag = f"slope {slope:+.2f}" if slope == slope else "below noise floor"
        print(f"  {name:16s} error at N=2^16: {last.error:.2e}   {tag}")
print("\n(each strategy name is  schedule(parameter);  'constant' schedules "
      "plateau, growing schedules converge)")
