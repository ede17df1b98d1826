"""Certified selection of the COS parameters (M, L, N).

Given a model, a bound on the payoff, and a price tolerance, these rules
return ranges and a series length that provably keep the COS price within the
tolerance: the moment rule for semi-heavy (exponential) tails and the Pareto
rule for heavy tails, both combined with the integration-by-parts bound on
the series tail evaluated at a chosen derivative order.
"""

import math
from dataclasses import dataclass

from .bounds import DerivativeBound, hj_closed_form, hj_numeric
from .cos_engine import CosParameters
from .errors import NoClosedForm, NoSmoothness, ToleranceTooLoose
from .models import (VG, HeavyTail, MarketContext, ModelSpec, SemiHeavyTail,
                     central_moment, tail_profile)

__all__ = ["TuningRequest", "tune", "tune_semiheavy", "tune_heavy",
           "minimize_series_order"]


@dataclass(frozen=True)
class TuningRequest:
    """What to tune for: model and market, a uniform bound on the (bounded)
    payoff -- the strike for puts, 1 for digitals -- the price tolerance, the
    moment order used for the range rule, and the derivative order used for
    the series rule."""
    model: ModelSpec
    ctx: MarketContext
    payoff_bound: float
    tol: float
    moment_order: int = 8
    series_order: int = 40
    minimize_order: bool = False

    def __post_init__(self):
        if not self.payoff_bound > 0:
            raise ValueError("payoff bound must be positive")
        if not self.tol > 0:
            raise ValueError("tolerance must be positive")
        if self.moment_order < 2 or self.moment_order % 2:
            raise ValueError("moment order must be even and >= 2")
        if self.series_order < 1:
            raise ValueError("series order must be >= 1")


def _vg_smoothness_cap(model: VG, T: float) -> int:
    """Largest J >= 0 with J + 2 < 2T/nu, or -1 when not even once
    continuously differentiable with bounded derivative."""
    limit = 2.0 * T / model.nu - 2.0
    if limit <= 0.0:
        return -1
    cap = math.ceil(limit) - 1
    return max(cap, 0) if limit > 0 else -1


def _effective_order(model: ModelSpec, T: float, requested: int) -> int:
    """Requested series order clamped to the model's smoothness; 0 selects
    the square-root rule that only needs one bounded derivative."""
    if isinstance(model, VG):
        cap = _vg_smoothness_cap(model, T)
        if cap < 0:
            raise NoSmoothness(
                f"VG density at T={T} (nu={model.nu}) lacks a bounded "
                "derivative; no series rule applies")
        return min(requested, cap)
    return requested


def _h_next(model: ModelSpec, ctx: MarketContext, order: int,
            override: DerivativeBound | None) -> DerivativeBound:
    """Derivative bound H_(order+1): explicit override, else closed form,
    else the numeric integral."""
    if override is not None:
        if override.order != order + 1:
            raise ValueError(
                f"override bounds derivative {override.order}, need {order + 1}")
        return override
    try:
        return hj_closed_form(model, ctx, order + 1)
    except NoClosedForm:
        from .models import centralized_cf
        return hj_numeric(centralized_cf(model, ctx), order + 1)


def _log_series_n(order: int, log_h_next: float, L: float, xi: float,
                  tol: float) -> float:
    """log of the series-length bound for order >= 1:
    ((2^(j+2) H_(j+1) L^(j+1) / (j pi^(j+1))) * 12 xi / tol)^(1/j)."""
    j = order
    ln = ((j + 2) * math.log(2.0) + log_h_next + (j + 1) * math.log(L)
          - math.log(j) - (j + 1) * math.log(math.pi)
          + math.log(12.0 * xi / tol))
    return ln / j


def _ceil_n(x: float) -> int:
    return max(1, int(math.ceil(x - 1e-12)))


def _check_semiheavy_range(profile: SemiHeavyTail, L: float, M: float,
                           xi: float, tol: float, with_series_cond: bool):
    """The selection rule is asymptotic in the tolerance; verify the three
    range conditions it silently needs, instead of trusting asymptotics."""
    a, r = profile.amplitude, profile.rate
    if L < profile.onset:
        raise ToleranceTooLoose(
            f"range {L:.4g} below the tail-domination onset {profile.onset:.4g}")
    l_density = -math.log(math.sqrt(r) / a * tol / (6.0 * xi)) / r
    bracket = (2.0 * math.pi * a / math.sqrt(6.0 * r)
               * math.sqrt(1.0 + 1.0 / (M * r) + 0.5 / (M * r) ** 2))
    l_subst = -math.log(tol / (6.0 * xi) / bracket) / r
    checks = [("density-tail", l_density), ("substitution-term", l_subst)]
    if with_series_cond:
        l_series = -math.log(math.pi / (4.0 * a) * tol / (12.0 * xi)) / r
        checks.append(("series-boundary", l_series))
    for name, needed in checks:
        if L < needed:
            raise ToleranceTooLoose(
                f"tolerance too loose: range {L:.4g} fails the {name} "
                f"condition (needs >= {needed:.4g})")


def tune_semiheavy(req: TuningRequest,
                   h_next: DerivativeBound | None = None) -> CosParameters:
    """Ranges and series length for exponentially decaying tails.

    L = M from the even-moment tail rule (2 K mu_n / tol)^(1/n); N from the
    series bound at the requested derivative order (or the square-root rule
    when only one bounded derivative exists).  The certified guarantee is
    |COS price - true price| <= tol.
    """
    profile = tail_profile(req.model, req.ctx)
    if not isinstance(profile, SemiHeavyTail):
        raise TypeError(f"{type(req.model).__name__} does not have "
                        "semi-heavy tails; use tune_heavy")
    n = req.moment_order
    mu_n = central_moment(req.model, req.ctx, n)
    L = M = (2.0 * req.payoff_bound * mu_n / req.tol) ** (1.0 / n)
    xi = math.sqrt(2.0 * M) * req.payoff_bound

    j = _effective_order(req.model, req.ctx.T, req.series_order)
    if req.minimize_order and j >= 1:
        j, _ = minimize_series_order(req, max_order=120)

    bound = _h_next(req.model, req.ctx, j, h_next)
    if j == 0:
        n_real = max(4.0 * L / math.pi,
                     (4.0 * bound.value * L / math.pi * 6.0 * xi / req.tol) ** 2)
        rule = "square-root rule (one bounded derivative)"
    else:
        n_real = max(4.0 * L / math.pi,
                     math.exp(_log_series_n(j, bound.log_value, L, xi, req.tol)))
        rule = f"series bound at derivative order {j}"
    N = _ceil_n(n_real)

    _check_semiheavy_range(profile, L, M, xi, req.tol, with_series_cond=j >= 1)

    return CosParameters(
        M=M, L=L, N=N, tol=req.tol,
        provenance={
            "M": f"even-moment tail rule, order {n}",
            "L": "equal to M (semi-heavy tails)",
            "N": f"{rule}, H_{j + 1} from {bound.source.value}",
        })


def tune_heavy(req: TuningRequest,
               h_next: DerivativeBound | None = None) -> CosParameters:
    """Ranges and series length for Pareto tails.

    M from the Pareto tail-mass rule, L from the substitution-term rule (never
    below M), N from the series bound; certified to the requested tolerance.
    """
    profile = tail_profile(req.model, req.ctx)
    if not isinstance(profile, HeavyTail):
        raise TypeError(f"{type(req.model).__name__} does not have "
                        "heavy tails; use tune_semiheavy")
    a, al = profile.amplitude, profile.index
    K, tol = req.payoff_bound, req.tol

    M = (4.0 * a * K / (tol * al)) ** (1.0 / al)
    xi = math.sqrt(2.0 * M) * K
    L = max(M, (12.0 * a * math.sqrt(1.0 / (al * al) + 2.0 / 3.0)
                * xi / tol) ** (2.0 / (1.0 + 2.0 * al)))

    if M < profile.onset:
        raise ToleranceTooLoose(
            f"payoff range {M:.4g} below the tail-domination onset "
            f"{profile.onset:.4g}")

    j = req.series_order
    if req.minimize_order:
        j, _ = minimize_series_order(req, max_order=120)
    bound = _h_next(req.model, req.ctx, j, h_next)
    n_real = max(4.0 * L / math.pi,
                 math.exp(_log_series_n(j, bound.log_value, L, xi, tol)))
    N = _ceil_n(n_real)

    return CosParameters(
        M=M, L=L, N=N, tol=tol,
        provenance={
            "M": f"Pareto tail-mass rule (index {al:.4g})",
            "L": "max of M and the substitution-term rule",
            "N": f"series bound at derivative order {j}, "
                 f"H_{j + 1} from {bound.source.value}",
        })


def tune(req: TuningRequest, h_next: DerivativeBound | None = None) -> CosParameters:
    """Dispatch on the model's tail profile."""
    profile = tail_profile(req.model, req.ctx)
    if isinstance(profile, SemiHeavyTail):
        return tune_semiheavy(req, h_next)
    return tune_heavy(req, h_next)


def minimize_series_order(req: TuningRequest, max_order: int = 120) -> tuple[int, int]:
    """Scan derivative orders 1..max_order and return (order, N) minimizing
    the series-length bound; ties break toward the smaller order.

    Needs closed-form derivative bounds for a cheap sweep.
    """
    profile = tail_profile(req.model, req.ctx)
    if isinstance(profile, SemiHeavyTail):
        mu_n = central_moment(req.model, req.ctx, req.moment_order)
        M = L = (2.0 * req.payoff_bound * mu_n / req.tol) ** (1.0 / req.moment_order)
    else:
        a, al = profile.amplitude, profile.index
        M = (4.0 * a * req.payoff_bound / (req.tol * al)) ** (1.0 / al)
        xi_h = math.sqrt(2.0 * M) * req.payoff_bound
        L = max(M, (12.0 * a * math.sqrt(1.0 / (al * al) + 2.0 / 3.0)
                    * xi_h / req.tol) ** (2.0 / (1.0 + 2.0 * al)))
    xi = math.sqrt(2.0 * M) * req.payoff_bound

    cap = _effective_order(req.model, req.ctx.T, max_order)
    if cap < 1:
        raise NoSmoothness("no derivative order >= 1 is admissible")

    best: tuple[int, int] | None = None
    floor_n = 4.0 * L / math.pi
    for j in range(1, cap + 1):
        bound = hj_closed_form(req.model, req.ctx, j + 1)  # NoClosedForm -> caller
        n_real = max(floor_n,
                     math.exp(_log_series_n(j, bound.log_value, L, xi, req.tol)))
        nj = _ceil_n(n_real)
        if best is None or nj < best[1]:
            best = (j, nj)
    assert best is not None
    return best
