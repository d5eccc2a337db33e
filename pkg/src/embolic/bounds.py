"""Closed-form volume/simplex-count bounds and the assembled verification report."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, fields

import numpy as np
from scipy.optimize import brentq

from .exceptions import PipelineError, ResolutionError
from .space import MetricMeasureSpace, ball_volume

_TIE_RTOL = 1e-9


@dataclass(frozen=True)
class CrokeEstimate:
    beta: float
    r_floor: float
    point: int
    radius: float


def croke_estimate(space: MetricMeasureSpace, R0: float) -> CrokeEstimate:
    """Smallest ``vol(B(p, R)) / R**n`` over all points and candidate radii.

    Candidates are the distance values in ``(r_floor, R0]`` plus ``R0``
    itself, where ``r_floor`` is three times the largest nearest-neighbour
    spacing; below that the ratio is sampling noise.
    """
    n = space.dim
    r_floor = 3 * float(space.nearest_neighbor.max())
    if not R0 > r_floor:
        raise ResolutionError(
            f"resolution insufficient: R0={R0!r} does not exceed r_floor={r_floor!r}"
        )
    srt, cum = space.profile
    # only the last entry of a run of equal distances carries the closed-ball volume
    last = np.ones_like(srt, dtype=bool)
    last[:, :-1] = srt[:, :-1] != srt[:, 1:]
    mask = last & (srt > r_floor) & (srt <= R0)
    ratio = np.where(mask, cum / np.where(mask, srt, 1.0) ** n, np.inf)
    at_r0 = cum[np.arange(space.point_count), (srt <= R0).sum(axis=1) - 1] / R0**n

    best = min(float(ratio.min()), float(at_r0.min()))
    # exact recheck of everything within rounding distance of the minimum
    near = [(int(p), float(srt[p, j])) for p, j in np.argwhere(ratio <= best * (1 + _TIE_RTOL))]
    near += [(int(p), float(R0)) for p in np.flatnonzero(at_r0 <= best * (1 + _TIE_RTOL))]
    exact = min((ball_volume(space, p, r) / r**n, p, r) for p, r in near)
    return CrokeEstimate(beta=exact[0], r_floor=r_floor, point=exact[1], radius=exact[2])


def compute_theta(rho_hat: float):
    """``theta = sqrt(log_5 rho_hat)``; returns ``(theta, clamped)`` with 0 below 1."""
    if not rho_hat > 0:
        raise ValueError(f"rho_hat must be positive, got {rho_hat}")
    if rho_hat < 1:
        return 0.0, True
    return math.sqrt(math.log(rho_hat) / math.log(5)), False


@dataclass(frozen=True)
class ScaleBound:
    k_max: int
    theta: float
    ok: bool
    strict: bool


def scale_bound_check(packing, theta: float) -> ScaleBound:
    """Largest scale index against theta.

    ``ok`` is ``k_max < theta + 1``; the strict ``k_max < theta`` is recorded
    as ``strict`` but not failed on.
    """
    k = packing.k_max_scale
    return ScaleBound(k_max=k, theta=theta, ok=k < theta + 1, strict=k < theta)


@dataclass(frozen=True)
class Theorem13:
    bound_tk: float
    bound_T: float
    clamped: bool


def theorem13_bound(rho_hat: float, n: int) -> Theorem13:
    """``t_k <= 2 rho_hat 5**(n + (n+1) sqrt(log_5 rho_hat))``; ``bound_T`` drops the 2."""
    theta, clamped = compute_theta(rho_hat)
    bound_T = rho_hat * 5.0 ** (n + (n + 1) * theta)
    return Theorem13(2 * bound_T, bound_T, clamped)


@dataclass(frozen=True)
class Constants:
    Cn: float
    Cnprime: float
    clamped: bool


def explicit_constants(n: int, beta_n: float) -> Constants:
    if not beta_n > 0:
        raise ValueError(f"beta_n must be positive, got {beta_n}")
    x = 2.0**n / beta_n
    inner = math.log(x, 5)
    clamped = inner < 0
    Cn = x * 5.0 ** (2 * n + (n + 1) * math.sqrt(max(inner, 0.0)))
    return Constants(Cn, (n + 1) * math.sqrt(math.log(5)), clamped)


def _invert_t_bound(target: float, n: int) -> float:
    """Smallest rho_hat whose simplex-count bound reaches ``target``."""
    if target <= 2 * 5.0**n:
        return target / (2 * 5.0**n)
    return brentq(lambda x: theorem13_bound(x, n).bound_tk - target, 1.0, target, xtol=1e-12, rtol=1e-14)


@dataclass(frozen=True)
class Theorem11Check:
    k: int
    b_k: int
    t_k: int
    ok: bool | None
    rho_lower: float | None
    literal_rhs: float | None


def verify_theorem11(rho, rho_hat, t, b, n, beta_n, R0, inj) -> list:
    """Forward form ``b_k <= t_k <= bound`` per dimension; ``b_k = 0`` is skipped.

    ``rho_lower`` is the smallest vol/inj^n compatible with ``b_k`` under the
    forward bound at this run's beta_n and R0/inj; ``literal_rhs`` evaluates
    ``C_n b / exp(C_n' sqrt(ln b))``. Both are informational.
    """
    bound = theorem13_bound(rho_hat, n).bound_tk
    const = explicit_constants(n, beta_n)
    out = []
    for k, bk in enumerate(b):
        tk = t[k] if k < len(t) else 0
        if bk == 0:
            out.append(Theorem11Check(k, 0, tk, None, None, None))
            continue
        rho_lower = _invert_t_bound(bk, n) * beta_n * (R0 / inj) ** n
        literal = const.Cn * bk / math.exp(const.Cnprime * math.sqrt(math.log(bk)))
        out.append(Theorem11Check(k, bk, tk, bk <= tk <= bound, rho_lower, literal))
    return out


@dataclass
class BoundReport:
    space: str
    point_count: int
    dim: int
    vol: float
    inj: float
    rho: float
    rho_hat: float
    beta_n: float
    beta_provenance: str
    R0: float
    R0_policy: str
    theta: float
    theta_policy: str
    theta_clamped: bool
    alpha: float
    k_max_scale: int
    scale_bound_ok: bool
    scale_bound_strict: bool
    N: int
    T: int
    T_center: int
    t: list
    b: list
    field: int
    dmax: int
    max_multiplicity: int
    truncated: bool
    bound_T: float
    bound_tk: float
    Cn: float
    Cnprime: float
    Dn: float
    Dnprime: float
    main_inequality_ok: list
    rho_lower_from_b: list
    theorem11_literal_rhs: list
    claim_t0_le_2t1: bool | None
    claim_ti_le_t1: bool | None
    packing_ok: bool
    five_ball_ok: bool
    five_ball_literal_ok: bool
    counting_chain_ok: bool
    counting_chain_links: dict
    counting_chain_strict_a: bool
    degenerate_good_balls: int
    betti_truth: list | None
    betti_match: bool | None
    mandatory_ok: bool = field(init=False)

    def __post_init__(self):
        checks = [self.packing_ok, self.five_ball_ok, self.counting_chain_ok]
        checks += [ok for ok in self.main_inequality_ok if ok is not None]
        if self.betti_match is not None:
            checks.append(self.betti_match)
        self.mandatory_ok = all(checks)

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def to_json(self) -> str:
        return dumps_report(self.to_dict())


def _encode(value) -> str:
    if isinstance(value, bool) or value is None:
        return json.dumps(value)
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return format(value, ".16e") if math.isfinite(value) else "null"
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_encode(v)}" for k, v in value.items()) + "}"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_encode(v) for v in value) + "]"
    raise TypeError(f"cannot encode {type(value).__name__}")


def dumps_report(d: dict) -> str:
    """JSON with every real written to 17 significant digits, keys in field order."""
    body = ",\n".join(f"  {json.dumps(k)}: {_encode(v)}" for k, v in d.items())
    return "{\n" + body + "\n}\n"


REQUIRED_STAGES = (
    "space",
    "croke",
    "params",
    "good_balls",
    "packing",
    "packing_report",
    "table",
    "five_ball",
    "chain",
    "complex",
    "betti",
)


def assemble_report(stages: dict, R0_policy="cover-safe", theta_policy="paper",
                    beta_provenance="empirical", truth=None, max_multiplicity=0) -> BoundReport:
    """Collect every stage output into a :class:`BoundReport`."""
    for name in REQUIRED_STAGES:
        if stages.get(name) is None:
            raise PipelineError(f"missing stage: {name}")
    space = stages["space"]
    beta = stages.get("beta", stages["croke"].beta)
    params = stages["params"]
    packing = stages["packing"]
    cx = stages["complex"]
    prof = stages["betti"]
    n = space.dim

    from .homology import betti_match
    from .nerve import simplex_counts

    rho = space.volume / space.inj**n
    rho_hat = space.volume / (beta * params.R0**n)
    _, clamped = compute_theta(rho_hat)
    scale = scale_bound_check(packing, params.theta)
    t13 = theorem13_bound(rho_hat, n)
    const = explicit_constants(n, beta)
    counts = simplex_counts(cx)
    t11 = verify_theorem11(rho, rho_hat, cx.t, prof.b, n, beta, params.R0, space.inj)
    match = betti_match(prof, truth) if truth is not None else None

    return BoundReport(
        space=space.name,
        point_count=space.point_count,
        dim=n,
        vol=space.volume,
        inj=space.inj,
        rho=rho,
        rho_hat=rho_hat,
        beta_n=beta,
        beta_provenance=beta_provenance,
        R0=params.R0,
        R0_policy=str(R0_policy),
        theta=params.theta,
        theta_policy=str(theta_policy),
        theta_clamped=clamped,
        alpha=params.alpha,
        k_max_scale=scale.k_max,
        scale_bound_ok=scale.ok,
        scale_bound_strict=scale.strict,
        N=packing.N,
        T=stages["table"].T,
        T_center=stages["table"].T_center,
        t=list(cx.t),
        b=list(prof.b),
        field=prof.field.p,
        dmax=cx.dmax,
        max_multiplicity=max_multiplicity,
        truncated=max_multiplicity > cx.dmax + 1,
        bound_T=t13.bound_T,
        bound_tk=t13.bound_tk,
        Cn=const.Cn,
        Cnprime=const.Cnprime,
        Dn=2 * const.Cn,
        Dnprime=const.Cnprime,
        main_inequality_ok=[c.ok for c in t11],
        rho_lower_from_b=[c.rho_lower for c in t11],
        theorem11_literal_rhs=[c.literal_rhs for c in t11],
        claim_t0_le_2t1=counts.t0_le_2t1,
        claim_ti_le_t1=counts.ti_le_t1,
        packing_ok=stages["packing_report"].ok,
        five_ball_ok=stages["five_ball"].ok,
        five_ball_literal_ok=stages["five_ball"].literal_ok,
        counting_chain_ok=stages["chain"].ok,
        counting_chain_links=dict(stages["chain"].links),
        counting_chain_strict_a=stages["chain"].strict_a,
        degenerate_good_balls=sum(g.degenerate for g in stages["good_balls"]),
        betti_truth=list(truth) if truth is not None else None,
        betti_match=match.ok if match is not None else None,
    )
