"""Efficiency-optimal operating points under voltage and current limits.

The key structural facts exploited here:

* efficiency depends on the scaling xi only, never on v2;
* for fixed xi, farm power is c(xi)*v2^2 and currents scale linearly in
  v2, so "transmit exactly p" pins v2 = sqrt(p/c(xi)) and feasibility of
  a scaling is a closed-form check;
* c is monotone in beta below arg(b), so the voltage box [v2_min, v2_max]
  maps to an exactly computable beta interval per alpha.

Searches are deterministic: coarse grids (0.005 in alpha, 0.25 deg in
beta) followed by a shrinking local pattern search, with ties broken
toward lower v2, then lower alpha.  For production-level optimization the
pattern search runs in (alpha, t) with t parametrizing the feasible beta
interval of each alpha, which keeps every probe on the power-equality
manifold even when the voltage range collapses to a fixed value.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field, replace

from .cable_model import CableSpec, TwoPort, exact_pi_two_port, segment_profile
from .errors import Infeasible, NoPositivePower
from .power_flow import FlowSolution, OperatingPoint, VoltageScaling, solve_flow

ALPHA_GRID_STEP = 0.005
BETA_GRID_STEP = math.radians(0.25)
REFINE_TOL = 1e-7
TIE_TOL = 1e-9
_BETA_SAMPLES = 41
_REFINE_ROUNDS = 48


class BindingConstraint(enum.Enum):
    V2_MAX = "V2Max"
    V2_MIN = "V2Min"
    CURRENT_LIMIT = "CurrentLimit"
    ALPHA_MAX = "AlphaMax"
    ALPHA_MIN = "AlphaMin"
    INTERNAL_VOLTAGE = "InternalVoltage"


@dataclass(frozen=True)
class Constraints:
    """Operating box and ratings for the optimizer.

    i_rated of None means "use the cable's own rated current".  The
    internal checks run a segment profile per candidate and are off by
    default; check_internal_voltage_max is a phase-voltage cap in p.u.
    """

    v2_min: float = 0.4
    v2_max: float = 1.0
    alpha_min: float = 1.0
    alpha_max: float = 1.1
    i_rated: float | None = None
    check_internal_current: bool = False
    check_internal_voltage_max: float | None = None
    n_profile_segments: int = 100

    def __post_init__(self):
        if not (0.0 < self.v2_min <= self.v2_max):
            raise ValueError(f"need 0 < v2_min <= v2_max, got [{self.v2_min}, {self.v2_max}]")
        if not (self.alpha_min <= self.alpha_max):
            raise ValueError(f"need alpha_min <= alpha_max, got [{self.alpha_min}, {self.alpha_max}]")
        if self.i_rated is not None and not self.i_rated > 0.0:
            raise ValueError(f"i_rated must be > 0, got {self.i_rated}")
        if self.n_profile_segments < 1:
            raise ValueError("n_profile_segments must be >= 1")

    def rated_current(self, spec: CableSpec) -> float:
        return self.i_rated if self.i_rated is not None else spec.rated_current

    def fixed_v2(self, v2: float) -> "Constraints":
        return replace(self, v2_min=v2, v2_max=v2)

    def with_v2_range(self, v2_min: float, v2_max: float) -> "Constraints":
        return replace(self, v2_min=v2_min, v2_max=v2_max)


@dataclass(frozen=True)
class OptimumPoint:
    operating_point: OperatingPoint
    flow: FlowSolution
    binding_constraints: frozenset[BindingConstraint] = field(default_factory=frozenset)

    @property
    def eta(self) -> float | None:
        return self.flow.eta


@dataclass(frozen=True)
class EnvelopePoint:
    """Maximum deliverable power at one (length, voltage) combination."""

    length_km: float
    v2: float
    p_grid_max: float
    p_farm_at_max: float
    feasible: bool = True


@dataclass(frozen=True)
class TransferEnvelope:
    points: tuple[EnvelopePoint, ...]
    envelope: tuple[EnvelopePoint, ...]


@dataclass(frozen=True)
class CurvePoint:
    """One point of the optimal-voltage curve v2 = sqrt(p_farm/c)."""

    p_farm: float
    v2_opt: float
    exceeds_v2_max: bool
    exceeds_current: bool


# ---------------------------------------------------------------------------
# scalar evaluation helpers

class _Cable:
    """Precomputed per-cable quantities for the search loops."""

    def __init__(self, spec: CableSpec, constraints: Constraints):
        self.spec = spec
        self.cons = constraints
        tp: TwoPort = exact_pi_two_port(spec)
        self.a, self.b = tp.a, tp.b
        self.vph = spec.phase_voltage
        self.i_rated = constraints.rated_current(spec)
        # c(beta) = alpha^2*Re(a) + alpha*|b|*cos(beta - arg(b)) rises up to
        # arg(b); cap the search window there to keep bisection monotone.
        self.beta_cap = min(math.pi / 2, cmath.phase(self.b) - 1e-9)
        self.beta_floor_wide = max(-math.pi / 2, cmath.phase(self.b) - math.pi + 1e-9)

    def farm_coeff(self, alpha: float, beta: float) -> float:
        """c with p_farm = c*v2^2 [W/(p.u.)^2]."""
        xi = alpha * cmath.exp(1j * beta)
        return 3.0 * (xi * (self.a * xi + self.b).conjugate()).real * self.vph**2

    def grid_coeff(self, alpha: float, beta: float) -> float:
        xi = alpha * cmath.exp(1j * beta)
        return -3.0 * (self.b * xi + self.a).real * self.vph**2

    def eta(self, alpha: float, beta: float) -> float:
        xi = alpha * cmath.exp(1j * beta)
        farm = (xi * (self.a * xi + self.b).conjugate()).real
        if farm <= 0.0:
            return -math.inf
        return -(self.b * xi + self.a).real / farm

    def unit_currents(self, alpha: float, beta: float) -> tuple[float, float]:
        """|i1|, |i2| per p.u. of v2."""
        xi = alpha * cmath.exp(1j * beta)
        return (
            abs(self.a * xi + self.b) * self.vph,
            abs(self.b * xi + self.a) * self.vph,
        )

    def internal_ok(self, alpha: float, beta: float, v2: float) -> bool:
        cons = self.cons
        if not cons.check_internal_current and cons.check_internal_voltage_max is None:
            return True
        v2_volts = v2 * self.vph
        v1_volts = alpha * cmath.exp(1j * beta) * v2_volts
        prof = segment_profile(self.spec, v1_volts, v2_volts, cons.n_profile_segments)
        if cons.check_internal_current and prof.max_current > self.i_rated * (1 + 1e-12):
            return False
        if cons.check_internal_voltage_max is not None:
            if prof.max_voltage > cons.check_internal_voltage_max * self.vph * (1 + 1e-12):
                return False
        return True

    def solve_beta_for_coeff(self, alpha: float, target: float,
                             beta_lo: float, beta_hi: float) -> float | None:
        """beta in [beta_lo, beta_hi] with farm_coeff == target, or None.

        farm_coeff is monotone increasing on the window, so plain bisection.
        None means the target lies strictly outside the window's range.
        """
        c_lo = self.farm_coeff(alpha, beta_lo)
        c_hi = self.farm_coeff(alpha, beta_hi)
        if target <= c_lo:
            return beta_lo if target == c_lo else None
        if target >= c_hi:
            return beta_hi if target == c_hi else None
        lo, hi = beta_lo, beta_hi
        for _ in range(100):
            mid = 0.5 * (lo + hi)
            if self.farm_coeff(alpha, mid) < target:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)


def _grid(lo: float, hi: float, step: float) -> list[float]:
    if hi <= lo:
        return [lo]
    n = max(2, int(round((hi - lo) / step)) + 1)
    return [lo + (hi - lo) * k / (n - 1) for k in range(n)]


@dataclass
class _Candidate:
    score: float     # objective being maximized
    alpha: float
    beta: float
    v2: float
    t: float = 0.0   # interval coordinate, used by the production search


def _better(cand: _Candidate, best: _Candidate | None) -> bool:
    """Deterministic comparison: score, then lower v2, then lower alpha."""
    if best is None:
        return True
    if cand.score > best.score + TIE_TOL:
        return True
    if cand.score < best.score - TIE_TOL:
        return False
    if cand.v2 < best.v2 - TIE_TOL:
        return True
    if cand.v2 > best.v2 + TIE_TOL:
        return False
    return cand.alpha < best.alpha - TIE_TOL


_PATTERN = (-1.0, -0.5, 0.0, 0.5, 1.0)


def _probe_values(center: float, span: float, lo: float, hi: float) -> list[float]:
    """Pattern offsets around the incumbent plus the exact interval edges.

    Probing the edges every round keeps a shrinking search from stalling a
    hair short of an active bound (steps can shrink below the remaining
    distance before ever landing on it).
    """
    vals = {min(max(center + d * span, lo), hi) for d in _PATTERN}
    vals.add(lo)
    vals.add(hi)
    return sorted(vals)


# ---------------------------------------------------------------------------
# unconstrained scaling optimum

def optimize_scaling_unconstrained(
    spec: CableSpec,
    alpha_range: tuple[float, float] = (1.0, 1.1),
) -> tuple[VoltageScaling, float]:
    """argmax of efficiency over alpha in alpha_range, beta in (0, 90 deg).

    Deterministic coarse grid plus shrinking local refinement; the
    efficiency landscape is smooth and unimodal in this window.
    """
    a_lo, a_hi = alpha_range
    if not (0.0 < a_lo <= a_hi):
        raise ValueError(f"invalid alpha_range {alpha_range}")
    cab = _Cable(spec, Constraints(alpha_min=a_lo, alpha_max=a_hi))
    b_lo, b_hi = 1e-6, cab.beta_cap

    best: _Candidate | None = None
    for alpha in _grid(a_lo, a_hi, ALPHA_GRID_STEP):
        for beta in _grid(b_lo, b_hi, BETA_GRID_STEP):
            e = cab.eta(alpha, beta)
            if math.isfinite(e) and _better(_Candidate(e, alpha, beta, 0.0), best):
                best = _Candidate(e, alpha, beta, 0.0)
    if best is None:
        raise NoPositivePower("no scaling in range yields positive farm power")

    span_a, span_b = ALPHA_GRID_STEP, BETA_GRID_STEP
    for _ in range(_REFINE_ROUNDS):
        improved = best
        for alpha in _probe_values(best.alpha, span_a, a_lo, a_hi):
            for beta in _probe_values(best.beta, span_b, b_lo, b_hi):
                e = cab.eta(alpha, beta)
                if math.isfinite(e) and _better(_Candidate(e, alpha, beta, 0.0), improved):
                    improved = _Candidate(e, alpha, beta, 0.0)
        stalled = improved.score - best.score < REFINE_TOL
        best = improved
        span_a *= 0.5
        span_b *= 0.5
        if stalled and span_b < 1e-10:
            break
    return VoltageScaling(best.alpha, best.beta), best.score


# ---------------------------------------------------------------------------
# optimal-voltage curve (fixed scaling)

def optimal_voltage_curve(
    spec: CableSpec,
    scaling: VoltageScaling,
    p_farm_targets: list[float],
    v2_max: float = 1.0,
    i_rated: float | None = None,
) -> list[CurvePoint]:
    """v2 = sqrt(p_farm/c) per target, flagged against voltage/current limits."""
    cab = _Cable(spec, Constraints(i_rated=i_rated))
    c = cab.farm_coeff(scaling.alpha, scaling.beta)
    if c <= 0.0:
        raise NoPositivePower(f"farm power coefficient is {c:.3g} W/pu^2 at this scaling")
    i1u, i2u = cab.unit_currents(scaling.alpha, scaling.beta)
    out = []
    for p in p_farm_targets:
        if p < 0.0 or not math.isfinite(p):
            raise ValueError(f"farm power target must be >= 0, got {p}")
        v2 = math.sqrt(p / c)
        out.append(CurvePoint(
            p_farm=p,
            v2_opt=v2,
            exceeds_v2_max=v2 > v2_max,
            exceeds_current=max(i1u, i2u) * v2 > cab.i_rated,
        ))
    return out


# ---------------------------------------------------------------------------
# constrained optimum at a required production level

def _binding_set(cab: _Cable, cons: Constraints, alpha: float, beta: float,
                 v2: float) -> frozenset[BindingConstraint]:
    out = set()
    rel = 1e-6
    if v2 >= cons.v2_max * (1 - rel):
        out.add(BindingConstraint.V2_MAX)
    if v2 <= cons.v2_min * (1 + rel):
        out.add(BindingConstraint.V2_MIN)
    i1u, i2u = cab.unit_currents(alpha, beta)
    if max(i1u, i2u) * v2 >= cab.i_rated * (1 - rel):
        out.add(BindingConstraint.CURRENT_LIMIT)
    a_span = max(cons.alpha_max - cons.alpha_min, 1e-9)
    if cons.alpha_max - alpha <= rel * a_span:
        out.add(BindingConstraint.ALPHA_MAX)
    if alpha - cons.alpha_min <= rel * a_span:
        out.add(BindingConstraint.ALPHA_MIN)
    if cons.check_internal_voltage_max is not None:
        v2_volts = v2 * cab.vph
        prof = segment_profile(cab.spec, alpha * cmath.exp(1j * beta) * v2_volts,
                               v2_volts, cons.n_profile_segments)
        if prof.max_voltage >= cons.check_internal_voltage_max * cab.vph * (1 - rel):
            out.add(BindingConstraint.INTERNAL_VOLTAGE)
    return frozenset(out)


def _voltage_feasible_interval(cab: _Cable, cons: Constraints, alpha: float,
                               p_farm: float, beta_floor: float) -> tuple[float, float] | None:
    """Beta interval where v2 = sqrt(p/c) lands inside [v2_min, v2_max]."""
    c_lo_needed = p_farm / cons.v2_max**2
    c_hi_needed = p_farm / cons.v2_min**2
    beta_lo = cab.solve_beta_for_coeff(alpha, c_lo_needed, beta_floor, cab.beta_cap)
    if beta_lo is None:
        if cab.farm_coeff(alpha, beta_floor) < c_lo_needed:
            return None  # even the top of the window cannot transmit p
        beta_lo = beta_floor
    beta_hi = cab.solve_beta_for_coeff(alpha, c_hi_needed, beta_floor, cab.beta_cap)
    if beta_hi is None:
        if cab.farm_coeff(alpha, beta_floor) > c_hi_needed:
            return None  # cannot transmit so little at this alpha
        beta_hi = cab.beta_cap
    if beta_hi < beta_lo:
        return None
    return beta_lo, beta_hi


_CURRENT_REJECT = "current"


def _production_probe(cab: _Cable, cons: Constraints, alpha: float, t: float,
                      p_farm: float, beta_floor: float,
                      cache: dict[float, tuple[float, float] | None]):
    """Point at interval coordinate t in [0, 1]: (candidate, reject_reason)."""
    if alpha in cache:
        interval = cache[alpha]
    else:
        interval = _voltage_feasible_interval(cab, cons, alpha, p_farm, beta_floor)
        cache[alpha] = interval
    if interval is None:
        return None, None
    beta = interval[0] + t * (interval[1] - interval[0])
    c = cab.farm_coeff(alpha, beta)
    if c <= 0.0:
        return None, None
    v2 = math.sqrt(p_farm / c)
    if not (cons.v2_min * (1 - 1e-9) <= v2 <= cons.v2_max * (1 + 1e-9)):
        return None, None
    i1u, i2u = cab.unit_currents(alpha, beta)
    if max(i1u, i2u) * v2 > cab.i_rated:
        return None, _CURRENT_REJECT
    if not cab.internal_ok(alpha, beta, v2):
        return None, None
    e = cab.eta(alpha, beta)
    if not math.isfinite(e):
        return None, None
    return _Candidate(e, alpha, beta, v2, t), None


def _current_boundary_probe(cab: _Cable, cons: Constraints, alpha: float,
                            t_ok: float, t_bad: float, p_farm: float,
                            beta_floor: float, cache: dict):
    """Bisect t between a feasible and a current-rejected probe.

    The optimum often rides the current rating exactly (and can pin both
    end currents at once); grid and pattern probes alone stall short of
    such curved boundaries.
    """
    interval = cache.get(alpha)
    if interval is None:
        return None
    b_lo, b_span = interval[0], interval[1] - interval[0]

    def margin(t: float) -> float:
        beta = b_lo + t * b_span
        c = cab.farm_coeff(alpha, beta)
        if c <= 0.0:
            return math.inf
        v2 = math.sqrt(p_farm / c)
        i1u, i2u = cab.unit_currents(alpha, beta)
        return max(i1u, i2u) * v2 - cab.i_rated

    lo, hi = t_ok, t_bad
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if margin(mid) <= 0.0:
            lo = mid
        else:
            hi = mid
    cand, _ = _production_probe(cab, cons, alpha, lo, p_farm, beta_floor, cache)
    return cand


def _scan_alpha_line(cab: _Cable, cons: Constraints, alpha: float, ts: list[float],
                     p_farm: float, beta_floor: float, cache: dict,
                     best: _Candidate | None) -> _Candidate | None:
    """Probe sorted t values at one alpha, completing current-rating crossings."""
    outcomes = []
    for t in ts:
        cand, reason = _production_probe(cab, cons, alpha, t, p_farm, beta_floor, cache)
        outcomes.append((t, cand, reason))
        if cand is not None and _better(cand, best):
            best = cand
    for (t1, c1, r1), (t2, c2, r2) in zip(outcomes, outcomes[1:]):
        crossing = None
        if c1 is not None and r2 == _CURRENT_REJECT:
            crossing = _current_boundary_probe(cab, cons, alpha, t1, t2,
                                               p_farm, beta_floor, cache)
        elif c2 is not None and r1 == _CURRENT_REJECT:
            crossing = _current_boundary_probe(cab, cons, alpha, t2, t1,
                                               p_farm, beta_floor, cache)
        if crossing is not None and _better(crossing, best):
            best = crossing
    return best


def _production_search(cab: _Cable, cons: Constraints, p_farm: float,
                       beta_floor: float) -> _Candidate | None:
    cache: dict[float, tuple[float, float] | None] = {}
    coarse_ts = [k / (_BETA_SAMPLES - 1) for k in range(_BETA_SAMPLES)]
    best: _Candidate | None = None
    for alpha in _grid(cons.alpha_min, cons.alpha_max, ALPHA_GRID_STEP):
        best = _scan_alpha_line(cab, cons, alpha, coarse_ts, p_farm, beta_floor,
                                cache, best)
    if best is None:
        return None

    span_a = ALPHA_GRID_STEP
    span_t = 1.0 / (_BETA_SAMPLES - 1)
    for _ in range(_REFINE_ROUNDS):
        improved = best
        for alpha in _probe_values(best.alpha, span_a, cons.alpha_min, cons.alpha_max):
            improved = _scan_alpha_line(cab, cons, alpha,
                                        _probe_values(best.t, span_t, 0.0, 1.0),
                                        p_farm, beta_floor, cache, improved)
        stalled = improved.score - best.score < REFINE_TOL
        best = improved
        span_a *= 0.5
        span_t *= 0.5
        if stalled and span_a < 1e-10 and span_t < 1e-10:
            break
    return best


def optimize_at_production(spec: CableSpec, p_farm: float,
                           constraints: Constraints | None = None) -> OptimumPoint:
    """Most efficient feasible way to inject exactly p_farm watts.

    The scaling is searched over the constraint box; v2 follows from the
    power equality and is checked against the voltage box and the current
    rating.  Raises Infeasible when no (v2, xi) in the box transmits
    p_farm within ratings; the caller decides how to treat the shortfall.
    """
    if not (p_farm > 0.0 and math.isfinite(p_farm)):
        raise ValueError(f"p_farm must be > 0 W, got {p_farm}")
    cons = constraints if constraints is not None else Constraints()
    cab = _Cable(spec, cons)

    best = _production_search(cab, cons, p_farm, beta_floor=1e-9)
    if best is None:
        # widen the window to negative beta: needed only when the required
        # transmission is below the box's minimum at beta -> 0+
        best = _production_search(cab, cons, p_farm, beta_floor=cab.beta_floor_wide)
    if best is None:
        raise Infeasible(
            f"no operating point in the box transmits {p_farm/1e6:.3f} MW "
            f"within v2 in [{cons.v2_min}, {cons.v2_max}] p.u. and "
            f"{cab.i_rated:.0f} A"
        )

    op = OperatingPoint(best.v2, VoltageScaling(best.alpha, best.beta))
    flow = solve_flow(spec, op)
    binding = _binding_set(cab, cons, best.alpha, best.beta, best.v2)
    return OptimumPoint(op, flow, binding)


# ---------------------------------------------------------------------------
# maximum deliverable power

def _delivery_probe(cab: _Cable, cons: Constraints, alpha: float, beta: float,
                    p_farm_cap: float | None) -> _Candidate | None:
    c = cab.farm_coeff(alpha, beta)
    g = cab.grid_coeff(alpha, beta)
    i1u, i2u = cab.unit_currents(alpha, beta)
    v2_cap = min(cons.v2_max, cab.i_rated / max(i1u, i2u))
    if p_farm_cap is not None and c > 0.0:
        v2_cap = min(v2_cap, math.sqrt(p_farm_cap / c))
    if v2_cap < cons.v2_min * (1 - 1e-12):
        return None
    # delivery grows with v2 when g > 0; otherwise park at the floor
    v2 = max(v2_cap, cons.v2_min) if g > 0.0 else cons.v2_min
    if not cab.internal_ok(alpha, beta, v2):
        return None
    return _Candidate(g * v2 * v2, alpha, beta, v2)


def max_feasible_power(
    spec: CableSpec,
    constraints: Constraints | None = None,
    p_farm_cap: float | None = None,
) -> tuple[float, float, OptimumPoint]:
    """Maximize delivered grid power over the whole operating box.

    Returns (p_farm_at_max, p_grid_max, point).  With p_farm_cap set, the
    injected power is additionally capped (used for curtailment
    accounting, where a farm cannot inject more than it produces).
    """
    cons = constraints if constraints is not None else Constraints()
    cab = _Cable(spec, cons)

    best: _Candidate | None = None
    for alpha in _grid(cons.alpha_min, cons.alpha_max, ALPHA_GRID_STEP):
        for beta in _grid(1e-9, cab.beta_cap, BETA_GRID_STEP):
            cand = _delivery_probe(cab, cons, alpha, beta, p_farm_cap)
            if cand is not None and _better(cand, best):
                best = cand
    if best is None:
        raise Infeasible(
            f"charging current alone exceeds {cab.i_rated:.0f} A at "
            f"v2 = {cons.v2_min} p.u.; even zero-power operation violates limits"
        )

    span_a, span_b = ALPHA_GRID_STEP, BETA_GRID_STEP
    for _ in range(_REFINE_ROUNDS):
        improved = best
        for alpha in _probe_values(best.alpha, span_a, cons.alpha_min, cons.alpha_max):
            for beta in _probe_values(best.beta, span_b, 1e-9, cab.beta_cap):
                cand = _delivery_probe(cab, cons, alpha, beta, p_farm_cap)
                if cand is not None and _better(cand, improved):
                    improved = cand
        best = improved
        span_a *= 0.5
        span_b *= 0.5
        if span_b < 1e-10 and span_a < 1e-10:
            break

    op = OperatingPoint(best.v2, VoltageScaling(best.alpha, best.beta))
    flow = solve_flow(spec, op)
    binding = _binding_set(cab, cons, best.alpha, best.beta, best.v2)
    return flow.p_farm, flow.p_grid, OptimumPoint(op, flow, binding)


def transfer_envelope(
    spec_template: CableSpec,
    lengths: list[float],
    v2_values: list[float],
    constraints: Constraints | None = None,
) -> TransferEnvelope:
    """Capability study: thin fixed-voltage curves plus the upper envelope.

    Per (length, v2) the deliverable maximum at that fixed voltage; per
    length also the maximum with v2 free inside the constraint box.
    Infeasible combinations are recorded as zero capability, not errors.
    """
    if not lengths or not v2_values:
        raise ValueError("lengths and v2_values must be non-empty")
    cons = constraints if constraints is not None else Constraints()

    points = []
    envelope = []
    for length in lengths:
        spec = spec_template.with_length(length)
        for v2 in v2_values:
            try:
                pf, pg, _ = max_feasible_power(spec, cons.fixed_v2(v2))
                if pg > 0.0:
                    points.append(EnvelopePoint(length, v2, pg, pf, feasible=True))
                else:
                    points.append(EnvelopePoint(length, v2, 0.0, 0.0, feasible=True))
            except Infeasible:
                points.append(EnvelopePoint(length, v2, 0.0, 0.0, feasible=False))
        try:
            pf, pg, point = max_feasible_power(spec, cons)
            v2_at = point.operating_point.v2
            if pg > 0.0:
                envelope.append(EnvelopePoint(length, v2_at, pg, pf, feasible=True))
            else:
                envelope.append(EnvelopePoint(length, v2_at, 0.0, 0.0, feasible=True))
        except Infeasible:
            envelope.append(EnvelopePoint(length, cons.v2_min, 0.0, 0.0, feasible=False))
    return TransferEnvelope(tuple(points), tuple(envelope))
