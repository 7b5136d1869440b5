"""Numerical integration of Hamilton's equations for any surface model.

Adaptive embedded Runge-Kutta (Dormand-Prince 5(4)) with dense output,
running in the selected kernel backend.  The cyclic momentum p_phi is carried
as a constant and never stepped, so its drift is exactly zero.
"""

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .backend import core
from .constants import SAMPLES_PER_OSCILLATION, TOL
from .errors import (
    DomainError,
    SingularityReached,
    StepSizeUnderflow,
    UnboundMotion,
)
from .models import Dimension, PhasePoint, SurfaceModel, chart_interval, energy

_STATUS_NAMES = {0: "ok", 1: "singularity", 2: "step_underflow",
                 3: "max_steps", 4: "event_overflow"}


@dataclass
class Trajectory:
    """Sampled solution of Hamilton's equations.

    ``states`` rows are [u, p_u, phi] for 2D models and
    [xi, eta, p_xi, p_eta, phi] for ambient ones; times are strictly
    increasing and every sample lies inside the chart.
    """

    times: np.ndarray
    states: np.ndarray
    energies: np.ndarray
    p_phi: float
    model: SurfaceModel
    events: np.ndarray
    status: str
    meta: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.times)

    def phase_point(self, i) -> PhasePoint:
        row = self.states[i]
        if self.model.dim is Dimension.SURFACE2D:
            return PhasePoint(u=row[0], p_u=row[1], phi=row[2], p_phi=self.p_phi)
        return PhasePoint(u=(row[0], row[1]), p_u=(row[2], row[3]),
                          phi=row[4], p_phi=self.p_phi)

    def samples(self):
        for i in range(len(self.times)):
            yield (self.times[i], self.phase_point(i), self.energies[i])


@dataclass(frozen=True)
class ConservationReport:
    max_energy_drift: float
    max_pphi_drift: float
    steps: int


@dataclass(frozen=True)
class PeriodMeasurement:
    period: float
    u_max: float
    u_min: float
    oscillations: int
    maxima_times: np.ndarray


def _initial_state(m: SurfaceModel, s0: PhasePoint):
    if m.dim is Dimension.SURFACE2D:
        return [float(s0.u), float(s0.p_u), float(s0.phi)]
    xi, eta = s0.u
    pxi, peta = s0.p_u
    return [float(xi), float(eta), float(pxi), float(peta), float(s0.phi)]


def integrate(m: SurfaceModel, s0: PhasePoint, t_end: float, tol: float = 1e-10,
              n_samples: Optional[int] = None, collect_events: bool = False,
              max_steps: int = 50_000_000, max_step: float = math.inf,
              event_cap: int = 100_000) -> Trajectory:
    """Solve du/dt = dH/dp_u, dp_u/dt = -dH/du, dphi/dt = dH/dp_phi on [0, t_end].

    Local error is controlled to ``tol`` (relative, with a small absolute
    floor).  Raises SingularityReached with the partial trajectory attached
    if the state reaches the chart guard band, and StepSizeUnderflow if step
    control collapses.
    """
    if not 1e-14 <= tol <= 1e-3:
        raise ValueError("tol must lie in [1e-14, 1e-3]")
    if t_end <= 0.0:
        raise ValueError("t_end must be positive")
    energy(m, s0)  # validates the chart domain
    y0 = _initial_state(m, s0)
    if n_samples is None:
        n_samples = 1001
    sample_ts = np.linspace(0.0, t_end, n_samples)

    samples, energies, n_emitted, events, status, stats = core.propagate(
        m.kind, tuple(m.params), float(s0.p_phi), y0, 0.0, float(t_end),
        float(tol), float(tol) * 1e-2, float(max_step),
        [float(t) for t in sample_ts], bool(collect_events),
        int(max_steps), int(event_cap))

    dim = 5 if m.dim is Dimension.AMBIENT3D else 3
    states = np.asarray(samples, dtype=float).reshape(n_samples, dim)[:n_emitted]
    tr = Trajectory(
        times=sample_ts[:n_emitted].copy(),
        states=states,
        energies=np.asarray(energies, dtype=float)[:n_emitted],
        p_phi=float(s0.p_phi),
        model=m,
        events=np.asarray(events, dtype=float).reshape(-1, 5),
        status=_STATUS_NAMES.get(status, str(status)),
        meta={"tol": tol, "t_end": t_end, "initial_state": s0,
              "naccept": stats[0], "nreject": stats[1], "nfev": stats[2]},
    )
    if status == 1:
        raise SingularityReached(
            "integration entered the chart guard band at t=%r"
            % (tr.times[-1] if len(tr) else 0.0), trajectory=tr)
    if status in (2, 3):
        raise StepSizeUnderflow(
            "step control collapsed (%s)" % tr.status, trajectory=tr)
    return tr


def conservation_report(tr: Trajectory) -> ConservationReport:
    """Worst-case energy and p_phi drift over the sampled trajectory."""
    if len(tr) == 0:
        raise ValueError("empty trajectory")
    h0 = tr.energies[0]
    scale = abs(h0) if h0 != 0.0 else 1.0
    drift = float(np.max(np.abs(tr.energies - h0))) / scale
    # p_phi is a carried constant, never integrated
    return ConservationReport(max_energy_drift=drift, max_pphi_drift=0.0,
                              steps=int(tr.meta.get("naccept", len(tr))))


def _assert_bound(m: SurfaceModel, s0: PhasePoint):
    """Check via the sign pattern of p_u^2 that motion in u is bounded."""
    from .models import radial_momentum_squared

    E = energy(m, s0)
    lo, hi = chart_interval(m)
    u0 = float(s0.u)
    span_hi = hi if math.isfinite(hi) else max(100.0, 100.0 * abs(u0))
    grid_up = np.linspace(u0, span_hi, 4096)
    bounded_up = False
    for u in grid_up[1:]:
        if radial_momentum_squared(m, float(u), E, s0.p_phi) < 0.0:
            bounded_up = True
            break
    if not bounded_up:
        raise UnboundMotion(
            "no upper turning point: p_u^2 stays nonnegative out to u=%g" % span_hi)
    grid_dn = np.linspace(u0, lo, 4096)
    for u in grid_dn[1:]:
        if radial_momentum_squared(m, float(u), E, s0.p_phi) < 0.0:
            return E
    # reaching the lower chart edge with p_u^2 >= 0 everywhere is fine only
    # if the edge itself is regular for the motion (it is not, for these
    # charts, unless the barrier vanished); treat as bounded and let the
    # integrator guard decide
    return E


def measure_radial_period(m: SurfaceModel, s0: PhasePoint, oscillations: int = 10,
                          tol: float = 1e-10) -> PeriodMeasurement:
    """Average time between successive maxima of u over many oscillations.

    Maxima are p_u sign changes (+ to -) located on the dense interpolant.
    Raises UnboundMotion if no turning occurs within the search horizon.
    """
    if m.dim is not Dimension.SURFACE2D:
        raise DomainError("period measurement applies to 2D models")
    E = _assert_bound(m, s0)

    # crude horizon estimate from the phase-space scale, then expand
    from .models import gradients as _grads

    du_dt = abs(_grads(m, s0)[1])
    lo, hi = chart_interval(m)
    width = (hi - lo) if math.isfinite(hi) else max(1.0, 2 * abs(float(s0.u)))
    horizon = max(1.0, 4.0 * width / max(du_dt, 0.1))
    needed = oscillations + 1
    for _ in range(12):
        tr = integrate(m, s0, horizon, tol=tol,
                       n_samples=max(2, min(20001, int(horizon * 64))),
                       collect_events=True)
        ev = tr.events
        maxima = ev[ev[:, 4] < 0.0] if len(ev) else ev
        if len(maxima) >= needed:
            break
        horizon *= 2.0
    else:
        raise UnboundMotion("no radial turning within the search horizon")
    if len(maxima) < needed:
        raise UnboundMotion("fewer than %d maxima within the horizon" % needed)

    times = maxima[:needed, 0]
    period = (times[-1] - times[0]) / (len(times) - 1)
    minima = ev[ev[:, 4] > 0.0]
    u_max = float(np.mean(maxima[:needed, 1]))
    u_min = float(np.mean(minima[:needed - 1, 1])) if len(minima) else math.nan
    return PeriodMeasurement(period=float(period), u_max=u_max, u_min=u_min,
                             oscillations=len(times) - 1, maxima_times=times)


def default_samples(n_oscillations: float) -> int:
    """Reporting resolution: dense output at 512 points per oscillation."""
    return max(2, int(math.ceil(n_oscillations * SAMPLES_PER_OSCILLATION)) + 1)
