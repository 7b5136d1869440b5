"""Pure-Python numerical kernels.

Hamiltonian evaluation, analytic gradients, the radial-momentum oracle, and
the adaptive Dormand-Prince 5(4) propagator with dense output and
turning-point event capture.  This module mirrors the compiled extension
``_core``; ``backend.py`` selects one of the two at import time.  Both
implement the same arithmetic so results agree to rounding.

Model encoding: an integer ``kind`` plus a flat parameter vector.

  EL2D / HYP2D  [a, e, cg2, cmono, clin, cg0, cg1]
      unified elliptic-chart Landau form; the coefficients are assembled by
      the model layer (ellipsoid and hyperboloid differ only in coefficient
      wiring and chart domain)
  PAR2D         [p, g, B, Ef, c0, c1, c2]
  EL3D          [a, gp, gm, qp, qm]
  PAR3D         [q, g, B, Ef]

State layout: 2D kinds ``[u, p_u, phi]``; 3D kinds
``[xi, eta, p_xi, p_eta, phi]``.  ``p_phi`` is a conserved parameter and is
never stepped.
"""

import math

from . import _tableau as _tb

EL2D = 1
HYP2D = 2
PAR2D = 3
EL3D = 4
PAR3D = 5

STATUS_OK = 0
STATUS_SINGULARITY = 1
STATUS_STEP_UNDERFLOW = 2
STATUS_MAX_STEPS = 3
STATUS_EVENT_OVERFLOW = 4

_C = _tb.C
_A = _tb.A
_B = _tb.B
_E = _tb.E
_D = _tb.D


# ---------------------------------------------------------------------------
# Hamiltonians
# ---------------------------------------------------------------------------

def hamiltonian(kind, params, y, pphi):
    if kind == EL2D or kind == HYP2D:
        a, e, cg2, cmono, clin, cg0, cg1 = params
        u, pu = y[0], y[1]
        D = 1.0 - e * e * u * u
        X = 1.0 - u * u
        ome = 1.0 - e * e
        gam = cg0 + cg1 * pphi
        braces = (X * pu * pu + D * pphi * pphi / (ome * X)
                  + (cg2 - 2.0 * pphi * cmono * u) / X + clin * u + gam)
        return e * e / (2.0 * a * a * D) * braces
    if kind == PAR2D:
        p, g, B, Ef, c0, c1, c2 = params
        xi, pu = y[0], y[1]
        pre = 1.0 / (p + 2.0 * xi)
        gam = c0 + c1 * pphi + c2 * pphi * pphi
        s = pphi + g
        braces = (4.0 * xi * pu * pu + s * s / xi + 3.0 * g * B * xi
                  - Ef * xi * xi + 0.25 * B * B * xi ** 3 + gam)
        return pre * braces - 0.5 * B * pphi
    if kind == EL3D:
        a, gp, gm, qp, qm = params
        xi, eta, pxi, peta = y[0], y[1], y[2], y[3]
        delta = xi * xi - eta * eta
        Xxi = xi * xi - 1.0
        Xeta = 1.0 - eta * eta
        V = (gp * gp - 2.0 * pphi * gm * xi) / Xxi + 2.0 * a * qp * xi
        W = (gm * gm - 2.0 * pphi * gp * eta) / Xeta + 2.0 * a * qm * eta
        s = Xxi * pxi * pxi + Xeta * peta * peta + V + W
        return s / (2.0 * a * a * delta) + pphi * pphi / (2.0 * a * a * Xxi * Xeta)
    if kind == PAR3D:
        q, g, B, Ef = params
        xi, eta, pxi, peta = y[0], y[1], y[2], y[3]
        sp = pphi + g
        sm = pphi - g
        V = sp * sp / xi + 3.0 * g * B * xi - Ef * xi * xi + 0.25 * B * B * xi ** 3 + 2.0 * q
        W = sm * sm / eta - 3.0 * g * B * eta + Ef * eta * eta + 0.25 * B * B * eta ** 3 + 2.0 * q
        s = 4.0 * xi * pxi * pxi + 4.0 * eta * peta * peta + V + W
        return s / (2.0 * (xi + eta)) - 0.5 * B * pphi
    raise ValueError("unknown model kind %r" % (kind,))


# ---------------------------------------------------------------------------
# Gradients (closed form)
# ---------------------------------------------------------------------------

def gradients(kind, params, y, pphi):
    """Partial derivatives of H.

    Returns ``(dH_du, dH_dpu, dH_dpphi)`` for 2D kinds and
    ``(dH_dxi, dH_deta, dH_dpxi, dH_dpeta, dH_dpphi)`` for 3D kinds.
    ``dH/dphi`` is identically zero (phi is cyclic) and not returned here.
    """
    if kind == EL2D or kind == HYP2D:
        a, e, cg2, cmono, clin, cg0, cg1 = params
        u, pu = y[0], y[1]
        D = 1.0 - e * e * u * u
        X = 1.0 - u * u
        ome = 1.0 - e * e
        gam = cg0 + cg1 * pphi
        mono = cg2 - 2.0 * pphi * cmono * u
        braces = (X * pu * pu + D * pphi * pphi / (ome * X)
                  + mono / X + clin * u + gam)
        pref = e * e / (2.0 * a * a * D)
        dpref = e ** 4 * u / (a * a * D * D)
        dbraces = (-2.0 * u * pu * pu
                   + 2.0 * u * pphi * pphi / (X * X)
                   + (-2.0 * pphi * cmono * X + 2.0 * u * mono) / (X * X)
                   + clin)
        dH_du = dpref * braces + pref * dbraces
        dH_dpu = pref * 2.0 * X * pu
        dH_dpphi = pref * (2.0 * D * pphi / (ome * X) - 2.0 * cmono * u / X + cg1)
        return (dH_du, dH_dpu, dH_dpphi)
    if kind == PAR2D:
        p, g, B, Ef, c0, c1, c2 = params
        xi, pu = y[0], y[1]
        pre = 1.0 / (p + 2.0 * xi)
        gam = c0 + c1 * pphi + c2 * pphi * pphi
        s = pphi + g
        braces = (4.0 * xi * pu * pu + s * s / xi + 3.0 * g * B * xi
                  - Ef * xi * xi + 0.25 * B * B * xi ** 3 + gam)
        dH_du = (-2.0 * pre * pre * braces
                 + pre * (4.0 * pu * pu - s * s / (xi * xi) + 3.0 * g * B
                          - 2.0 * Ef * xi + 0.75 * B * B * xi * xi))
        dH_dpu = pre * 8.0 * xi * pu
        dH_dpphi = pre * (2.0 * s / xi + c1 + 2.0 * c2 * pphi) - 0.5 * B
        return (dH_du, dH_dpu, dH_dpphi)
    if kind == EL3D:
        a, gp, gm, qp, qm = params
        xi, eta, pxi, peta = y[0], y[1], y[2], y[3]
        delta = xi * xi - eta * eta
        Xxi = xi * xi - 1.0
        Xeta = 1.0 - eta * eta
        V = (gp * gp - 2.0 * pphi * gm * xi) / Xxi + 2.0 * a * qp * xi
        W = (gm * gm - 2.0 * pphi * gp * eta) / Xeta + 2.0 * a * qm * eta
        s = Xxi * pxi * pxi + Xeta * peta * peta + V + W
        a2 = a * a
        Vp = ((-2.0 * pphi * gm * Xxi
               - (gp * gp - 2.0 * pphi * gm * xi) * 2.0 * xi) / (Xxi * Xxi)
              + 2.0 * a * qp)
        Wp = ((-2.0 * pphi * gp * Xeta
               + (gm * gm - 2.0 * pphi * gp * eta) * 2.0 * eta) / (Xeta * Xeta)
              + 2.0 * a * qm)
        dH_dxi = ((2.0 * xi * pxi * pxi + Vp) / (2.0 * a2 * delta)
                  - xi * s / (a2 * delta * delta)
                  - xi * pphi * pphi / (a2 * Xxi * Xxi * Xeta))
        dH_deta = ((-2.0 * eta * peta * peta + Wp) / (2.0 * a2 * delta)
                   + eta * s / (a2 * delta * delta)
                   + eta * pphi * pphi / (a2 * Xxi * Xeta * Xeta))
        dH_dpxi = Xxi * pxi / (a2 * delta)
        dH_dpeta = Xeta * peta / (a2 * delta)
        dH_dpphi = ((-2.0 * gm * xi / Xxi - 2.0 * gp * eta / Xeta) / (2.0 * a2 * delta)
                    + pphi / (a2 * Xxi * Xeta))
        return (dH_dxi, dH_deta, dH_dpxi, dH_dpeta, dH_dpphi)
    if kind == PAR3D:
        q, g, B, Ef = params
        xi, eta, pxi, peta = y[0], y[1], y[2], y[3]
        sp = pphi + g
        sm = pphi - g
        V = sp * sp / xi + 3.0 * g * B * xi - Ef * xi * xi + 0.25 * B * B * xi ** 3 + 2.0 * q
        W = sm * sm / eta - 3.0 * g * B * eta + Ef * eta * eta + 0.25 * B * B * eta ** 3 + 2.0 * q
        s = 4.0 * xi * pxi * pxi + 4.0 * eta * peta * peta + V + W
        two_se = 2.0 * (xi + eta)
        Vp = -sp * sp / (xi * xi) + 3.0 * g * B - 2.0 * Ef * xi + 0.75 * B * B * xi * xi
        Wp = -sm * sm / (eta * eta) - 3.0 * g * B + 2.0 * Ef * eta + 0.75 * B * B * eta * eta
        dH_dxi = (4.0 * pxi * pxi + Vp) / two_se - s / (two_se * (xi + eta))
        dH_deta = (4.0 * peta * peta + Wp) / two_se - s / (two_se * (xi + eta))
        dH_dpxi = 4.0 * xi * pxi / (xi + eta)
        dH_dpeta = 4.0 * eta * peta / (xi + eta)
        dH_dpphi = (2.0 * sp / xi + 2.0 * sm / eta) / two_se - 0.5 * B
        return (dH_dxi, dH_deta, dH_dpxi, dH_dpeta, dH_dpphi)
    raise ValueError("unknown model kind %r" % (kind,))


# ---------------------------------------------------------------------------
# Radial momentum oracle (2D kinds)
# ---------------------------------------------------------------------------

def radial_psq(kind, params, u, E, pphi):
    """p_u**2 solved from H(u, p_u) = E; negative values mark forbidden u."""
    if kind == EL2D or kind == HYP2D:
        a, e, cg2, cmono, clin, cg0, cg1 = params
        D = 1.0 - e * e * u * u
        X = 1.0 - u * u
        ome = 1.0 - e * e
        gam = cg0 + cg1 * pphi
        rest = (D * pphi * pphi / (ome * X)
                + (cg2 - 2.0 * pphi * cmono * u) / X + clin * u + gam)
        return (2.0 * a * a * D * E / (e * e) - rest) / X
    if kind == PAR2D:
        p, g, B, Ef, c0, c1, c2 = params
        xi = u
        gam = c0 + c1 * pphi + c2 * pphi * pphi
        s = pphi + g
        rest = s * s / xi + 3.0 * g * B * xi - Ef * xi * xi + 0.25 * B * B * xi ** 3 + gam
        return ((p + 2.0 * xi) * (E + 0.5 * B * pphi) - rest) / (4.0 * xi)
    raise ValueError("radial momentum is defined for 2D kinds only")


def dpsq_dE(kind, params, u, pphi):
    if kind == EL2D or kind == HYP2D:
        a, e = params[0], params[1]
        D = 1.0 - e * e * u * u
        X = 1.0 - u * u
        return 2.0 * a * a * D / (e * e * X)
    if kind == PAR2D:
        p = params[0]
        return (p + 2.0 * u) / (4.0 * u)
    raise ValueError("radial momentum is defined for 2D kinds only")


def dpsq_dpphi(kind, params, u, E, pphi):
    if kind == EL2D or kind == HYP2D:
        a, e, cg2, cmono, clin, cg0, cg1 = params
        D = 1.0 - e * e * u * u
        X = 1.0 - u * u
        ome = 1.0 - e * e
        return (-2.0 * D * pphi / (ome * X) + 2.0 * cmono * u / X - cg1) / X
    if kind == PAR2D:
        p, g, B, Ef, c0, c1, c2 = params
        xi = u
        return (0.5 * B * (p + 2.0 * xi)
                - (2.0 * (pphi + g) / xi + c1 + 2.0 * c2 * pphi)) / (4.0 * xi)
    raise ValueError("radial momentum is defined for 2D kinds only")


# ---------------------------------------------------------------------------
# Chart domain
# ---------------------------------------------------------------------------

def domain_ok(kind, params, y, guard):
    if kind == EL2D:
        return abs(y[0]) <= 1.0 - guard
    if kind == HYP2D:
        return y[0] >= 1.0 + guard
    if kind == PAR2D:
        return y[0] >= guard
    if kind == EL3D:
        return y[0] >= 1.0 + guard and abs(y[1]) <= 1.0 - guard
    if kind == PAR3D:
        return y[0] >= guard and y[1] >= guard
    return False


def _rhs(kind, params, y, pphi, out):
    g = gradients(kind, params, y, pphi)
    if kind == EL2D or kind == HYP2D or kind == PAR2D:
        out[0] = g[1]
        out[1] = -g[0]
        out[2] = g[2]
    else:
        out[0] = g[2]
        out[1] = g[3]
        out[2] = -g[0]
        out[3] = -g[1]
        out[4] = g[4]


# ---------------------------------------------------------------------------
# Dormand-Prince 5(4) propagator
# ---------------------------------------------------------------------------

def _dense_eval(rcont, theta, dim, out):
    th1 = 1.0 - theta
    for i in range(dim):
        out[i] = rcont[0][i] + theta * (
            rcont[1][i] + th1 * (rcont[2][i] + theta * (rcont[3][i] + th1 * rcont[4][i]))
        )


def _finite(v):
    for x in v:
        if not math.isfinite(x):
            return False
    return True


def propagate(kind, params, pphi, y0, t0, t1, rtol, atol, max_step,
              sample_ts, collect_events, max_steps, event_cap):
    """Integrate Hamilton's equations from t0 to t1 (t1 > t0).

    sample_ts: ascending times in [t0, t1] at which dense-output samples are
    recorded.  Returns (samples, energies, n_emitted, events, status, stats)
    where samples is a flat list of states at the emitted times, events is a
    list of (t, state..., direction) for p_u sign changes (2D kinds), and
    stats = (naccept, nreject, nfev).
    """
    dim = 5 if kind in (EL3D, PAR3D) else 3
    guard = 1e-10
    span = t1 - t0
    hfloor = max(1e-14 * max(span, 1.0), 5e-15 * max(abs(t0), abs(t1)))

    y = list(y0)
    t = t0
    n_samp = len(sample_ts)
    samples = [0.0] * (n_samp * dim)
    energies = [0.0] * n_samp
    events = []
    j = 0

    if not domain_ok(kind, params, y, guard):
        return samples, energies, 0, events, STATUS_SINGULARITY, (0, 0, 0)

    # emit any samples at or before t0
    while j < n_samp and sample_ts[j] <= t0 + 1e-15 * max(1.0, abs(t0)):
        for i in range(dim):
            samples[j * dim + i] = y[i]
        energies[j] = hamiltonian(kind, params, y, pphi)
        j += 1

    k = [[0.0] * dim for _ in range(7)]
    work = [0.0] * dim
    ynew = [0.0] * dim
    yerr = [0.0] * dim
    dense = [0.0] * dim
    nfev = 0

    _rhs(kind, params, y, pphi, k[0])
    nfev += 1
    if not _finite(k[0]):
        return samples, energies, j, events, STATUS_SINGULARITY, (0, 0, nfev)

    # initial step size (Hairer-style heuristic)
    d0 = 0.0
    d1 = 0.0
    for i in range(dim):
        sc = atol + rtol * abs(y[i])
        d0 += (y[i] / sc) ** 2
        d1 += (k[0][i] / sc) ** 2
    d0 = math.sqrt(d0 / dim)
    d1 = math.sqrt(d1 / dim)
    h = 1e-6 if (d0 < 1e-5 or d1 < 1e-5) else 0.01 * d0 / d1
    h = min(h, span, max_step)

    naccept = 0
    nreject = 0
    nsteps = 0
    status = STATUS_OK
    just_rejected = False

    while t < t1 - 1e-14 * max(1.0, span):
        nsteps += 1
        if nsteps > max_steps:
            status = STATUS_MAX_STEPS
            break
        if h > max_step:
            h = max_step
        if t + h > t1:
            h = t1 - t
        if h < hfloor:
            status = STATUS_STEP_UNDERFLOW
            break

        bad = False
        for s in range(1, 7):
            for i in range(dim):
                acc = 0.0
                arow = _A[s]
                for m in range(s):
                    acc += arow[m] * k[m][i]
                work[i] = y[i] + h * acc
            if s == 6:
                for i in range(dim):
                    ynew[i] = work[i]
                if not _finite(ynew) or not domain_ok(kind, params, ynew, guard):
                    bad = True
                    break
            _rhs(kind, params, work, pphi, k[s])
            nfev += 1
            if not _finite(k[s]):
                bad = True
                break

        if bad:
            h *= 0.5
            just_rejected = True
            nreject += 1
            if h < hfloor:
                status = STATUS_SINGULARITY
                break
            continue

        # embedded error estimate
        err = 0.0
        for i in range(dim):
            eacc = 0.0
            for m in range(7):
                eacc += _E[m] * k[m][i]
            yerr[i] = h * eacc
            sc = atol + rtol * max(abs(y[i]), abs(ynew[i]))
            err += (yerr[i] / sc) ** 2
        err = math.sqrt(err / dim)

        if err > 1.0:
            fac = max(0.2, 0.9 * err ** _tb.ERROR_EXPONENT)
            h *= min(fac, 0.9)
            just_rejected = True
            nreject += 1
            continue

        # accepted: build dense output
        rcont = [[0.0] * dim for _ in range(5)]
        for i in range(dim):
            ydiff = ynew[i] - y[i]
            bspl = h * k[0][i] - ydiff
            rcont[0][i] = y[i]
            rcont[1][i] = ydiff
            rcont[2][i] = bspl
            rcont[3][i] = ydiff - h * k[6][i] - bspl
            dacc = 0.0
            for m in range(7):
                dacc += _D[m] * k[m][i]
            rcont[4][i] = h * dacc

        tnew = t + h

        # turning-point events: sign changes of p_u within the step (2D)
        if collect_events and dim == 3:
            p_a = y[1]
            _dense_eval(rcont, 0.5, dim, dense)
            p_m = dense[1]
            p_b = ynew[1]
            for (ta, pa, tb, pb) in ((0.0, p_a, 0.5, p_m), (0.5, p_m, 1.0, p_b)):
                if pa == 0.0 or pa * pb >= 0.0:
                    continue
                lo, hi = ta, tb
                sa = 1.0 if pa > 0.0 else -1.0
                for _ in range(80):
                    mid = 0.5 * (lo + hi)
                    _dense_eval(rcont, mid, dim, dense)
                    if (dense[1] > 0.0) == (sa > 0.0):
                        lo = mid
                    else:
                        hi = mid
                theta_e = 0.5 * (lo + hi)
                _dense_eval(rcont, theta_e, dim, dense)
                direction = -1 if pa > 0.0 else 1
                events.append((t + theta_e * h, dense[0], dense[1], dense[2], direction))
                if len(events) >= event_cap:
                    status = STATUS_EVENT_OVERFLOW
                    break
            if status == STATUS_EVENT_OVERFLOW:
                break

        # emit dense samples in (t, tnew]
        while j < n_samp and sample_ts[j] <= tnew + 1e-15 * max(1.0, abs(tnew)):
            theta = (sample_ts[j] - t) / h
            if theta < 0.0:
                theta = 0.0
            elif theta > 1.0:
                theta = 1.0
            _dense_eval(rcont, theta, dim, dense)
            for i in range(dim):
                samples[j * dim + i] = dense[i]
            energies[j] = hamiltonian(kind, params, dense, pphi)
            j += 1

        t = tnew
        for i in range(dim):
            y[i] = ynew[i]
            k[0][i] = k[6][i]
        naccept += 1

        if err == 0.0:
            fac = 5.0
        else:
            fac = min(5.0, max(0.2, 0.9 * err ** _tb.ERROR_EXPONENT))
        if just_rejected:
            fac = min(fac, 1.0)
            just_rejected = False
        h *= fac

    return samples, energies, j, events, status, (naccept, nreject, nfev)
