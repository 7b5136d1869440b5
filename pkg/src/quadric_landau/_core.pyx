# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled numerical kernels; mirrors ``_core_py`` exactly.

Same model encoding, state layout, tableau and stepping logic as the pure
Python module, with the whole propagation loop in C.  See ``_core_py`` for
the reference documentation.
"""

from libc.math cimport fabs, isfinite, sqrt, fmin, fmax

from . import _tableau as _tb

cdef enum:
    C_EL2D = 1
    C_HYP2D = 2
    C_PAR2D = 3
    C_EL3D = 4
    C_PAR3D = 5

EL2D = C_EL2D
HYP2D = C_HYP2D
PAR2D = C_PAR2D
EL3D = C_EL3D
PAR3D = C_PAR3D

STATUS_OK = 0
STATUS_SINGULARITY = 1
STATUS_STEP_UNDERFLOW = 2
STATUS_MAX_STEPS = 3
STATUS_EVENT_OVERFLOW = 4

DEF MAXDIM = 5

cdef double[7][6] A_TAB
cdef double[7] E_TAB
cdef double[7] D_TAB
cdef double ERR_EXP = -0.2

cdef int _i, _j
for _i in range(7):
    for _j in range(6):
        A_TAB[_i][_j] = 0.0
for _i in range(1, 7):
    row = _tb.A[_i]
    for _j in range(len(row)):
        A_TAB[_i][_j] = row[_j]
for _i in range(7):
    E_TAB[_i] = _tb.E[_i]
    D_TAB[_i] = _tb.D[_i]


# ---------------------------------------------------------------------------
# Hamiltonians / gradients / oracle (C level)
# ---------------------------------------------------------------------------

cdef double _ham(int kind, double* P, double* y, double pphi) noexcept nogil:
    cdef double a, e, D, X, ome, gam, braces, pre, s
    cdef double xi, eta, pxi, peta, delta, Xxi, Xeta, V, W, sm
    if kind == C_EL2D or kind == C_HYP2D:
        a = P[0]; e = P[1]
        D = 1.0 - e * e * y[0] * y[0]
        X = 1.0 - y[0] * y[0]
        ome = 1.0 - e * e
        gam = P[5] + P[6] * pphi
        braces = (X * y[1] * y[1] + D * pphi * pphi / (ome * X)
                  + (P[2] - 2.0 * pphi * P[3] * y[0]) / X + P[4] * y[0] + gam)
        return e * e / (2.0 * a * a * D) * braces
    if kind == C_PAR2D:
        pre = 1.0 / (P[0] + 2.0 * y[0])
        gam = P[4] + P[5] * pphi + P[6] * pphi * pphi
        s = pphi + P[1]
        braces = (4.0 * y[0] * y[1] * y[1] + s * s / y[0] + 3.0 * P[1] * P[2] * y[0]
                  - P[3] * y[0] * y[0] + 0.25 * P[2] * P[2] * y[0] * y[0] * y[0] + gam)
        return pre * braces - 0.5 * P[2] * pphi
    if kind == C_EL3D:
        a = P[0]
        xi = y[0]; eta = y[1]; pxi = y[2]; peta = y[3]
        delta = xi * xi - eta * eta
        Xxi = xi * xi - 1.0
        Xeta = 1.0 - eta * eta
        V = (P[1] * P[1] - 2.0 * pphi * P[2] * xi) / Xxi + 2.0 * a * P[3] * xi
        W = (P[2] * P[2] - 2.0 * pphi * P[1] * eta) / Xeta + 2.0 * a * P[4] * eta
        s = Xxi * pxi * pxi + Xeta * peta * peta + V + W
        return s / (2.0 * a * a * delta) + pphi * pphi / (2.0 * a * a * Xxi * Xeta)
    # PAR3D
    xi = y[0]; eta = y[1]; pxi = y[2]; peta = y[3]
    s = pphi + P[1]
    sm = pphi - P[1]
    V = s * s / xi + 3.0 * P[1] * P[2] * xi - P[3] * xi * xi \
        + 0.25 * P[2] * P[2] * xi * xi * xi + 2.0 * P[0]
    W = sm * sm / eta - 3.0 * P[1] * P[2] * eta + P[3] * eta * eta \
        + 0.25 * P[2] * P[2] * eta * eta * eta + 2.0 * P[0]
    return ((4.0 * xi * pxi * pxi + 4.0 * eta * peta * peta + V + W)
            / (2.0 * (xi + eta)) - 0.5 * P[2] * pphi)


cdef void _grad(int kind, double* P, double* y, double pphi, double* out) noexcept nogil:
    # out layout: 2D -> [dH_du, dH_dpu, dH_dpphi]; 3D -> [dH_dxi, dH_deta,
    # dH_dpxi, dH_dpeta, dH_dpphi]
    cdef double a, e, D, X, ome, gam, mono, braces, pref, dpref, dbraces, pre, s
    cdef double xi, eta, pxi, peta, delta, Xxi, Xeta, V, W, Vp, Wp, a2, sm, two_se
    if kind == C_EL2D or kind == C_HYP2D:
        a = P[0]; e = P[1]
        D = 1.0 - e * e * y[0] * y[0]
        X = 1.0 - y[0] * y[0]
        ome = 1.0 - e * e
        gam = P[5] + P[6] * pphi
        mono = P[2] - 2.0 * pphi * P[3] * y[0]
        braces = (X * y[1] * y[1] + D * pphi * pphi / (ome * X)
                  + mono / X + P[4] * y[0] + gam)
        pref = e * e / (2.0 * a * a * D)
        dpref = e * e * e * e * y[0] / (a * a * D * D)
        dbraces = (-2.0 * y[0] * y[1] * y[1]
                   + 2.0 * y[0] * pphi * pphi / (X * X)
                   + (-2.0 * pphi * P[3] * X + 2.0 * y[0] * mono) / (X * X)
                   + P[4])
        out[0] = dpref * braces + pref * dbraces
        out[1] = pref * 2.0 * X * y[1]
        out[2] = pref * (2.0 * D * pphi / (ome * X) - 2.0 * P[3] * y[0] / X + P[6])
        return
    if kind == C_PAR2D:
        pre = 1.0 / (P[0] + 2.0 * y[0])
        gam = P[4] + P[5] * pphi + P[6] * pphi * pphi
        s = pphi + P[1]
        braces = (4.0 * y[0] * y[1] * y[1] + s * s / y[0] + 3.0 * P[1] * P[2] * y[0]
                  - P[3] * y[0] * y[0] + 0.25 * P[2] * P[2] * y[0] * y[0] * y[0] + gam)
        out[0] = (-2.0 * pre * pre * braces
                  + pre * (4.0 * y[1] * y[1] - s * s / (y[0] * y[0])
                           + 3.0 * P[1] * P[2] - 2.0 * P[3] * y[0]
                           + 0.75 * P[2] * P[2] * y[0] * y[0]))
        out[1] = pre * 8.0 * y[0] * y[1]
        out[2] = pre * (2.0 * s / y[0] + P[5] + 2.0 * P[6] * pphi) - 0.5 * P[2]
        return
    if kind == C_EL3D:
        a = P[0]
        xi = y[0]; eta = y[1]; pxi = y[2]; peta = y[3]
        delta = xi * xi - eta * eta
        Xxi = xi * xi - 1.0
        Xeta = 1.0 - eta * eta
        V = (P[1] * P[1] - 2.0 * pphi * P[2] * xi) / Xxi + 2.0 * a * P[3] * xi
        W = (P[2] * P[2] - 2.0 * pphi * P[1] * eta) / Xeta + 2.0 * a * P[4] * eta
        s = Xxi * pxi * pxi + Xeta * peta * peta + V + W
        a2 = a * a
        Vp = ((-2.0 * pphi * P[2] * Xxi
               - (P[1] * P[1] - 2.0 * pphi * P[2] * xi) * 2.0 * xi) / (Xxi * Xxi)
              + 2.0 * a * P[3])
        Wp = ((-2.0 * pphi * P[1] * Xeta
               + (P[2] * P[2] - 2.0 * pphi * P[1] * eta) * 2.0 * eta) / (Xeta * Xeta)
              + 2.0 * a * P[4])
        out[0] = ((2.0 * xi * pxi * pxi + Vp) / (2.0 * a2 * delta)
                  - xi * s / (a2 * delta * delta)
                  - xi * pphi * pphi / (a2 * Xxi * Xxi * Xeta))
        out[1] = ((-2.0 * eta * peta * peta + Wp) / (2.0 * a2 * delta)
                  + eta * s / (a2 * delta * delta)
                  + eta * pphi * pphi / (a2 * Xxi * Xeta * Xeta))
        out[2] = Xxi * pxi / (a2 * delta)
        out[3] = Xeta * peta / (a2 * delta)
        out[4] = ((-2.0 * P[2] * xi / Xxi - 2.0 * P[1] * eta / Xeta)
                  / (2.0 * a2 * delta) + pphi / (a2 * Xxi * Xeta))
        return
    # PAR3D
    xi = y[0]; eta = y[1]; pxi = y[2]; peta = y[3]
    s = pphi + P[1]
    sm = pphi - P[1]
    V = s * s / xi + 3.0 * P[1] * P[2] * xi - P[3] * xi * xi \
        + 0.25 * P[2] * P[2] * xi * xi * xi + 2.0 * P[0]
    W = sm * sm / eta - 3.0 * P[1] * P[2] * eta + P[3] * eta * eta \
        + 0.25 * P[2] * P[2] * eta * eta * eta + 2.0 * P[0]
    braces = 4.0 * xi * pxi * pxi + 4.0 * eta * peta * peta + V + W
    two_se = 2.0 * (xi + eta)
    Vp = -s * s / (xi * xi) + 3.0 * P[1] * P[2] - 2.0 * P[3] * xi \
        + 0.75 * P[2] * P[2] * xi * xi
    Wp = -sm * sm / (eta * eta) - 3.0 * P[1] * P[2] + 2.0 * P[3] * eta \
        + 0.75 * P[2] * P[2] * eta * eta
    out[0] = (4.0 * pxi * pxi + Vp) / two_se - braces / (two_se * (xi + eta))
    out[1] = (4.0 * peta * peta + Wp) / two_se - braces / (two_se * (xi + eta))
    out[2] = 4.0 * xi * pxi / (xi + eta)
    out[3] = 4.0 * eta * peta / (xi + eta)
    out[4] = (2.0 * s / xi + 2.0 * sm / eta) / two_se - 0.5 * P[2]


cdef double _psq(int kind, double* P, double u, double E, double pphi) noexcept nogil:
    cdef double a, e, D, X, ome, gam, rest, s
    if kind == C_EL2D or kind == C_HYP2D:
        a = P[0]; e = P[1]
        D = 1.0 - e * e * u * u
        X = 1.0 - u * u
        ome = 1.0 - e * e
        gam = P[5] + P[6] * pphi
        rest = (D * pphi * pphi / (ome * X)
                + (P[2] - 2.0 * pphi * P[3] * u) / X + P[4] * u + gam)
        return (2.0 * a * a * D * E / (e * e) - rest) / X
    gam = P[4] + P[5] * pphi + P[6] * pphi * pphi
    s = pphi + P[1]
    rest = s * s / u + 3.0 * P[1] * P[2] * u - P[3] * u * u \
        + 0.25 * P[2] * P[2] * u * u * u + gam
    return ((P[0] + 2.0 * u) * (E + 0.5 * P[2] * pphi) - rest) / (4.0 * u)


cdef bint _domain_ok(int kind, double* P, double* y, double guard) noexcept nogil:
    if kind == C_EL2D:
        return fabs(y[0]) <= 1.0 - guard
    if kind == C_HYP2D:
        return y[0] >= 1.0 + guard
    if kind == C_PAR2D:
        return y[0] >= guard
    if kind == C_EL3D:
        return y[0] >= 1.0 + guard and fabs(y[1]) <= 1.0 - guard
    return y[0] >= guard and y[1] >= guard


cdef void _rhs(int kind, double* P, double* y, double pphi, double* out) noexcept nogil:
    cdef double g[5]
    _grad(kind, P, y, pphi, g)
    if kind == C_EL2D or kind == C_HYP2D or kind == C_PAR2D:
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
# Python-visible wrappers
# ---------------------------------------------------------------------------

cdef int _fill(double* dst, object src, int cap) except -1:
    cdef int n = len(src)
    if n > cap:
        raise ValueError("vector too long")
    cdef int i
    for i in range(n):
        dst[i] = src[i]
    return n


def hamiltonian(int kind, params, y, double pphi):
    cdef double P[8]
    cdef double Y[MAXDIM]
    _fill(P, params, 8)
    _fill(Y, y, MAXDIM)
    return _ham(kind, P, Y, pphi)


def gradients(int kind, params, y, double pphi):
    cdef double P[8]
    cdef double Y[MAXDIM]
    cdef double G[5]
    _fill(P, params, 8)
    _fill(Y, y, MAXDIM)
    _grad(kind, P, Y, pphi, G)
    if kind == C_EL2D or kind == C_HYP2D or kind == C_PAR2D:
        return (G[0], G[1], G[2])
    return (G[0], G[1], G[2], G[3], G[4])


def radial_psq(int kind, params, double u, double E, double pphi):
    cdef double P[8]
    if kind != C_EL2D and kind != C_HYP2D and kind != C_PAR2D:
        raise ValueError("radial momentum is defined for 2D kinds only")
    _fill(P, params, 8)
    return _psq(kind, P, u, E, pphi)


def dpsq_dE(int kind, params, double u, double pphi):
    cdef double a, e, D, X, p
    if kind == C_EL2D or kind == C_HYP2D:
        a = params[0]; e = params[1]
        D = 1.0 - e * e * u * u
        X = 1.0 - u * u
        return 2.0 * a * a * D / (e * e * X)
    if kind == C_PAR2D:
        p = params[0]
        return (p + 2.0 * u) / (4.0 * u)
    raise ValueError("radial momentum is defined for 2D kinds only")


def dpsq_dpphi(int kind, params, double u, double E, double pphi):
    cdef double a, e, D, X, ome, p, g, B, c1, c2
    if kind == C_EL2D or kind == C_HYP2D:
        a = params[0]; e = params[1]
        D = 1.0 - e * e * u * u
        X = 1.0 - u * u
        ome = 1.0 - e * e
        return (-2.0 * D * pphi / (ome * X)
                + 2.0 * params[3] * u / X - params[6]) / X
    if kind == C_PAR2D:
        p = params[0]; g = params[1]; B = params[2]
        c1 = params[5]; c2 = params[6]
        return (0.5 * B * (p + 2.0 * u)
                - (2.0 * (pphi + g) / u + c1 + 2.0 * c2 * pphi)) / (4.0 * u)
    raise ValueError("radial momentum is defined for 2D kinds only")


def domain_ok(int kind, params, y, double guard):
    cdef double P[8]
    cdef double Y[MAXDIM]
    _fill(P, params, 8)
    _fill(Y, y, MAXDIM)
    return bool(_domain_ok(kind, P, Y, guard))


# ---------------------------------------------------------------------------
# Dormand-Prince 5(4) propagator
# ---------------------------------------------------------------------------

cdef void _dense_eval(double rcont[5][MAXDIM], double theta, int dim, double* out) noexcept nogil:
    cdef double th1 = 1.0 - theta
    cdef int i
    for i in range(dim):
        out[i] = rcont[0][i] + theta * (
            rcont[1][i] + th1 * (rcont[2][i] + theta * (rcont[3][i] + th1 * rcont[4][i])))


cdef bint _vec_finite(double* v, int dim) noexcept nogil:
    cdef int i
    for i in range(dim):
        if not isfinite(v[i]):
            return False
    return True


def propagate(int kind, params, double pphi, y0, double t0, double t1,
              double rtol, double atol, double max_step,
              sample_ts, bint collect_events, long max_steps, long event_cap):
    """See ``_core_py.propagate``; identical contract and return layout."""
    cdef double P[8]
    _fill(P, params, 8)
    cdef int dim = 5 if (kind == C_EL3D or kind == C_PAR3D) else 3
    cdef double guard = 1e-10
    cdef double span = t1 - t0
    cdef double hfloor = fmax(1e-14 * fmax(span, 1.0),
                              5e-15 * fmax(fabs(t0), fabs(t1)))

    cdef double y[MAXDIM]
    cdef double ynew[MAXDIM]
    cdef double work[MAXDIM]
    cdef double dense[MAXDIM]
    cdef double k[7][MAXDIM]
    cdef double rcont[5][MAXDIM]
    cdef int i, mm, ss
    cdef double t = t0

    _fill(y, y0, MAXDIM)

    cdef int n_samp = len(sample_ts)
    cdef list ts_list = [float(x) for x in sample_ts]
    samples = [0.0] * (n_samp * dim)
    energies = [0.0] * n_samp
    events = []
    cdef int j = 0

    if not _domain_ok(kind, P, y, guard):
        return samples, energies, 0, events, STATUS_SINGULARITY, (0, 0, 0)

    while j < n_samp and ts_list[j] <= t0 + 1e-15 * fmax(1.0, fabs(t0)):
        for i in range(dim):
            samples[j * dim + i] = y[i]
        energies[j] = _ham(kind, P, y, pphi)
        j += 1

    cdef long nfev = 0
    _rhs(kind, P, y, pphi, k[0])
    nfev += 1
    if not _vec_finite(k[0], dim):
        return samples, energies, j, events, STATUS_SINGULARITY, (0, 0, nfev)

    cdef double d0 = 0.0, d1 = 0.0, sc
    for i in range(dim):
        sc = atol + rtol * fabs(y[i])
        d0 += (y[i] / sc) ** 2
        d1 += (k[0][i] / sc) ** 2
    d0 = sqrt(d0 / dim)
    d1 = sqrt(d1 / dim)
    cdef double h
    if d0 < 1e-5 or d1 < 1e-5:
        h = 1e-6
    else:
        h = 0.01 * d0 / d1
    h = fmin(fmin(h, span), max_step)

    cdef long naccept = 0, nreject = 0, nsteps = 0
    cdef int status = STATUS_OK
    cdef bint just_rejected = False
    cdef bint bad
    cdef double err, acc, eacc, tnew, fac, theta
    cdef double ydiff, bspl, dacc
    cdef double p_a, p_m, p_b, ta, tb, pa, pb, lo, hi, mid, sa, theta_e
    cdef int seg
    cdef int direction

    while t < t1 - 1e-14 * fmax(1.0, span):
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
        for ss in range(1, 7):
            for i in range(dim):
                acc = 0.0
                for mm in range(ss):
                    acc += A_TAB[ss][mm] * k[mm][i]
                work[i] = y[i] + h * acc
            if ss == 6:
                for i in range(dim):
                    ynew[i] = work[i]
                if not _vec_finite(ynew, dim) or not _domain_ok(kind, P, ynew, guard):
                    bad = True
                    break
            _rhs(kind, P, work, pphi, k[ss])
            nfev += 1
            if not _vec_finite(k[ss], dim):
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

        err = 0.0
        for i in range(dim):
            eacc = 0.0
            for mm in range(7):
                eacc += E_TAB[mm] * k[mm][i]
            sc = atol + rtol * fmax(fabs(y[i]), fabs(ynew[i]))
            err += (h * eacc / sc) ** 2
        err = sqrt(err / dim)

        if err > 1.0:
            fac = fmax(0.2, 0.9 * err ** ERR_EXP)
            h *= fmin(fac, 0.9)
            just_rejected = True
            nreject += 1
            continue

        for i in range(dim):
            ydiff = ynew[i] - y[i]
            bspl = h * k[0][i] - ydiff
            rcont[0][i] = y[i]
            rcont[1][i] = ydiff
            rcont[2][i] = bspl
            rcont[3][i] = ydiff - h * k[6][i] - bspl
            dacc = 0.0
            for mm in range(7):
                dacc += D_TAB[mm] * k[mm][i]
            rcont[4][i] = h * dacc

        tnew = t + h

        if collect_events and dim == 3:
            p_a = y[1]
            _dense_eval(rcont, 0.5, dim, dense)
            p_m = dense[1]
            p_b = ynew[1]
            for seg in range(2):
                if seg == 0:
                    ta = 0.0; pa = p_a; tb = 0.5; pb = p_m
                else:
                    ta = 0.5; pa = p_m; tb = 1.0; pb = p_b
                if pa == 0.0 or pa * pb >= 0.0:
                    continue
                lo = ta; hi = tb
                sa = 1.0 if pa > 0.0 else -1.0
                for mm in range(80):
                    mid = 0.5 * (lo + hi)
                    _dense_eval(rcont, mid, dim, dense)
                    if (dense[1] > 0.0) == (sa > 0.0):
                        lo = mid
                    else:
                        hi = mid
                theta_e = 0.5 * (lo + hi)
                _dense_eval(rcont, theta_e, dim, dense)
                direction = -1 if pa > 0.0 else 1
                events.append((t + theta_e * h, dense[0], dense[1], dense[2],
                               float(direction)))
                if len(events) >= event_cap:
                    status = STATUS_EVENT_OVERFLOW
                    break
            if status == STATUS_EVENT_OVERFLOW:
                break

        while j < n_samp and ts_list[j] <= tnew + 1e-15 * fmax(1.0, fabs(tnew)):
            theta = (ts_list[j] - t) / h
            if theta < 0.0:
                theta = 0.0
            elif theta > 1.0:
                theta = 1.0
            _dense_eval(rcont, theta, dim, dense)
            for i in range(dim):
                samples[j * dim + i] = dense[i]
            energies[j] = _ham(kind, P, dense, pphi)
            j += 1

        t = tnew
        for i in range(dim):
            y[i] = ynew[i]
            k[0][i] = k[6][i]
        naccept += 1

        if err == 0.0:
            fac = 5.0
        else:
            fac = fmin(5.0, fmax(0.2, 0.9 * err ** ERR_EXP))
        if just_rejected:
            fac = fmin(fac, 1.0)
            just_rejected = False
        h *= fac

    return samples, energies, j, events, status, (naccept, nreject, nfev)
