"""Hot numeric kernels.

Every kernel exists twice: a numba version (``*_nb``) and a pure-numpy
version (``*_np``).  The public names at the bottom of the module are bound
to one or the other according to :data:`gevrey_lab._accel.USE_NUMBA`.  Both
variants are importable directly so they can be cross-checked and
benchmarked against each other.

Parallel loops only ever run over *independent* outputs (one power ``k``,
one grid point ``x``); each output is reduced serially in ascending mode
order, so results do not depend on the thread count.
"""

from __future__ import annotations

import math

import numpy as np

from ._accel import USE_NUMBA, njit

try:
    from numba import prange
except ImportError:  # pragma: no cover
    prange = range

NEG_INF = -np.inf


# ---------------------------------------------------------------------------
# affine log-sum-exp:  out[j] = log sum_n exp(scale[j] * base[n] + offset[n])
# ---------------------------------------------------------------------------

@njit(parallel=True)
def lse_affine_nb(base, offset, scale):
    nb = base.shape[0]
    out = np.empty(scale.shape[0])
    for j in prange(scale.shape[0]):
        s = scale[j]
        m = -np.inf
        for n in range(nb):
            if offset[n] != -np.inf:
                v = s * base[n] + offset[n]
                if v > m:
                    m = v
        if m == -np.inf:
            out[j] = -np.inf
            continue
        acc = 0.0
        for n in range(nb):
            if offset[n] != -np.inf:
                acc += math.exp(s * base[n] + offset[n] - m)
        out[j] = m + math.log(acc)
    return out


def lse_affine_np(base, offset, scale):
    keep = offset != -np.inf
    base = base[keep]
    offset = offset[keep]
    out = np.full(len(scale), -np.inf)
    if base.size == 0:
        return out
    for j, s in enumerate(scale):
        v = s * base + offset
        m = v.max()
        out[j] = m + math.log(np.exp(v - m).sum())
    return out


# ---------------------------------------------------------------------------
# signed log-sum-exp of one sequence
# ---------------------------------------------------------------------------

@njit
def signed_lse_nb(sign, logmag):
    m = -np.inf
    for i in range(sign.shape[0]):
        if sign[i] != 0 and logmag[i] > m:
            m = logmag[i]
    if m == -np.inf:
        return 0, -np.inf, -np.inf
    pos = 0.0
    neg = 0.0
    for i in range(sign.shape[0]):
        if sign[i] > 0:
            pos += math.exp(logmag[i] - m)
        elif sign[i] < 0:
            neg += math.exp(logmag[i] - m)
    total = m + math.log(pos + neg)
    if pos == neg:
        return 0, -np.inf, total
    if pos > neg:
        return 1, m + math.log(pos - neg), total
    return -1, m + math.log(neg - pos), total


def signed_lse_np(sign, logmag):
    live = sign != 0
    if not live.any():
        return 0, -np.inf, -np.inf
    lm = logmag[live]
    sg = sign[live]
    m = lm.max()
    w = np.exp(lm - m)
    pos = float(w[sg > 0].sum())
    neg = float(w[sg < 0].sum())
    total = m + math.log(pos + neg)
    if pos == neg:
        return 0, -np.inf, total
    if pos > neg:
        return 1, m + math.log(pos - neg), total
    return -1, m + math.log(neg - pos), total


# ---------------------------------------------------------------------------
# sine-series derivative sums on a grid
#   d^p/dx^p sum_n a_n sin(w_n x) = sum_n a_n w_n^p trig_p(w_n x)
#   trig_p = sin, cos, -sin, -cos for p mod 4 = 0, 1, 2, 3
# with w_n = n pi / L and x = L * num / den, so the phase n num pi / den is
# reduced modulo 2 pi in integer arithmetic before any rounding
# ---------------------------------------------------------------------------

@njit(parallel=True)
def trig_sums_nb(coef_sign, coef_log, log_wave, index, x_num, x_den, ps):
    nm = coef_sign.shape[0]
    npp = ps.shape[0]
    nx = x_num.shape[0]
    out_sign = np.zeros((npp, nx), dtype=np.int8)
    out_log = np.full((npp, nx), -np.inf)
    out_tot = np.full((npp, nx), -np.inf)
    for ix in prange(nx):
        num = x_num[ix]
        den = x_den[ix]
        s_sign = np.empty(nm, dtype=np.int8)
        s_log = np.empty(nm)
        c_sign = np.empty(nm, dtype=np.int8)
        c_log = np.empty(nm)
        for n in range(nm):
            th = math.pi * ((index[n] * num) % (2 * den)) / den
            sv = math.sin(th)
            cv = math.cos(th)
            s_sign[n] = 1 if sv > 0 else (-1 if sv < 0 else 0)
            c_sign[n] = 1 if cv > 0 else (-1 if cv < 0 else 0)
            s_log[n] = math.log(abs(sv)) if sv != 0 else -np.inf
            c_log[n] = math.log(abs(cv)) if cv != 0 else -np.inf
        for ip in range(npp):
            p = ps[ip]
            r = p % 4
            flip = -1 if r >= 2 else 1
            m = -np.inf
            for n in range(nm):
                if coef_sign[n] == 0:
                    continue
                tl = s_log[n] if r % 2 == 0 else c_log[n]
                v = coef_log[n] + p * log_wave[n] + tl
                if v > m:
                    m = v
            if m == -np.inf:
                continue
            pos = 0.0
            neg = 0.0
            for n in range(nm):
                if coef_sign[n] == 0:
                    continue
                if r % 2 == 0:
                    ts = s_sign[n]
                    tl = s_log[n]
                else:
                    ts = c_sign[n]
                    tl = c_log[n]
                if ts == 0:
                    continue
                sg = coef_sign[n] * ts * flip
                w = math.exp(coef_log[n] + p * log_wave[n] + tl - m)
                if sg > 0:
                    pos += w
                else:
                    neg += w
            out_tot[ip, ix] = m + math.log(pos + neg)
            if pos > neg:
                out_sign[ip, ix] = 1
                out_log[ip, ix] = m + math.log(pos - neg)
            elif neg > pos:
                out_sign[ip, ix] = -1
                out_log[ip, ix] = m + math.log(neg - pos)
    return out_sign, out_log, out_tot


def trig_sums_np(coef_sign, coef_log, log_wave, index, x_num, x_den, ps):
    npp, nx = len(ps), len(x_num)
    out_sign = np.zeros((npp, nx), dtype=np.int8)
    out_log = np.full((npp, nx), -np.inf)
    out_tot = np.full((npp, nx), -np.inf)
    live = coef_sign != 0
    cs = coef_sign[live].astype(np.int64)
    cl = coef_log[live]
    lw = log_wave[live]
    idx = index[live].astype(np.int64)
    ps = np.asarray(ps, dtype=np.int64)
    plogw = ps[:, None] * lw[None, :] + cl[None, :]
    flip = np.where(ps % 4 >= 2, -1, 1)[:, None]
    odd = (ps % 2 == 1)[:, None]
    with np.errstate(divide="ignore"):
        for ix in range(nx):
            den = int(x_den[ix])
            th = math.pi * ((idx * int(x_num[ix])) % (2 * den)) / den
            sv, cv = np.sin(th), np.cos(th)
            trig = np.where(odd, cv[None, :], sv[None, :])
            tsg = np.sign(trig).astype(np.int64)
            v = plogw + np.log(np.abs(trig))
            m = v.max(axis=1) if v.shape[1] else np.full(npp, -np.inf)
            ok = np.isfinite(m)
            w = np.exp(v - np.where(ok, m, 0.0)[:, None])
            sg = cs[None, :] * tsg * flip
            pos = np.where(sg > 0, w, 0.0).sum(axis=1)
            neg = np.where(sg < 0, w, 0.0).sum(axis=1)
            for ip in np.flatnonzero(ok):
                out_tot[ip, ix] = m[ip] + math.log(pos[ip] + neg[ip])
                if pos[ip] > neg[ip]:
                    out_sign[ip, ix] = 1
                    out_log[ip, ix] = m[ip] + math.log(pos[ip] - neg[ip])
                elif neg[ip] > pos[ip]:
                    out_sign[ip, ix] = -1
                    out_log[ip, ix] = m[ip] + math.log(neg[ip] - pos[ip])
    return out_sign, out_log, out_tot


# ---------------------------------------------------------------------------
# classical RK4 on w'' + b w' + lam w = 0, one 2x2 system per mode
# ---------------------------------------------------------------------------

@njit(parallel=True)
def rk4_modes_nb(lam, b, u0, u1, t, steps):
    n = lam.shape[0]
    w_out = np.empty(n)
    v_out = np.empty(n)
    h = t / steps
    for i in prange(n):
        L = lam[i]
        B = b[i]
        w = u0[i]
        v = u1[i]
        for _ in range(steps):
            k1w = v
            k1v = -L * w - B * v
            w2 = w + 0.5 * h * k1w
            v2 = v + 0.5 * h * k1v
            k2w = v2
            k2v = -L * w2 - B * v2
            w3 = w + 0.5 * h * k2w
            v3 = v + 0.5 * h * k2v
            k3w = v3
            k3v = -L * w3 - B * v3
            w4 = w + h * k3w
            v4 = v + h * k3v
            k4w = v4
            k4v = -L * w4 - B * v4
            w = w + h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w)
            v = v + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
        w_out[i] = w
        v_out[i] = v
    return w_out, v_out


def rk4_modes_np(lam, b, u0, u1, t, steps):
    h = t / steps
    w = np.array(u0, dtype=float)
    v = np.array(u1, dtype=float)
    for _ in range(steps):
        k1w, k1v = v, -lam * w - b * v
        w2, v2 = w + 0.5 * h * k1w, v + 0.5 * h * k1v
        k2w, k2v = v2, -lam * w2 - b * v2
        w3, v3 = w + 0.5 * h * k2w, v + 0.5 * h * k2v
        k3w, k3v = v3, -lam * w3 - b * v3
        w4, v4 = w + h * k3w, v + h * k3v
        k4w, k4v = v4, -lam * w4 - b * v4
        w = w + h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w)
        v = v + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
    return w, v


if USE_NUMBA:
    lse_affine = lse_affine_nb
    signed_lse = signed_lse_nb
    trig_sums = trig_sums_nb
    rk4_modes = rk4_modes_nb
else:
    lse_affine = lse_affine_np
    signed_lse = signed_lse_np
    trig_sums = trig_sums_np
    rk4_modes = rk4_modes_np

BACKEND = "numba" if USE_NUMBA else "numpy"
