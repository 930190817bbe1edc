"""
Filename: td_kernels.py
Project: TD Clock Stability (TDCS)
Description: Compiled inner loops of the tabular TD simulator and of the expected-update recursion
Author: arnabadhikari93@gmail.com
Date Created: 2026-10-19
Last Modified: 2026-10-19
Version: 1.0.0

Copyright (c) 2024-2026 Arnab Adhikari. All rights reserved.
"""

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def draw_index(cdf_row, u):
    """first k with u < cdf_row[k], the last index when round-off leaves u above the final entry"""
    last = cdf_row.shape[0] - 1
    for k in range(last):
        if u < cdf_row[k]:
            return k
    return last


@njit(cache=True, nogil=True)
def clip_value(x, cap):
    if x != x:
        return cap, True
    if x > cap:
        return cap, True
    if x < -cap:
        return -cap, True
    return x, False


@njit(cache=True, nogil=True)
def td_segment(
    v,
    visits,
    J,
    s,
    t,
    diverged,
    uniforms,
    offset,
    n_steps,
    mu_cdf,
    trans_cdf,
    reward,
    rho,
    differential,
    eta,
    gamma,
    local_clock,
    c,
    n0,
    beta,
    cap,
):
    """
    Runs n_steps transitions in place on v and visits, reading two uniforms per step from
    uniforms[offset:]: the first picks the action, the second the next state.
    Returns the updated (J, s, t, diverged).
    """
    for i in range(n_steps):
        a = draw_index(mu_cdf[s], uniforms[offset + 2 * i])
        s_next = draw_index(trans_cdf[s, a], uniforms[offset + 2 * i + 1])

        if local_clock:
            n = visits[s] + 1
        else:
            n = t + 1
        step = c / (n0 + n) ** beta

        if differential:
            delta = reward[s, a] - J + v[s_next] - v[s]
        else:
            delta = reward[s, a] + gamma * v[s_next] - v[s]
        increment = step * rho[s, a] * delta
        v[s] = v[s] + increment
        if differential:
            J = J + eta * increment

        value, hit = clip_value(v[s], cap)
        v[s] = value
        diverged = diverged or hit
        J, hit = clip_value(J, cap)
        diverged = diverged or hit

        visits[s] += 1
        t += 1
        s = s_next
    return J, s, t, diverged


@njit(cache=True, nogil=True)
def expected_segment(v, J, K, d, k_row, d_sum, b, b_sum, differential, eta, t, n_steps, c, n0, beta, cap):
    """
    Mean recursion with global-clock steps:
        v <- v - alpha_t (K v + J d - b)
        J <- J - alpha_t eta (k_row . v + d_sum J - b_sum)     (differential only)
    Returns the updated (J, t, diverged); v is updated in place.
    """
    n = v.shape[0]
    Kv = np.empty(n)
    diverged = False
    for _ in range(n_steps):
        step = c / (n0 + t + 1) ** beta
        kv = 0.0
        for i in range(n):
            acc = 0.0
            for j in range(n):
                acc += K[i, j] * v[j]
            Kv[i] = acc
            kv += k_row[i] * v[i]
        for i in range(n):
            if differential:
                v[i] = v[i] - step * (Kv[i] + J * d[i] - b[i])
            else:
                v[i] = v[i] - step * (Kv[i] - b[i])
            value, hit = clip_value(v[i], cap)
            v[i] = value
            diverged = diverged or hit
        if differential:
            J = J - step * eta * (kv + d_sum * J - b_sum)
            J, hit = clip_value(J, cap)
            diverged = diverged or hit
        t += 1
    return J, t, diverged

