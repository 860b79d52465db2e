"""Numba kernels for the bit-level hot loops (CRC, Gold, Viterbi, BCJR).

Everything here is sequential shift-register or trellis work that numpy
cannot vectorise across time; JIT keeps a full Monte-Carlo campaign
tractable on one core.
"""

from __future__ import annotations

import numpy as np
from numba import njit

NEG_INF = -1.0e30


@njit(cache=True)
def crc_remainder(bits, poly, width):
    """Remainder of bits * x^width modulo the generator (MSB-first, zero init).

    ``poly`` carries the generator without its top x^width term.
    """
    reg = 0
    mask = (1 << width) - 1
    for i in range(bits.shape[0]):
        fb = (reg >> (width - 1)) ^ bits[i]
        reg = (reg << 1) & mask
        if fb:
            reg ^= poly
    return reg


@njit(cache=True)
def gold_sequence_kernel(c_init, length):
    """Length-31 Gold sequence with the standard 1600-step fast-forward."""
    warmup = 1600
    x1 = 1
    x2 = c_init
    out = np.empty(length, np.uint8)
    for n in range(warmup + length):
        if n >= warmup:
            out[n - warmup] = (x1 ^ x2) & 1
        new1 = ((x1 >> 3) ^ x1) & 1
        new2 = ((x2 >> 3) ^ (x2 >> 2) ^ (x2 >> 1) ^ x2) & 1
        x1 = (x1 >> 1) | (new1 << 30)
        x2 = (x2 >> 1) | (new2 << 30)
    return out


@njit(cache=True)
def conv_encode_kernel(bits, polys):
    """Rate-1/3 tail-biting convolutional encoder, constraint length 7.

    The 6-bit register starts loaded with the last six input bits so the
    trellis ends where it starts; no termination bits are emitted.
    """
    n = bits.shape[0]
    out = np.empty(3 * n, np.uint8)
    state = 0
    for i in range(6):
        state |= bits[n - 1 - i] << (5 - i)
    for k in range(n):
        full = (np.int64(bits[k]) << 6) | state
        for j in range(3):
            v = full & polys[j]
            v ^= v >> 4
            v ^= v >> 2
            v ^= v >> 1
            out[3 * k + j] = v & 1
        state = (np.int64(bits[k]) << 5) | (state >> 1)
    return out


@njit(cache=True)
def viterbi_tailbiting_kernel(llr, next_state, out_sign):
    """Two-pass wrap-around Viterbi for the tail-biting rate-1/3 code.

    Path metrics start uniform, the trellis is run over the received
    block twice, and the traceback decision is taken from the second
    pass. LLR convention: positive favours bit 0.
    """
    k_len = llr.shape[0] // 3
    n_states = next_state.shape[0]
    steps = 2 * k_len
    pm = np.zeros(n_states)
    new_pm = np.empty(n_states)
    prev_state = np.empty((steps, n_states), np.int64)
    prev_bit = np.empty((steps, n_states), np.uint8)
    for t in range(steps):
        k = t % k_len
        l0 = llr[3 * k]
        l1 = llr[3 * k + 1]
        l2 = llr[3 * k + 2]
        for s in range(n_states):
            new_pm[s] = NEG_INF
        for s in range(n_states):
            m = pm[s]
            for b in range(2):
                metric = m + 0.5 * (
                    out_sign[s, b, 0] * l0 + out_sign[s, b, 1] * l1 + out_sign[s, b, 2] * l2
                )
                ns = next_state[s, b]
                if metric > new_pm[ns]:
                    new_pm[ns] = metric
                    prev_state[t, ns] = s
                    prev_bit[t, ns] = b
        mx = new_pm[0]
        for s in range(1, n_states):
            if new_pm[s] > mx:
                mx = new_pm[s]
        for s in range(n_states):
            pm[s] = new_pm[s] - mx
    best = 0
    for s in range(1, n_states):
        if pm[s] > pm[best]:
            best = s
    decisions = np.empty(steps, np.uint8)
    s = best
    for t in range(steps - 1, -1, -1):
        decisions[t] = prev_bit[t, s]
        s = prev_state[t, s]
    return decisions[k_len:]


@njit(cache=True)
def rsc_encode_kernel(bits):
    """One recursive systematic constituent encoder with trellis termination.

    Feedback taps at delays 2 and 3, parity taps at delays 0, 1 and 3.
    Returns (parity, tail_sys, tail_par); the systematic stream is the
    input itself.
    """
    n = bits.shape[0]
    par = np.empty(n, np.uint8)
    s1 = np.uint8(0)
    s2 = np.uint8(0)
    s3 = np.uint8(0)
    for k in range(n):
        a = bits[k] ^ s2 ^ s3
        par[k] = a ^ s1 ^ s3
        s3 = s2
        s2 = s1
        s1 = a
    tail_sys = np.empty(3, np.uint8)
    tail_par = np.empty(3, np.uint8)
    for j in range(3):
        tail_sys[j] = s2 ^ s3
        tail_par[j] = s1 ^ s3
        s3 = s2
        s2 = s1
        s1 = np.uint8(0)
    return par, tail_sys, tail_par


@njit(cache=True)
def rsc_bcjr_maxlog(sys_llr, par_llr, apriori, tail_sys, tail_par, nxt, par_bit):
    """Max-log forward-backward pass over one 8-state terminated trellis.

    Returns the a-posteriori LLR of every information bit. The three
    termination steps pin the backward recursion to state zero.
    """
    k_len = sys_llr.shape[0]
    ns_count = 8
    alpha = np.empty((k_len + 1, ns_count))
    alpha[0, 0] = 0.0
    for s in range(1, ns_count):
        alpha[0, s] = NEG_INF
    for k in range(k_len):
        ls = sys_llr[k] + apriori[k]
        lp = par_llr[k]
        for s in range(ns_count):
            alpha[k + 1, s] = NEG_INF
        for s in range(ns_count):
            a = alpha[k, s]
            for b in range(2):
                g = 0.5 * ((1.0 - 2.0 * b) * ls + (1.0 - 2.0 * par_bit[s, b]) * lp)
                ns = nxt[s, b]
                v = a + g
                if v > alpha[k + 1, ns]:
                    alpha[k + 1, ns] = v
        mx = alpha[k + 1, 0]
        for s in range(1, ns_count):
            if alpha[k + 1, s] > mx:
                mx = alpha[k + 1, s]
        for s in range(ns_count):
            alpha[k + 1, s] -= mx

    beta = np.empty(ns_count)
    beta_prev = np.empty(ns_count)
    for s in range(ns_count):
        beta[s] = NEG_INF
    beta[0] = 0.0
    for j in range(2, -1, -1):
        for s in range(ns_count):
            # termination input is forced: a drains to zero, so the
            # transmitted tail systematic/parity bits are state functions
            s1 = s >> 2
            s2 = (s >> 1) & 1
            s3 = s & 1
            sys_b = s2 ^ s3
            par_b = s1 ^ s3
            g = 0.5 * ((1.0 - 2.0 * sys_b) * tail_sys[j] + (1.0 - 2.0 * par_b) * tail_par[j])
            beta_prev[s] = g + beta[s >> 1]
        for s in range(ns_count):
            beta[s] = beta_prev[s]

    app = np.empty(k_len)
    tmp = np.empty(ns_count)
    for k in range(k_len - 1, -1, -1):
        ls = sys_llr[k] + apriori[k]
        lp = par_llr[k]
        m0 = NEG_INF
        m1 = NEG_INF
        for s in range(ns_count):
            g0 = 0.5 * (ls + (1.0 - 2.0 * par_bit[s, 0]) * lp)
            v0 = g0 + beta[nxt[s, 0]]
            g1 = 0.5 * (-ls + (1.0 - 2.0 * par_bit[s, 1]) * lp)
            v1 = g1 + beta[nxt[s, 1]]
            a = alpha[k, s]
            if a + v0 > m0:
                m0 = a + v0
            if a + v1 > m1:
                m1 = a + v1
            tmp[s] = v0 if v0 > v1 else v1
        mx = tmp[0]
        for s in range(1, ns_count):
            if tmp[s] > mx:
                mx = tmp[s]
        for s in range(ns_count):
            beta[s] = tmp[s] - mx
        app[k] = m0 - m1
    return app
