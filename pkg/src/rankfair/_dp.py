"""JIT-compiled kernels for the merge-path dynamic program.

The lattice is (n_a + 1) x (n_b + 1) cells; only two rows of pair counts live
at a time and per-cell choices are packed two bits each, so memory stays at
one byte per four cells (a 3000 x 3000 run needs ~2.3 MB of backpointers).
"""

import numpy as np
from numba import njit

FROM_A = 1
FROM_B = 2


@njit(cache=True)
def _set_back(back, idx, value):
    back[idx >> 2] = np.uint8(back[idx >> 2] | (value << ((idx & 3) << 1)))


@njit(cache=True)
def _get_back(back, idx):
    return (back[idx >> 2] >> ((idx & 3) << 1)) & 3


@njit(cache=True, nogil=True)
def fill_float(la, lb, sna, snb, lam_k, u, v, w):
    """Fill the lattice maximizing c_ab + c_ba - lam_k * |c_ab/u - c_ba/v + w|.

    Ties select the from-b predecessor (only a strictly greater from-a value
    wins). Returns packed backpointers plus the final-cell counts.
    """
    na = la.size
    nb = lb.size
    ncells = (na + 1) * (nb + 1)
    back = np.zeros((ncells + 3) >> 2, dtype=np.uint8)
    prev_ab = np.zeros(nb + 1, dtype=np.int64)
    prev_ba = np.zeros(nb + 1, dtype=np.int64)
    cur_ab = np.zeros(nb + 1, dtype=np.int64)
    cur_ba = np.zeros(nb + 1, dtype=np.int64)
    for j in range(1, nb + 1):
        prev_ba[j] = prev_ba[j - 1] + lb[j - 1] * sna[0]
        _set_back(back, j, FROM_B)
    for i in range(1, na + 1):
        cur_ab[0] = prev_ab[0] + la[i - 1] * snb[0]
        cur_ba[0] = prev_ba[0]
        row = i * (nb + 1)
        _set_back(back, row, FROM_A)
        for j in range(1, nb + 1):
            a_ab = prev_ab[j] + la[i - 1] * snb[j]
            a_ba = prev_ba[j]
            b_ab = cur_ab[j - 1]
            b_ba = cur_ba[j - 1] + lb[j - 1] * sna[i]
            g_a = a_ab + a_ba - lam_k * abs(a_ab / u - a_ba / v + w)
            g_b = b_ab + b_ba - lam_k * abs(b_ab / u - b_ba / v + w)
            if g_a > g_b:
                cur_ab[j] = a_ab
                cur_ba[j] = a_ba
                _set_back(back, row + j, FROM_A)
            else:
                cur_ab[j] = b_ab
                cur_ba[j] = b_ba
                _set_back(back, row + j, FROM_B)
        prev_ab, cur_ab = cur_ab, prev_ab
        prev_ba, cur_ba = cur_ba, prev_ba
    return back, prev_ab[nb], prev_ba[nb]


@njit(cache=True, nogil=True)
def fill_int(la, lb, sna, snb, alpha, beta, gamma):
    """Disparity-only lattice fill minimizing |alpha*c_ab - beta*c_ba + gamma|.

    Pure 64-bit integer comparisons, so tie handling and the terminal bounds
    are bit-exact. Ties select the from-b predecessor, as in the float kernel.
    """
    na = la.size
    nb = lb.size
    ncells = (na + 1) * (nb + 1)
    back = np.zeros((ncells + 3) >> 2, dtype=np.uint8)
    prev_ab = np.zeros(nb + 1, dtype=np.int64)
    prev_ba = np.zeros(nb + 1, dtype=np.int64)
    cur_ab = np.zeros(nb + 1, dtype=np.int64)
    cur_ba = np.zeros(nb + 1, dtype=np.int64)
    for j in range(1, nb + 1):
        prev_ba[j] = prev_ba[j - 1] + lb[j - 1] * sna[0]
        _set_back(back, j, FROM_B)
    for i in range(1, na + 1):
        cur_ab[0] = prev_ab[0] + la[i - 1] * snb[0]
        cur_ba[0] = prev_ba[0]
        row = i * (nb + 1)
        _set_back(back, row, FROM_A)
        for j in range(1, nb + 1):
            a_ab = prev_ab[j] + la[i - 1] * snb[j]
            a_ba = prev_ba[j]
            b_ab = cur_ab[j - 1]
            b_ba = cur_ba[j - 1] + lb[j - 1] * sna[i]
            d_a = alpha * a_ab - beta * a_ba + gamma
            d_b = alpha * b_ab - beta * b_ba + gamma
            if abs(d_a) < abs(d_b):
                cur_ab[j] = a_ab
                cur_ba[j] = a_ba
                _set_back(back, row + j, FROM_A)
            else:
                cur_ab[j] = b_ab
                cur_ba[j] = b_ba
                _set_back(back, row + j, FROM_B)
        prev_ab, cur_ab = cur_ab, prev_ab
        prev_ba, cur_ba = cur_ba, prev_ba
    return back, prev_ab[nb], prev_ba[nb]


@njit(cache=True, nogil=True)
def walk_back(back, na, nb):
    """Recover the step sequence (0 = take a, 1 = take b) from packed backpointers."""
    steps = np.empty(na + nb, dtype=np.uint8)
    i = na
    j = nb
    t = na + nb
    while i > 0 or j > 0:
        t -= 1
        ptr = _get_back(back, i * (nb + 1) + j)
        if ptr == FROM_A:
            steps[t] = 0
            i -= 1
        else:
            steps[t] = 1
            j -= 1
    return steps
