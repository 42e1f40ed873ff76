# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled brute-force kernels; same contracts as ``_pykernels``."""

import numpy as np
cimport numpy as cnp

cnp.import_array()

cdef enum:
    NO_ALPHA = -1
    BROKEN = -2


cdef inline bint _scan(const short[:] seq, Py_ssize_t n, long *m, long *k) nogil:
    # returns False on a forbidden factor; m, k carry the automaton state
    cdef Py_ssize_t i
    cdef short s
    for i in range(n):
        s = seq[i]
        if s >= 2:
            if m[0] >= 0 and m[0] != k[0]:
                return False
            m[0] = 0
            k[0] = 0
        elif m[0] >= 0:
            if s == 1:
                if k[0] == 0:
                    m[0] += 1
                else:
                    m[0] = BROKEN
                    k[0] = 0
            else:
                k[0] += 1
    return True


def step(long m, long k, int s):
    if s >= 2:
        if m >= 0 and m != k:
            return None
        return 0, 0
    if m < 0:
        return m, k
    if s == 1:
        if k == 0:
            return m + 1, 0
        return <long>BROKEN, 0
    return m, k + 1


def run(seq, long m=NO_ALPHA, long k=0):
    cdef short[:] arr = np.asarray(seq, dtype=np.int16)
    if not _scan(arr, arr.shape[0], &m, &k):
        return None
    return m, k


def is_admissible(seq):
    return run(seq) is not None


cdef bint _next(short[:] buf, Py_ssize_t n, short base) nogil:
    # odometer increment; False once every string has been visited
    cdef Py_ssize_t i = n - 1
    while i >= 0:
        buf[i] += 1
        if buf[i] < base:
            return True
        buf[i] = 0
        i -= 1
    return False


def count_brute(int n_alphas, int length):
    cdef short base = n_alphas + 2
    cdef short[:] buf = np.zeros(length, dtype=np.int16)
    cdef long long total = 0
    cdef long m, k
    with nogil:
        while True:
            m = NO_ALPHA
            k = 0
            if _scan(buf, length, &m, &k):
                total += 1
            if not _next(buf, length, base):
                break
    return int(total)


def admissible_words(int n_alphas, int length):
    cdef short base = n_alphas + 2
    cdef Py_ssize_t total = count_brute(n_alphas, length)
    out_arr = np.zeros((total, length), dtype=np.int16)
    cdef short[:, :] out = out_arr
    cdef short[:] buf = np.zeros(length, dtype=np.int16)
    cdef Py_ssize_t row = 0, i
    cdef long m, k
    if total == 0:
        return out_arr
    with nogil:
        while True:
            m = NO_ALPHA
            k = 0
            if _scan(buf, length, &m, &k):
                for i in range(length):
                    out[row, i] = buf[i]
                row += 1
            if not _next(buf, length, base):
                break
    return out_arr


def follower_masks(words, mus):
    cdef short[:, :] w = np.ascontiguousarray(words, dtype=np.int16)
    cdef short[:, :] u = np.ascontiguousarray(mus, dtype=np.int16)
    cdef Py_ssize_t nw = w.shape[0], nu = u.shape[0]
    cdef Py_ssize_t lw = w.shape[1], lu = u.shape[1]
    out_arr = np.zeros((nw, nu), dtype=np.uint8)
    cdef unsigned char[:, :] out = out_arr
    cdef Py_ssize_t i, j
    cdef long m, k
    with nogil:
        for i in range(nw):
            for j in range(nu):
                # literal scan of the concatenation mu + w
                m = NO_ALPHA
                k = 0
                if _scan(u[j], lu, &m, &k) and _scan(w[i], lw, &m, &k):
                    out[i, j] = 1
    return out_arr.astype(bool)
