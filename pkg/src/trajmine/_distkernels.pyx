# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled distance kernels over flattened trajectory windows.

A matrix is an (n_frames, 2*K) C-contiguous float64 array whose row t
concatenates the role-ordered (x, y) pairs of frame t; windows are inclusive
[s, e] row ranges. Metric ids: 0 euclidean, 1 manhattan, 2 chebyshev.
"""

import numpy as np

from libc.math cimport INFINITY, fabs, sqrt

BACKEND_NAME = "cython"

EUCLIDEAN = 0
MANHATTAN = 1
CHEBYSHEV = 2


cdef inline double _row_dist(const double[:, ::1] a, Py_ssize_t ra,
                             const double[:, ::1] b, Py_ssize_t rb,
                             int metric) noexcept nogil:
    cdef Py_ssize_t j, d = a.shape[1]
    cdef double acc = 0.0
    cdef double diff
    if metric == 0:
        for j in range(d):
            diff = a[ra, j] - b[rb, j]
            acc += diff * diff
        return sqrt(acc)
    if metric == 1:
        for j in range(d):
            acc += fabs(a[ra, j] - b[rb, j])
        return acc
    for j in range(d):
        diff = fabs(a[ra, j] - b[rb, j])
        if diff > acc:
            acc = diff
    return acc


cdef double _directed(const double[:, ::1] a, Py_ssize_t s1, Py_ssize_t e1,
                      const double[:, ::1] b, Py_ssize_t s2, Py_ssize_t e2,
                      int metric) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef double worst = 0.0
    cdef double best, cur
    for i in range(s1, e1 + 1):
        best = INFINITY
        for j in range(s2, e2 + 1):
            cur = _row_dist(a, i, b, j, metric)
            if cur < best:
                best = cur
        if best > worst:
            worst = best
    return worst


cdef bint _directed_within(const double[:, ::1] a, Py_ssize_t s1, Py_ssize_t e1,
                           const double[:, ::1] b, Py_ssize_t s2, Py_ssize_t e2,
                           int metric, double eps) noexcept nogil:
    # h(a_window, b_window) <= eps iff every row of a has a row of b within eps
    cdef Py_ssize_t i, j
    cdef bint found
    for i in range(s1, e1 + 1):
        found = False
        for j in range(s2, e2 + 1):
            if _row_dist(a, i, b, j, metric) <= eps:
                found = True
                break
        if not found:
            return False
    return True


def window_distance(const double[:, ::1] a, Py_ssize_t s1, Py_ssize_t e1,
                    const double[:, ::1] b, Py_ssize_t s2, Py_ssize_t e2,
                    int metric):
    """Symmetric point-set Hausdorff distance between two frame windows."""
    cdef double d1, d2
    with nogil:
        d1 = _directed(a, s1, e1, b, s2, e2, metric)
        d2 = _directed(b, s2, e2, a, s1, e1, metric)
    return d1 if d1 >= d2 else d2


def window_within(const double[:, ::1] a, Py_ssize_t s1, Py_ssize_t e1,
                  const double[:, ::1] b, Py_ssize_t s2, Py_ssize_t e2,
                  int metric, double eps):
    cdef bint ok
    with nogil:
        ok = (_directed_within(a, s1, e1, b, s2, e2, metric, eps) and
              _directed_within(b, s2, e2, a, s1, e1, metric, eps))
    return bool(ok)


def filter_within(const double[:, ::1] a, Py_ssize_t s1, Py_ssize_t e1,
                  const double[:, ::1] b, const long long[::1] starts,
                  Py_ssize_t length, int metric, double eps):
    """Boolean mask: which candidate windows of ``b`` lie within eps of the anchor."""
    cdef Py_ssize_t n = starts.shape[0]
    out = np.zeros(n, dtype=np.uint8)
    cdef unsigned char[::1] ov = out
    cdef Py_ssize_t i, t
    with nogil:
        for i in range(n):
            t = <Py_ssize_t> starts[i]
            if (_directed_within(a, s1, e1, b, t, t + length - 1, metric, eps) and
                    _directed_within(b, t, t + length - 1, a, s1, e1, metric, eps)):
                ov[i] = 1
    return out.view(np.bool_)


cdef inline double _agent_dist(const double[:, ::1] a, Py_ssize_t s1,
                               const double[:, ::1] b, Py_ssize_t s2,
                               Py_ssize_t length, Py_ssize_t ka, Py_ssize_t kb,
                               int metric) noexcept nogil:
    # flat norm over the aligned coordinate sequences of one agent pair
    cdef Py_ssize_t t
    cdef Py_ssize_t ca = 2 * ka, cb = 2 * kb
    cdef double acc = 0.0
    cdef double dx, dy
    if metric == 0:
        for t in range(length):
            dx = a[s1 + t, ca] - b[s2 + t, cb]
            dy = a[s1 + t, ca + 1] - b[s2 + t, cb + 1]
            acc += dx * dx + dy * dy
        return sqrt(acc)
    if metric == 1:
        for t in range(length):
            acc += fabs(a[s1 + t, ca] - b[s2 + t, cb])
            acc += fabs(a[s1 + t, ca + 1] - b[s2 + t, cb + 1])
        return acc
    for t in range(length):
        dx = fabs(a[s1 + t, ca] - b[s2 + t, cb])
        dy = fabs(a[s1 + t, ca + 1] - b[s2 + t, cb + 1])
        if dx > acc:
            acc = dx
        if dy > acc:
            acc = dy
    return acc


cdef double _nested_directed(const double[:, ::1] a, Py_ssize_t s1,
                             const double[:, ::1] b, Py_ssize_t s2,
                             Py_ssize_t length, Py_ssize_t k, int metric) noexcept nogil:
    cdef Py_ssize_t ka, kb
    cdef double worst = 0.0
    cdef double best, cur
    for ka in range(k):
        best = INFINITY
        for kb in range(k):
            cur = _agent_dist(a, s1, b, s2, length, ka, kb, metric)
            if cur < best:
                best = cur
        if best > worst:
            worst = best
    return worst


cdef bint _nested_directed_within(const double[:, ::1] a, Py_ssize_t s1,
                                  const double[:, ::1] b, Py_ssize_t s2,
                                  Py_ssize_t length, Py_ssize_t k,
                                  int metric, double eps) noexcept nogil:
    cdef Py_ssize_t ka, kb
    cdef bint found
    for ka in range(k):
        found = False
        for kb in range(k):
            if _agent_dist(a, s1, b, s2, length, ka, kb, metric) <= eps:
                found = True
                break
        if not found:
            return False
    return True


def nested_window_distance(const double[:, ::1] a, Py_ssize_t s1, Py_ssize_t e1,
                           const double[:, ::1] b, Py_ssize_t s2, Py_ssize_t e2,
                           Py_ssize_t n_agents, int metric):
    """Agent-nested Hausdorff: outer max-min over flattened agent sequences."""
    if e1 - s1 != e2 - s2:
        raise ValueError("nested kernel requires equal window lengths")
    cdef Py_ssize_t length = e1 - s1 + 1
    cdef double d1, d2
    with nogil:
        d1 = _nested_directed(a, s1, b, s2, length, n_agents, metric)
        d2 = _nested_directed(b, s2, a, s1, length, n_agents, metric)
    return d1 if d1 >= d2 else d2


def nested_window_within(const double[:, ::1] a, Py_ssize_t s1, Py_ssize_t e1,
                         const double[:, ::1] b, Py_ssize_t s2, Py_ssize_t e2,
                         Py_ssize_t n_agents, int metric, double eps):
    if e1 - s1 != e2 - s2:
        raise ValueError("nested kernel requires equal window lengths")
    cdef Py_ssize_t length = e1 - s1 + 1
    cdef bint ok
    with nogil:
        ok = (_nested_directed_within(a, s1, b, s2, length, n_agents, metric, eps) and
              _nested_directed_within(b, s2, a, s1, length, n_agents, metric, eps))
    return bool(ok)


def nested_filter_within(const double[:, ::1] a, Py_ssize_t s1, Py_ssize_t e1,
                         const double[:, ::1] b, const long long[::1] starts,
                         Py_ssize_t length, Py_ssize_t n_agents,
                         int metric, double eps):
    if e1 - s1 + 1 != length:
        raise ValueError("nested kernel requires equal window lengths")
    cdef Py_ssize_t n = starts.shape[0]
    out = np.zeros(n, dtype=np.uint8)
    cdef unsigned char[::1] ov = out
    cdef Py_ssize_t i, t
    with nogil:
        for i in range(n):
            t = <Py_ssize_t> starts[i]
            if (_nested_directed_within(a, s1, b, t, length, n_agents, metric, eps) and
                    _nested_directed_within(b, t, a, s1, length, n_agents, metric, eps)):
                ov[i] = 1
    return out.view(np.bool_)
