# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled exhaustive defense search; same contract as ``_kernel_py``."""

from libc.stdlib cimport malloc, free


def best_subset(values, candidates, Py_ssize_t b, bint deterministic, order,
                Py_ssize_t a, probs, pre_mask, double tol):
    cdef Py_ssize_t n = len(values)
    cdef Py_ssize_t m = len(candidates)
    cdef Py_ssize_t n_order = len(order)
    cdef double *v = <double *> malloc(n * sizeof(double))
    cdef double *p = <double *> malloc(n * sizeof(double))
    cdef char *pre = <char *> malloc(n * sizeof(char))
    cdef char *defended = <char *> malloc(n * sizeof(char))
    cdef Py_ssize_t *cand = <Py_ssize_t *> malloc((m + 1) * sizeof(Py_ssize_t))
    cdef Py_ssize_t *ordr = <Py_ssize_t *> malloc((n_order + 1) * sizeof(Py_ssize_t))
    cdef Py_ssize_t *idx = <Py_ssize_t *> malloc((b + 1) * sizeof(Py_ssize_t))
    cdef Py_ssize_t *best = <Py_ssize_t *> malloc((b + 1) * sizeof(Py_ssize_t))
    cdef Py_ssize_t i, j, k, hit
    cdef long long count = 0
    cdef double total = 0.0, value, damage
    cdef double best_value = -1e308
    cdef bint found = False
    if not (v and p and pre and defended and cand and ordr and idx and best):
        free(v); free(p); free(pre); free(defended)
        free(cand); free(ordr); free(idx); free(best)
        raise MemoryError()
    try:
        for i in range(n):
            v[i] = values[i]
            p[i] = probs[i] if not deterministic else 0.0
            pre[i] = 1 if pre_mask[i] else 0
            defended[i] = 0
        # same summation order as the Python fallback
        for i in range(n):
            total += v[i]
        for i in range(m):
            cand[i] = candidates[i]
        for i in range(n_order):
            ordr[i] = order[i]
        if b > m:
            return [], float("-inf"), 0
        for j in range(b):
            idx[j] = j

        while True:
            for j in range(b):
                defended[cand[idx[j]]] = 1
            if deterministic:
                damage = 0.0
                hit = 0
                for k in range(n_order):
                    if hit == a:
                        break
                    i = ordr[k]
                    if not defended[i]:
                        damage += v[i]
                        hit += 1
                value = total - damage
            else:
                value = 0.0
                for i in range(n):
                    if defended[i] or pre[i]:
                        value += v[i]
                    else:
                        value += v[i] * (1.0 - p[i])
            for j in range(b):
                defended[cand[idx[j]]] = 0
            count += 1
            if not found or value > best_value + tol:
                found = True
                best_value = value
                for j in range(b):
                    best[j] = cand[idx[j]]

            # advance to the next combination in lexicographic order
            j = b - 1
            while j >= 0 and idx[j] == m - b + j:
                j -= 1
            if j < 0:
                break
            idx[j] += 1
            for k in range(j + 1, b):
                idx[k] = idx[k - 1] + 1

        return [best[j] for j in range(b)], best_value, count
    finally:
        free(v); free(p); free(pre); free(defended)
        free(cand); free(ordr); free(idx); free(best)
