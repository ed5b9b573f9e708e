# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops: per-digit transform stages and prefix maxima."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, cos, sin, M_PI

cnp.import_array()

ctypedef double complex cplx


cdef void _dft_generic(cplx* buf, cplx* tmp, const cplx* tw, Py_ssize_t m) noexcept nogil:
    cdef Py_ssize_t k, d
    cdef cplx acc
    for k in range(m):
        acc = 0
        for d in range(m):
            acc = acc + buf[d] * tw[(d * k) % m]
        tmp[k] = acc
    for k in range(m):
        buf[k] = tmp[k]


def stage_transform(data, radices, bint inverse):
    """Unnormalized per-digit DFT of every row of ``data`` (batch, M)."""
    result = np.array(data, dtype=np.complex128, copy=True, order="C")
    cdef cplx[:, ::1] arr = result
    cdef cnp.int64_t[::1] rad = np.ascontiguousarray(radices, dtype=np.int64)
    cdef Py_ssize_t batch = arr.shape[0], size = arr.shape[1]
    cdef Py_ssize_t nstage = rad.shape[0]
    cdef Py_ssize_t stage, m, stride, span, b, o, blk, i, d, pos
    cdef double sgn = 1.0 if inverse else -1.0
    cdef cplx w3, w3b, x0, x1, x2, x3, s02, d02, s13, d13, rot
    cdef cplx* row
    cdef cplx[::1] tw
    cdef cplx[::1] buf
    cdef cplx[::1] tmp
    w3 = cos(2 * M_PI / 3) + 1j * sgn * sin(2 * M_PI / 3)
    w3b = w3 * w3
    stride = 1
    for stage in range(nstage):
        m = rad[stage]
        span = stride * m
        tw = np.exp(sgn * 2j * np.pi * np.arange(m) / m)
        buf = np.empty(m, dtype=np.complex128)
        tmp = np.empty(m, dtype=np.complex128)
        with nogil:
            for b in range(batch):
                row = &arr[b, 0]
                for blk in range(size // span):
                    o = blk * span
                    for i in range(stride):
                        pos = o + i
                        if m == 2:
                            x0 = row[pos]
                            x1 = row[pos + stride]
                            row[pos] = x0 + x1
                            row[pos + stride] = x0 - x1
                        elif m == 3:
                            x0 = row[pos]
                            x1 = row[pos + stride]
                            x2 = row[pos + 2 * stride]
                            row[pos] = x0 + x1 + x2
                            row[pos + stride] = x0 + w3 * x1 + w3b * x2
                            row[pos + 2 * stride] = x0 + w3b * x1 + w3 * x2
                        elif m == 4:
                            x0 = row[pos]
                            x1 = row[pos + stride]
                            x2 = row[pos + 2 * stride]
                            x3 = row[pos + 3 * stride]
                            s02 = x0 + x2
                            d02 = x0 - x2
                            s13 = x1 + x3
                            d13 = x1 - x3
                            rot = (1j * sgn) * d13
                            row[pos] = s02 + s13
                            row[pos + stride] = d02 + rot
                            row[pos + 2 * stride] = s02 - s13
                            row[pos + 3 * stride] = d02 - rot
                        else:
                            for d in range(m):
                                buf[d] = row[pos + d * stride]
                            _dft_generic(&buf[0], &tmp[0], &tw[0], m)
                            for d in range(m):
                                row[pos + d * stride] = buf[d]
        stride = span
    return result


def prefix_max(coeffs, radices, jflag, offset=None):
    """max over {j : jflag[j]} of |sum_{i<j} c_i xi_i(x) - offset(x)|, per row."""
    cdef const cplx[:, ::1] c = np.ascontiguousarray(coeffs, dtype=np.complex128)
    cdef Py_ssize_t batch = c.shape[0], size = c.shape[1]
    cdef cnp.int64_t[::1] rad = np.ascontiguousarray(radices, dtype=np.int64)
    cdef Py_ssize_t ndig = rad.shape[0]
    flag_arr = np.ascontiguousarray(jflag, dtype=np.uint8)
    cdef const unsigned char[::1] fl = flag_arr
    result = np.zeros((batch, size))
    cdef double[:, ::1] out = result
    js = np.flatnonzero(flag_arr)
    if js.size == 0:
        return result
    cdef Py_ssize_t jmax = int(js[js.size - 1])
    cdef bint use_off = offset is not None
    cdef const cplx[:, ::1] off
    if use_off:
        off = np.ascontiguousarray(offset, dtype=np.complex128)
    else:
        off = np.zeros((1, 1), dtype=np.complex128)
    cdef cplx[::1] roots = np.exp(2j * np.pi * np.arange(size) / size)
    cdef cnp.int64_t[::1] step = np.zeros(ndig, dtype=np.int64)
    cdef cnp.int64_t[::1] digits = np.zeros(ndig, dtype=np.int64)
    cdef cnp.int64_t[::1] kidx = np.zeros(jmax, dtype=np.int64)
    cdef Py_ssize_t x, b, i, j, rem, k
    cdef cplx acc, o, z
    cdef double best, v
    with nogil:
        for x in range(size):
            rem = x
            for j in range(ndig):
                step[j] = (rem % rad[j]) * (size // rad[j])
                rem = rem // rad[j]
                digits[j] = 0
            k = 0
            for i in range(jmax):
                kidx[i] = k
                j = 0
                while j < ndig:
                    k = k + step[j]
                    if k >= size:
                        k = k - size
                    digits[j] = digits[j] + 1
                    if digits[j] < rad[j]:
                        break
                    digits[j] = 0
                    j = j + 1
            for b in range(batch):
                acc = 0
                best = 0.0
                if use_off:
                    o = off[b, x]
                else:
                    o = 0
                for i in range(jmax):
                    acc = acc + c[b, i] * roots[kidx[i]]
                    if fl[i + 1]:
                        z = acc - o
                        v = z.real * z.real + z.imag * z.imag
                        if v > best:
                            best = v
                out[b, x] = sqrt(best)
    return result
