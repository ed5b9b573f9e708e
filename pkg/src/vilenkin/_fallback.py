"""Pure NumPy versions of the hot kernels.

Same call signatures as the compiled ``_kernels`` module; used when the
extension is not built or when ``VILENKIN_BACKEND=numpy`` is set.
"""
import numpy as np

# complex entries per temporary in prefix_max
_CHUNK_ELEMS = 1 << 22


def _radix2(a, inverse):
    return np.stack([a[:, :, 0] + a[:, :, 1], a[:, :, 0] - a[:, :, 1]], axis=2)


def _radix3(a, inverse):
    w = np.exp((2j if inverse else -2j) * np.pi / 3)
    w2 = w * w
    x0, x1, x2 = a[:, :, 0], a[:, :, 1], a[:, :, 2]
    return np.stack([x0 + x1 + x2, x0 + w * x1 + w2 * x2, x0 + w2 * x1 + w * x2],
                    axis=2)


def _radix4(a, inverse):
    x0, x1, x2, x3 = a[:, :, 0], a[:, :, 1], a[:, :, 2], a[:, :, 3]
    s02, d02 = x0 + x2, x0 - x2
    s13, d13 = x1 + x3, x1 - x3
    rot = 1j * d13 if inverse else -1j * d13
    return np.stack([s02 + s13, d02 + rot, s02 - s13, d02 - rot], axis=2)


_SPECIAL = {2: _radix2, 3: _radix3, 4: _radix4}


def stage_transform(data, radices, inverse):
    """Unnormalized per-digit DFT of every row of ``data`` (batch, M).

    Forward uses exp(-2 pi i d x / m); inverse uses the conjugate roots.
    """
    data = np.array(data, dtype=np.complex128, copy=True, order="C")
    batch, size = data.shape
    stride = 1
    for m in radices:
        m = int(m)
        view = data.reshape(batch * (size // (stride * m)), m, stride)
        view = np.moveaxis(view, 1, 2)
        kernel = _SPECIAL.get(m)
        if kernel is not None:
            out = kernel(view, inverse)
        else:
            k = np.arange(m)
            sign = 1j if inverse else -1j
            mat = np.exp(sign * 2 * np.pi * np.outer(k, k) / m)
            out = view @ mat.T
        data = np.ascontiguousarray(np.moveaxis(out, 2, 1)).reshape(batch, size)
        stride *= m
    return data


def phase_table(radices, rows, cols):
    """Integer phases sum_j a_j b_j (M / m_j) mod M for index arrays a, b."""
    size = int(np.prod(radices))
    rows = np.asarray(rows, dtype=np.int64)
    cols = np.asarray(cols, dtype=np.int64)
    out = np.zeros((rows.size, cols.size), dtype=np.int64)
    base = 1
    for m in radices:
        m = int(m)
        a = (rows // base) % m
        b = (cols // base) % m
        out = (out + np.outer(a, b * (size // m))) % size
        base *= m
    return out


def prefix_max(coeffs, radices, jflag, offset=None):
    """max over {j : jflag[j]} of |sum_{i<j} c_i xi_i(x) - offset(x)|, per row.

    ``jflag`` has length M+1 and ``jflag[j]`` selects the partial sum S_j.
    """
    coeffs = np.ascontiguousarray(coeffs, dtype=np.complex128)
    batch, size = coeffs.shape
    jflag = np.asarray(jflag, dtype=bool)
    js = np.flatnonzero(jflag)
    out = np.zeros((batch, size))
    if js.size == 0:
        return out
    jmax = int(js[-1])
    roots = np.exp(2j * np.pi * np.arange(size) / size)
    chars = roots[phase_table(radices, np.arange(jmax), np.arange(size))]
    rows = max(1, _CHUNK_ELEMS // max(1, jmax * size))
    for start in range(0, batch, rows):
        c = coeffs[start:start + rows, :jmax]
        partial = np.cumsum(c[:, :, None] * chars[None, :, :], axis=1)
        partial = partial[:, js - 1, :]
        if offset is not None:
            partial = partial - offset[start:start + rows, None, :]
        out[start:start + rows] = np.abs(partial).max(axis=1)
    return out
