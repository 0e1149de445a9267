"""
Dense third-order tensor operations: matricization, folding, mode-n
products and the contracted unfoldings used by the multiplicative-update
solver.

Tensors are plain numpy arrays with ``ndim == 3`` and matrices are 2D
arrays. Data is stored in C order, i.e. the mode-1 index varies slowest.
Unfoldings follow the convention where the column index of the mode-n
unfolding runs over the remaining modes with the lower-numbered mode
varying fastest.

Kronecker products are never formed here; the contracted-unfolding route
replaces them.
"""

import numpy as np

from .errors import NumericalDomainError, ParseError

_MODES = (1, 2, 3)


def _check_mode(mode):
    if mode not in _MODES:
        raise ValueError(f"mode must be 1, 2 or 3, got {mode!r}")


def _as_tensor3(t):
    t = np.asarray(t, dtype=np.float64)
    if t.ndim != 3:
        raise ValueError(f"expected a third-order tensor, got ndim={t.ndim}")
    return t


def _as_matrix(m):
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2:
        raise ValueError(f"expected a matrix, got ndim={m.ndim}")
    return m


def matricize(t, mode):
    """
    Mode-`mode` unfolding of a third-order tensor.

    Parameters
    ----------
    t : ndarray, shape (J, K, L)
    mode : int
        Mode to unfold along, 1-based.

    Returns
    -------
    ndarray
        Matrix of shape ``(t.shape[mode-1], prod of other dims)``. Columns
        enumerate the remaining modes with the lower-numbered mode varying
        fastest.
    """
    _check_mode(mode)
    t = _as_tensor3(t)
    axis = mode - 1
    return np.reshape(np.moveaxis(t, axis, 0), (t.shape[axis], -1), order="F")


def fold(m, mode, dims):
    """
    Inverse of :func:`matricize`: refold a mode-`mode` unfolding into a
    tensor of shape `dims`.

    Parameters
    ----------
    m : ndarray
        Mode-`mode` unfolding, shape ``(dims[mode-1], prod of other dims)``.
    mode : int
    dims : tuple of int
        Target tensor shape (J, K, L).

    Returns
    -------
    ndarray, shape `dims`
    """
    _check_mode(mode)
    m = _as_matrix(m)
    dims = tuple(int(d) for d in dims)
    if len(dims) != 3 or any(d < 1 for d in dims):
        raise ValueError(f"dims must be three positive integers, got {dims}")
    axis = mode - 1
    other = [d for i, d in enumerate(dims) if i != axis]
    if m.shape != (dims[axis], other[0] * other[1]):
        raise ValueError(
            f"matrix shape {m.shape} does not match mode-{mode} unfolding "
            f"of dims {dims}"
        )
    t = np.reshape(m, (dims[axis], other[0], other[1]), order="F")
    return np.moveaxis(t, 0, axis)


def mode_product(t, m, mode):
    """
    Mode-`mode` product of a tensor with a matrix.

    Equivalent to refolding ``m @ matricize(t, mode)``; the output replaces
    ``t.shape[mode-1]`` with ``m.shape[0]``.
    """
    _check_mode(mode)
    t = _as_tensor3(t)
    m = _as_matrix(m)
    axis = mode - 1
    if m.shape[1] != t.shape[axis]:
        raise ValueError(
            f"inner dimension mismatch: matrix has {m.shape[1]} columns, "
            f"tensor mode {mode} has size {t.shape[axis]}"
        )
    out = np.tensordot(m, t, axes=([1], [axis]))
    return np.moveaxis(out, 0, axis)


def multiway_product(g, w, h, q):
    """
    Product of a core tensor with one matrix per mode,
    ``g x_1 w x_2 h x_3 q``, applying the mode products in increasing
    mode order.
    """
    g = _as_tensor3(g)
    for mat, mode in ((w, 1), (h, 2), (q, 3)):
        g = mode_product(g, mat, mode)
    return g


def contracted_unfolding(g, a, b, mode):
    """
    Mode-`mode` unfolding of `g` with the two other modes contracted by
    `a` and `b`.

    `a` acts on the lower-numbered and `b` on the higher-numbered of the
    two remaining modes. For mode 1 this computes
    ``matricize(g x_2 a x_3 b, 1)``, which equals the unfolded-times-
    Kronecker-transpose matrix without ever materializing the Kronecker
    product.
    """
    _check_mode(mode)
    others = [m for m in _MODES if m != mode]
    t = mode_product(g, a, others[0])
    t = mode_product(t, b, others[1])
    return matricize(t, mode)


def ew_power(x, p):
    """Elementwise power with the removable singularities taken out:
    ``p == 0`` yields ones without evaluating ``0**0``, ``p == 1`` is the
    identity."""
    x = np.asarray(x, dtype=np.float64)
    if p == 0:
        return np.ones_like(x)
    if p == 1:
        return x
    if p < 0 and np.any(x <= 0):
        raise NumericalDomainError(
            f"elementwise power {p} requires strictly positive input"
        )
    return x ** p


def safe_divide(a, b):
    """Elementwise division that raises instead of emitting inf/nan on a
    zero denominator."""
    b = np.asarray(b, dtype=np.float64)
    if np.any(b == 0):
        raise NumericalDomainError("zero entry in elementwise divisor")
    return np.asarray(a, dtype=np.float64) / b


def clamp_min(x, eps):
    """Elementwise maximum with `eps`; every output entry is >= eps."""
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    return np.maximum(np.asarray(x, dtype=np.float64), eps)


# ---------------------------------------------------------------------------
# File formats


def write_tensor(path, t):
    """Write a tensor in the NTD-T3 v1 text format: a header line
    ``ntd-t3 J K L`` followed by the entries in C order (mode-1 index
    slowest)."""
    t = _as_tensor3(t)
    j, k, l = t.shape
    with open(path, "w") as fh:
        fh.write(f"ntd-t3 {j} {k} {l}\n")
        flat = t.reshape(j * k, l)
        for row in flat:
            fh.write(" ".join(f"{v:.17g}" for v in row) + "\n")


def read_tensor(path):
    """Read an NTD-T3 v1 file. Rejects NaN, infinities and negatives."""
    with open(path) as fh:
        header = fh.readline()
        parts = header.split()
        if len(parts) != 4 or parts[0] != "ntd-t3":
            raise ParseError(f"{path}:1: expected header 'ntd-t3 J K L'")
        try:
            j, k, l = (int(p) for p in parts[1:])
        except ValueError:
            raise ParseError(f"{path}:1: non-integer dimensions in header") from None
        if min(j, k, l) < 1:
            raise ParseError(f"{path}:1: dimensions must be positive")
        try:
            data = np.array(fh.read().split(), dtype=np.float64)
        except ValueError:
            raise ParseError(f"{path}: malformed numeric data") from None
    if data.size != j * k * l:
        raise ParseError(
            f"{path}: expected {j * k * l} values, found {data.size}"
        )
    if not np.all(np.isfinite(data)):
        raise ParseError(f"{path}: non-finite values are not allowed")
    if np.any(data < 0):
        raise ParseError(f"{path}: negative values are not allowed")
    return data.reshape(j, k, l)


def write_matrix(path, m):
    """Write a matrix as ``ntd-mat rows cols`` plus one row per line."""
    m = _as_matrix(m)
    with open(path, "w") as fh:
        fh.write(f"ntd-mat {m.shape[0]} {m.shape[1]}\n")
        for row in m:
            fh.write(" ".join(f"{v:.17g}" for v in row) + "\n")


def read_matrix(path):
    """Read a matrix written by :func:`write_matrix`."""
    with open(path) as fh:
        header = fh.readline()
        parts = header.split()
        if len(parts) != 3 or parts[0] != "ntd-mat":
            raise ParseError(f"{path}:1: expected header 'ntd-mat rows cols'")
        try:
            rows, cols = int(parts[1]), int(parts[2])
        except ValueError:
            raise ParseError(f"{path}:1: non-integer dimensions in header") from None
        try:
            data = np.array(fh.read().split(), dtype=np.float64)
        except ValueError:
            raise ParseError(f"{path}: malformed numeric data") from None
    if data.size != rows * cols:
        raise ParseError(f"{path}: expected {rows * cols} values, found {data.size}")
    if not np.all(np.isfinite(data)):
        raise ParseError(f"{path}: non-finite values are not allowed")
    return data.reshape(rows, cols)
