"""Dense univariate polynomials and truncated power series.

Coefficient arrays are in ascending order (``c[0] + c[1] x + ...``), the numpy
``polynomial`` convention, and may hold exact (object) or complex entries.
"""

from __future__ import annotations

import numpy as np
from numpy.polynomial import polynomial as P

from .scalars import Backend, GaussianRational, infer_backend, max_abs


def _arr(c) -> np.ndarray:
    a = np.asarray(c)
    if a.dtype != object and not np.iscomplexobj(a):
        a = a.astype(np.complex128)
    return a.reshape(-1)


def backend_of(*arrays) -> Backend:
    return infer_backend(*arrays)


def trim(c, tol: float = 0.0) -> np.ndarray:
    """Drop vanishing top coefficients (exact zeros, or ``|c| <= tol``)."""
    c = _arr(c)
    n = len(c)
    while n > 1:
        v = c[n - 1]
        if isinstance(v, GaussianRational):
            if v:
                break
        elif abs(complex(v)) > tol:
            break
        n -= 1
    return c[:n]


def degree(c) -> int:
    return len(trim(c)) - 1


def mul(a, b) -> np.ndarray:
    return P.polymul(_arr(a), _arr(b))


def add(a, b) -> np.ndarray:
    return P.polyadd(_arr(a), _arr(b))


def sub(a, b) -> np.ndarray:
    return P.polysub(_arr(a), _arr(b))


def der(a) -> np.ndarray:
    a = _arr(a)
    if len(a) == 1:
        return a * 0
    return P.polyder(a)


def val(a, x):
    """Horner evaluation (keeps exact scalars exact)."""
    a = _arr(a)
    acc = a[-1]
    for c in a[-2::-1]:
        acc = acc * x + c
    return acc


def shift_x(a, k: int = 1) -> np.ndarray:
    """Multiply by ``x**k``."""
    a = _arr(a)
    return np.concatenate([a[:1] * 0 for _ in range(k)] + [a]) if k else a


def from_roots(roots, backend: Backend) -> np.ndarray:
    """Monic polynomial with the given roots."""
    out = backend.array([1])
    for r in roots:
        out = mul(out, backend.array([-backend.scalar(r), 1]))
    return out


def monic_from_tail(tail, backend: Backend) -> np.ndarray:
    """``x^d + tail[0] x^{d-1} + ... + tail[d-1]`` in ascending order."""
    tail = list(tail)
    return backend.array(list(reversed(tail)) + [1])


def tail_of_monic(c) -> list:
    """Inverse of :func:`monic_from_tail`."""
    c = _arr(c)
    return list(c[-2::-1])


def is_squarefree(c) -> bool:
    """Exact test ``gcd(c, c') = 1`` (exact coefficients only)."""
    from sympy import Poly, Symbol
    from sympy.polys.domains import QQ_I

    x = Symbol("x")
    f = Poly.from_list([QQ_I.convert(v) for v in trim(_arr(c))[::-1]], x, domain=QQ_I)
    return f.gcd(f.diff(x)).degree() <= 0


def roots(c) -> np.ndarray:
    """Numerical roots (complex), via numpy's companion matrix."""
    from .scalars import to_float_array

    c = trim(to_float_array(_arr(c)))
    if len(c) <= 1:
        return np.zeros(0, dtype=np.complex128)
    return np.roots(c[::-1])


def series_div(num, den, order: int) -> np.ndarray:
    """Power series coefficients ``q[0..order]`` of ``num(w)/den(w)``; ``den[0] != 0``."""
    num = _arr(num)
    den = _arr(den)
    zero = den[0] * 0
    q = []
    for k in range(order + 1):
        acc = num[k] if k < len(num) else zero
        for i in range(1, min(k, len(den) - 1) + 1):
            acc = acc - den[i] * q[k - i]
        q.append(acc / den[0])
    out = np.empty(order + 1, dtype=num.dtype if num.dtype == object else np.complex128)
    out[:] = q
    return out


def series_mul(a, b, order: int) -> np.ndarray:
    """Truncated Cauchy product of two series (index 0..order)."""
    return mul(a, b)[: order + 1]


def laurent_at_infinity(num, den, order: int) -> np.ndarray:
    """Coefficients ``c[j]`` of ``x^{-j}``, ``j = 0..order``, of ``num/den``.

    Requires ``deg num <= deg den``. Degrees are read off after trimming exact
    zeros, so float callers should pass correctly sized arrays.
    """
    num = trim(num)
    den = trim(den)
    d = len(den) - 1
    e = len(num) - 1
    if e > d:
        raise ValueError("numerator degree exceeds denominator degree")
    shift = d - e
    rev = series_div(num[::-1], den[::-1], max(order - shift, 0))
    out = np.empty(order + 1, dtype=rev.dtype)
    out[:] = num[0] * 0
    for j in range(shift, order + 1):
        out[j] = rev[j - shift]
    return out


def taylor_shift(a, p) -> np.ndarray:
    """Coefficients of ``a(x + p)``."""
    a = list(_arr(a))
    n = len(a)
    out = list(a)
    for i in range(n - 1):
        for k in range(n - 2, i - 1, -1):
            out[k] = out[k] + p * out[k + 1]
    res = np.empty(n, dtype=_arr(a).dtype)
    res[:] = out
    return res


def residual_norm(c) -> float:
    return max_abs(c)
