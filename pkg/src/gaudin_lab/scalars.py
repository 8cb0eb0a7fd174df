"""Scalar backends.

Two interchangeable backends are used throughout the package:

* ``EXACT``: Gaussian rationals ``a + b*i`` (``sympy``'s ``QQ_I`` elements) held
  in numpy ``object`` arrays.
* ``FLOAT``: ``complex128`` numpy arrays.

Every quantity is stored in units of ``pi*sqrt(-1)``; the power of that unit is
carried separately as an integer tag so that no transcendental constant ever
enters an exact computation.

Note that ``QQ_I(3) == 3`` is ``False``; always go through :func:`is_zero` or
:func:`max_abs` when testing exact values.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Number

import numpy as np
from sympy.polys.domains import QQ_I
from sympy.polys.matrices import DomainMatrix

GaussianRational = type(QQ_I(0))


class SingularSystemError(ArithmeticError):
    """A linear system that should be uniquely solvable is not."""


def parse_scalar(text: str):
    """Parse ``"1/3"``, ``"0.4"``, ``"2-1/2i"``, ``"3j"`` ...

    Returns an exact value when every part is a fraction/integer literal and a
    Python ``complex`` when any part is a decimal.
    """
    s = text.strip().replace(" ", "")
    if not s:
        raise ValueError("empty scalar literal")
    if s[-1] in "ij":
        body = s[:-1]
        cut = 0
        for k in range(len(body) - 1, 0, -1):
            if body[k] in "+-" and body[k - 1] not in "eE":
                cut = k
                break
        re_s, im_s = (body[:cut], body[cut:]) if cut else ("0", body)
        if im_s in ("", "+", "-"):
            im_s += "1"
    else:
        re_s, im_s = s, "0"
    try:
        if any(c in p for p in (re_s, im_s) for c in ".eE"):
            return complex(float(re_s), float(im_s))
        return QQ_I(Fraction(re_s), Fraction(im_s))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"cannot parse scalar {text!r}") from exc


def is_exact_scalar(x) -> bool:
    return isinstance(x, (int, Fraction, GaussianRational, np.integer)) and not isinstance(x, bool)


def to_exact(x):
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, (int, np.integer)):
        return QQ_I(int(x))
    if isinstance(x, Fraction):
        return QQ_I.convert(x)
    if isinstance(x, str):
        v = parse_scalar(x)
        if isinstance(v, complex):
            raise ValueError(f"{x!r} is not an exact literal")
        return v
    if isinstance(x, (float, complex, np.floating, np.complexfloating)):
        c = complex(x)
        return QQ_I(Fraction(c.real), Fraction(c.imag))
    raise TypeError(f"cannot convert {type(x).__name__} to an exact scalar")


def to_complex(x) -> complex:
    if isinstance(x, GaussianRational):
        return complex(float(x.x), float(x.y))
    if isinstance(x, str):
        v = parse_scalar(x)
        return to_complex(v)
    return complex(x)


def real_part(x) -> Fraction | float:
    if isinstance(x, GaussianRational):
        return Fraction(int(x.x.numerator), int(x.x.denominator))
    return complex(x).real


def imag_part(x) -> Fraction | float:
    if isinstance(x, GaussianRational):
        return Fraction(int(x.y.numerator), int(x.y.denominator))
    return complex(x).imag


@dataclass(frozen=True)
class Backend:
    name: str

    @property
    def exact(self) -> bool:
        return self.name == "exact"

    @property
    def dtype(self):
        return object if self.exact else np.complex128

    def scalar(self, x):
        return to_exact(x) if self.exact else to_complex(x)

    def array(self, values) -> np.ndarray:
        arr = np.asarray(values, dtype=object)
        out = np.empty(arr.shape, dtype=self.dtype)
        flat = out.reshape(-1)
        for i, v in enumerate(arr.reshape(-1)):
            flat[i] = self.scalar(v)
        return out

    def zeros(self, shape) -> np.ndarray:
        if not self.exact:
            return np.zeros(shape, dtype=np.complex128)
        out = np.empty(shape, dtype=object)
        out.fill(QQ_I(0))
        return out

    def eye(self, n: int) -> np.ndarray:
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = self.scalar(1)
        return out

    def convert(self, arr: np.ndarray) -> np.ndarray:
        """Convert an array from either backend into this one."""
        return self.array(np.asarray(arr, dtype=object))


EXACT = Backend("exact")
FLOAT = Backend("float")


def get_backend(name) -> Backend:
    if isinstance(name, Backend):
        return name
    if name in ("exact", "rational"):
        return EXACT
    if name == "float":
        return FLOAT
    raise ValueError(f"unknown backend {name!r}")


def infer_backend(*values) -> Backend:
    """EXACT if every scalar (recursively) is an exact literal, FLOAT otherwise."""

    def walk(v):
        if isinstance(v, np.ndarray):
            if v.dtype != object:
                yield False
                return
            for item in v.reshape(-1):
                yield from walk(item)
        elif isinstance(v, (list, tuple)):
            for item in v:
                yield from walk(item)
        elif isinstance(v, str):
            yield not isinstance(parse_scalar(v), complex)
        elif isinstance(v, (Number, GaussianRational, np.number)):
            yield is_exact_scalar(v)

    return EXACT if all(walk(values)) else FLOAT


def is_zero(x, tol: float = 0.0) -> bool:
    if isinstance(x, GaussianRational):
        return not x
    return abs(complex(x)) <= tol


def abs_value(x) -> float:
    if isinstance(x, GaussianRational):
        return abs(complex(float(x.x), float(x.y)))
    return abs(complex(x))


def max_abs(arr) -> float:
    """Max-norm of an array (or scalar) in either backend, as a float.

    Exact zeros give exactly ``0.0``.
    """
    a = np.asarray(arr, dtype=object).reshape(-1)
    best = 0.0
    for v in a:
        if isinstance(v, GaussianRational):
            if v:
                best = max(best, abs_value(v))
        else:
            best = max(best, abs(complex(v)))
    return best


def all_zero(arr) -> bool:
    a = np.asarray(arr, dtype=object).reshape(-1)
    return not any(bool(v) for v in a)


def to_float_array(arr) -> np.ndarray:
    a = np.asarray(arr, dtype=object)
    out = np.empty(a.shape, dtype=np.complex128)
    flat = out.reshape(-1)
    for i, v in enumerate(a.reshape(-1)):
        flat[i] = to_complex(v)
    return out


def _domain_matrix(a: np.ndarray) -> DomainMatrix:
    rows = [[to_exact(v) for v in row] for row in a]
    return DomainMatrix(rows, a.shape, QQ_I)


def _from_domain(dm: DomainMatrix) -> np.ndarray:
    rows = dm.to_list()
    out = np.empty(dm.shape, dtype=object)
    for i, row in enumerate(rows):
        for j, v in enumerate(row):
            out[i, j] = v
    return out


def det(a: np.ndarray):
    if a.dtype == object:
        if a.shape[0] == 0:
            return QQ_I(1)
        return _domain_matrix(a).det()
    return np.linalg.det(a)


def inv(a: np.ndarray) -> np.ndarray:
    if a.dtype == object:
        if det(a) == QQ_I(0):
            raise SingularSystemError("matrix is singular")
        return _from_domain(_domain_matrix(a).inv())
    return np.linalg.inv(a)


def solve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve a square system ``a x = b``; ``b`` may be a vector or a matrix."""
    vec = b.ndim == 1
    if a.dtype == object or b.dtype == object:
        rhs = b.reshape(-1, 1) if vec else b
        a_dm = _domain_matrix(np.asarray(a, dtype=object))
        if a_dm.shape[0] and a_dm.det() == QQ_I(0):
            raise SingularSystemError("exact system is singular")
        x = _from_domain(a_dm.lu_solve(_domain_matrix(np.asarray(rhs, dtype=object))))
        return x.reshape(-1) if vec else x
    return np.linalg.solve(a, b)


def solve_consistent(a: np.ndarray, b: np.ndarray, rank_tol: float = 1e-10):
    """Solve a (possibly overdetermined) system known to be consistent.

    Returns ``(x, residual)``. Raises :class:`SingularSystemError` when ``a`` does
    not have full column rank, i.e. when the solution is not unique. In the
    exact backend an inconsistent system also raises.
    """
    rows, cols = a.shape
    if a.dtype == object or b.dtype == object:
        aug = np.concatenate([np.asarray(a, dtype=object), np.asarray(b, dtype=object).reshape(-1, 1)], axis=1)
        dm = _domain_matrix(aug)
        rref, pivots = dm.rref()
        if tuple(pivots) != tuple(range(cols)):
            if cols in pivots:
                raise SingularSystemError("exact system is inconsistent")
            raise SingularSystemError("exact system is rank deficient")
        r = _from_domain(rref)
        x = r[:cols, cols].copy()
        return x, 0.0
    sv = np.linalg.svd(a, compute_uv=False)
    if cols and (sv[-1] <= rank_tol * max(1.0, sv[0])):
        raise SingularSystemError(f"system is rank deficient (smallest singular value {sv[-1]:.3e})")
    x, *_ = np.linalg.lstsq(a, b, rcond=None)
    residual = float(np.max(np.abs(a @ x - b))) if rows else 0.0
    return x, residual


def rank(a: np.ndarray, tol: float = 1e-10) -> int:
    if a.dtype == object:
        return _domain_matrix(a).rank()
    if a.size == 0:
        return 0
    sv = np.linalg.svd(a, compute_uv=False)
    return int(np.sum(sv > tol * max(1.0, sv[0])))
