"""Finite trigonometric polynomials with exact derivatives.

Everything evaluated along orbits in this package is a finite sum

    f(x, t) = sum_j  c_j * trig_j(2*pi*(k_j . x + m_j * t)),    trig in {cos, sin},

with integer wave vectors ``k_j`` and integer time frequencies ``m_j``. The
class below keeps the terms in canonical form so that sums and products stay
in the family (product-to-sum identities) and so that gradients, time
derivatives, sup-norm coefficient bounds and Lipschitz bounds are all exact.
"""

from __future__ import annotations

import numpy as np

TWO_PI = 2.0 * np.pi

COS, SIN = 0, 1


class TrigPoly:
    """A trigonometric polynomial on R^dim x R_t, 1-periodic in every slot.

    Parameters
    ----------
    dim : int
        Number of spatial coordinates.
    coeffs, kvecs, tfreq, is_sin : array_like
        Per-term amplitude, integer wave vector (terms, dim), integer time
        frequency, and trig kind (0 = cos, 1 = sin). Terms are canonicalized
        (first nonzero of (k, m) made positive) and merged on construction.
    """

    __slots__ = ("dim", "coeffs", "kvecs", "tfreq", "is_sin")

    def __init__(self, dim, coeffs, kvecs, tfreq, is_sin):
        coeffs = np.atleast_1d(np.asarray(coeffs, dtype=float))
        kvecs = np.asarray(kvecs, dtype=np.int64).reshape(len(coeffs), dim)
        tfreq = np.atleast_1d(np.asarray(tfreq, dtype=np.int64))
        is_sin = np.atleast_1d(np.asarray(is_sin, dtype=np.int64))
        self.dim = int(dim)
        self.coeffs, self.kvecs, self.tfreq, self.is_sin = _canonicalize(
            coeffs, kvecs, tfreq, is_sin
        )
        for arr in (self.coeffs, self.kvecs, self.tfreq, self.is_sin):
            arr.flags.writeable = False

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, dim):
        return cls(dim, np.zeros(0), np.zeros((0, dim)), np.zeros(0), np.zeros(0))

    @classmethod
    def constant(cls, dim, value):
        return cls(dim, [value], np.zeros((1, dim)), [0], [COS])

    @classmethod
    def wave(cls, dim, coeff, kvec, tfreq=0, kind="cos"):
        """Single term coeff * cos/sin(2*pi*(k.x + m t))."""
        return cls(dim, [coeff], [kvec], [tfreq], [SIN if kind == "sin" else COS])

    # -- algebra -------------------------------------------------------------

    @property
    def n_terms(self):
        return len(self.coeffs)

    def __add__(self, other):
        if np.isscalar(other):
            other = TrigPoly.constant(self.dim, float(other))
        if other.dim != self.dim:
            raise ValueError("dimension mismatch in TrigPoly sum")
        return TrigPoly(
            self.dim,
            np.concatenate([self.coeffs, other.coeffs]),
            np.concatenate([self.kvecs, other.kvecs]),
            np.concatenate([self.tfreq, other.tfreq]),
            np.concatenate([self.is_sin, other.is_sin]),
        )

    __radd__ = __add__

    def __neg__(self):
        return self * (-1.0)

    def __sub__(self, other):
        return self + (-other if isinstance(other, TrigPoly) else -float(other))

    def __mul__(self, scalar):
        return TrigPoly(self.dim, self.coeffs * float(scalar), self.kvecs, self.tfreq, self.is_sin)

    __rmul__ = __mul__

    def product(self, other):
        """Pointwise product, expanded back into the family.

        Uses cos A cos B = (cos(A-B) + cos(A+B))/2 and its three siblings, so
        the result is again an exact trigonometric polynomial.
        """
        if other.dim != self.dim:
            raise ValueError("dimension mismatch in TrigPoly product")
        if self.n_terms == 0 or other.n_terms == 0:
            return TrigPoly.zero(self.dim)
        coeffs, kvecs, tfreq, is_sin = [], [], [], []
        for i in range(self.n_terms):
            ca, ka, ma, sa = self.coeffs[i], self.kvecs[i], self.tfreq[i], self.is_sin[i]
            for j in range(other.n_terms):
                cb, kb, mb, sb = other.coeffs[j], other.kvecs[j], other.tfreq[j], other.is_sin[j]
                half = 0.5 * ca * cb
                kp, km = ka + kb, ka - kb
                mp, mm = ma + mb, ma - mb
                if sa == COS and sb == COS:
                    pieces = [(half, km, mm, COS), (half, kp, mp, COS)]
                elif sa == SIN and sb == SIN:
                    pieces = [(half, km, mm, COS), (-half, kp, mp, COS)]
                elif sa == SIN and sb == COS:
                    pieces = [(half, kp, mp, SIN), (half, km, mm, SIN)]
                else:  # cos * sin
                    pieces = [(half, kp, mp, SIN), (-half, km, mm, SIN)]
                for c, k, m, s in pieces:
                    coeffs.append(c)
                    kvecs.append(k)
                    tfreq.append(m)
                    is_sin.append(s)
        return TrigPoly(self.dim, coeffs, kvecs, tfreq, is_sin)

    # -- calculus ------------------------------------------------------------

    def partial(self, j):
        """d/dx_j as a new TrigPoly (exact)."""
        # d/dx cos(2*pi*phi) = -2*pi*k_j sin(...);  d/dx sin = +2*pi*k_j cos(...)
        sign = np.where(self.is_sin == SIN, 1.0, -1.0)
        coeffs = self.coeffs * TWO_PI * self.kvecs[:, j] * sign
        return TrigPoly(self.dim, coeffs, self.kvecs, self.tfreq, 1 - self.is_sin)

    def dt_poly(self):
        """d/dt as a new TrigPoly (exact)."""
        sign = np.where(self.is_sin == SIN, 1.0, -1.0)
        coeffs = self.coeffs * TWO_PI * self.tfreq * sign
        return TrigPoly(self.dim, coeffs, self.kvecs, self.tfreq, 1 - self.is_sin)

    # -- evaluation ----------------------------------------------------------

    def _phases(self, X, t):
        X = np.asarray(X, dtype=float)
        ph = X @ (TWO_PI * self.kvecs.T.astype(float))
        if np.any(self.tfreq):
            ph = ph + (TWO_PI * self.tfreq.astype(float)) * np.asarray(t)[..., None]
        return ph

    def eval(self, X, t=0.0):
        """Evaluate at points X of shape (..., dim); returns shape (...)."""
        if self.n_terms == 0:
            return np.zeros(np.shape(X)[:-1])
        ph = self._phases(X, t)
        vals = np.where(self.is_sin == SIN, np.sin(ph), np.cos(ph))
        return vals @ self.coeffs

    def grad(self, X, t=0.0):
        """Gradient in x at points X of shape (..., dim); returns (..., dim)."""
        if self.n_terms == 0:
            return np.zeros(np.shape(X))
        ph = self._phases(X, t)
        dvals = np.where(self.is_sin == SIN, np.cos(ph), -np.sin(ph))
        w = (self.coeffs * TWO_PI)[:, None] * self.kvecs.astype(float)
        return dvals @ w

    def dt(self, X, t=0.0):
        if self.n_terms == 0:
            return np.zeros(np.shape(X)[:-1])
        ph = self._phases(X, t)
        dvals = np.where(self.is_sin == SIN, np.cos(ph), -np.sin(ph))
        return dvals @ (self.coeffs * TWO_PI * self.tfreq.astype(float))

    # -- bounds and structure --------------------------------------------------

    @property
    def is_time_dependent(self):
        return bool(np.any(self.tfreq != 0))

    def abs_coeff_sum(self):
        """sum |c_j|: an upper bound for the sup norm."""
        return float(np.abs(self.coeffs).sum())

    def grad_l1_bound(self):
        """2*pi*sum ||k_j||_1 |c_j|: bounds sum_i |df/dx_i| everywhere.

        Combined with a grid of mesh h this certifies the sup norm: the true
        sup exceeds the grid max by at most (h/2) * grad_l1_bound().
        """
        kl1 = np.abs(self.kvecs).sum(axis=1) + np.abs(self.tfreq)
        return float(TWO_PI * (kl1 * np.abs(self.coeffs)).sum())

    def active_dims(self):
        """Indices of coordinates the polynomial actually depends on."""
        if self.n_terms == 0:
            return np.zeros(0, dtype=int)
        return np.nonzero(np.any(self.kvecs != 0, axis=0))[0]

    def __repr__(self):
        return f"TrigPoly(dim={self.dim}, terms={self.n_terms})"


def _canonicalize(coeffs, kvecs, tfreq, is_sin):
    """Flip term orientations so (k, m) leads with a positive entry, merge duplicates."""
    n = len(coeffs)
    coeffs = coeffs.copy()
    kvecs = kvecs.copy()
    tfreq = tfreq.copy()
    is_sin = is_sin.copy()
    for i in range(n):
        key = np.concatenate([kvecs[i], [tfreq[i]]])
        nz = np.nonzero(key)[0]
        if len(nz) == 0:
            if is_sin[i] == SIN:
                coeffs[i] = 0.0  # sin(0) term
            continue
        if key[nz[0]] < 0:
            kvecs[i] = -kvecs[i]
            tfreq[i] = -tfreq[i]
            if is_sin[i] == SIN:  # sin(-x) = -sin(x), cos unchanged
                coeffs[i] = -coeffs[i]
    # merge identical (kvec, tfreq, kind) rows
    keys = np.concatenate([kvecs, tfreq[:, None], is_sin[:, None]], axis=1)
    if n:
        uniq, inv = np.unique(keys, axis=0, return_inverse=True)
        merged = np.zeros(len(uniq))
        np.add.at(merged, inv, coeffs)
        keep = merged != 0.0
        uniq, merged = uniq[keep], merged[keep]
        d = kvecs.shape[1]
        return merged, uniq[:, :d], uniq[:, d], uniq[:, d + 1]
    return coeffs, kvecs, tfreq, is_sin
