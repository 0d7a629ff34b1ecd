"""QUBO model with an absolute constant offset.

Energy of a bit vector ``q``::

    offset + sum_b linear[b] q_b + sum_{b<b'} quadratic[b, b'] q_b q_b'

Quadratic coefficients are kept in a dense strictly upper-triangular array;
the problems built here are small and nearly fully connected.
"""

import numpy as np

from .errors import BoundsError, ParseError, ShapeError

DROP_BELOW = 1e-15


class QuboModel:
    """Accumulating QUBO. Call :meth:`finalize` before handing it to a solver."""

    def __init__(self, num_vars, offset=0.0):
        if num_vars < 0:
            raise ShapeError("num_vars must be non-negative")
        self.num_vars = int(num_vars)
        self.offset = float(offset)
        self._linear = np.zeros(self.num_vars)
        self._upper = np.zeros((self.num_vars, self.num_vars))
        self._coupling = None

    @classmethod
    def from_dense(cls, quadratic, linear=None, offset=0.0):
        """Model whose energy is ``offset + linear @ q + q @ quadratic @ q``.

        ``quadratic`` may be any square matrix; its diagonal folds into the
        linear terms (``q_b**2 == q_b``) and ``Q[i, j] + Q[j, i]`` becomes the
        pair coefficient.
        """
        quadratic = np.asarray(quadratic, dtype=np.float64)
        n = quadratic.shape[0]
        if quadratic.shape != (n, n):
            raise ShapeError(f"quadratic must be square, got {quadratic.shape}")
        model = cls(n, offset)
        model._linear = np.diag(quadratic).copy()
        if linear is not None:
            linear = np.asarray(linear, dtype=np.float64)
            if linear.shape != (n,):
                raise ShapeError(f"linear must have shape ({n},), got {linear.shape}")
            model._linear += linear
        model._upper = np.triu(quadratic + quadratic.T, k=1)
        return model

    @property
    def finalized(self):
        return self._coupling is not None

    def _check_mutable(self):
        if self.finalized:
            raise RuntimeError("model is finalized and immutable")

    def _check_index(self, b):
        if not 0 <= b < self.num_vars:
            raise BoundsError(f"variable {b} outside [0, {self.num_vars})")

    def add_linear(self, b, value):
        self._check_mutable()
        self._check_index(b)
        self._linear[b] += value

    def add_quadratic(self, b, b2, value):
        self._check_mutable()
        self._check_index(b)
        self._check_index(b2)
        if b == b2:
            raise BoundsError(f"quadratic term needs two distinct variables, got ({b}, {b2})")
        if b2 < b:
            b, b2 = b2, b
        self._upper[b, b2] += value

    def add_quadratic_block(self, rows, cols, block):
        """Add ``block`` onto pairs ``(rows[i], cols[j])``; every row index must be below every column index."""
        self._check_mutable()
        rows = np.asarray(rows)
        cols = np.asarray(cols)
        if rows.size and cols.size:
            if rows.max() >= cols.min():
                raise BoundsError("block must lie strictly above the diagonal")
            self._check_index(int(rows.min()))
            self._check_index(int(cols.max()))
            self._upper[np.ix_(rows, cols)] += block

    def add_offset(self, value):
        self._check_mutable()
        self.offset += value

    def finalize(self):
        """Drop near-zero coefficients and freeze the arrays. Idempotent."""
        if self.finalized:
            return self
        self._linear[np.abs(self._linear) < DROP_BELOW] = 0.0
        self._upper[np.abs(self._upper) < DROP_BELOW] = 0.0
        self._coupling = self._upper + self._upper.T
        for a in (self._linear, self._upper, self._coupling):
            a.setflags(write=False)
        return self

    @property
    def linear(self):
        return self._linear

    @property
    def upper(self):
        """Strictly upper-triangular pair coefficients."""
        return self._upper

    @property
    def coupling(self):
        """Symmetric pair coefficients with zero diagonal (finalized models only)."""
        if self._coupling is None:
            return self._upper + self._upper.T
        return self._coupling

    @property
    def quadratic(self):
        """Non-zero pair coefficients as ``{(b, b'): value}`` with ``b < b'``."""
        rows, cols = np.nonzero(self._upper)
        return {(int(i), int(j)): float(self._upper[i, j]) for i, j in zip(rows, cols)}

    def linear_terms(self):
        return {int(i): float(self._linear[i]) for i in np.flatnonzero(self._linear)}

    def max_abs_coefficient(self):
        vals = np.concatenate([np.abs(self._linear), np.abs(self._upper).ravel()])
        return float(vals.max()) if vals.size else 0.0

    def min_abs_nonzero_coefficient(self):
        vals = np.concatenate([np.abs(self._linear), np.abs(self._upper).ravel()])
        vals = vals[vals > 0]
        return float(vals.min()) if vals.size else 0.0

    def _as_state(self, q):
        q = np.asarray(q)
        if q.shape != (self.num_vars,):
            raise ShapeError(f"assignment must have shape ({self.num_vars},), got {q.shape}")
        return q.astype(np.float64)

    def energy(self, q):
        x = self._as_state(q)
        return float(self.offset + self._linear @ x + x @ self._upper @ x)

    def flip_delta(self, q, b):
        """``energy(q with bit b flipped) - energy(q)``."""
        x = self._as_state(q)
        self._check_index(b)
        field = self._linear[b] + self.coupling[b] @ x
        return float((1.0 - 2.0 * x[b]) * field)

    def dense(self):
        """Upper-triangular matrix ``Psi`` with ``energy = q @ Psi @ q + offset``."""
        return self._upper + np.diag(self._linear)

    def to_text(self):
        lines = [f"{self.num_vars} {self.offset!r}"]
        for b, v in self.linear_terms().items():
            lines.append(f"{b} {b} {v!r}")
        for (b, b2), v in self.quadratic.items():
            lines.append(f"{b} {b2} {v!r}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text):
        lines = [(i, ln.strip()) for i, ln in enumerate(text.splitlines(), 1)]
        lines = [(i, ln) for i, ln in lines if ln and not ln.startswith("#")]
        if not lines:
            raise ParseError("empty QUBO file", 1)
        lineno, header = lines[0]
        try:
            n_str, off_str = header.split()
            model = cls(int(n_str), float(off_str))
        except ValueError as exc:
            raise ParseError(f"bad header {header!r}: expected 'num_vars offset'", lineno) from exc
        for lineno, ln in lines[1:]:
            try:
                a, b, v = ln.split()
                a, b, v = int(a), int(b), float(v)
            except ValueError as exc:
                raise ParseError(f"bad coefficient line {ln!r}", lineno) from exc
            try:
                if a == b:
                    model.add_linear(a, v)
                else:
                    model.add_quadratic(a, b, v)
            except BoundsError as exc:
                raise ParseError(str(exc), lineno) from exc
        return model.finalize()

    def save(self, path):
        with open(path, "w") as fh:
            fh.write(self.to_text())

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.from_text(fh.read())

    def __repr__(self):
        return (f"QuboModel(num_vars={self.num_vars}, linear={np.count_nonzero(self._linear)}, "
                f"quadratic={np.count_nonzero(self._upper)}, offset={self.offset:g})")
