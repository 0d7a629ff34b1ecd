"""Fixed-point binary encoding of non-negative reals into bit registers.

A value is stored as ``alpha * sum_b 2**b * q_b`` with ``b = 0..b_max``, least
significant bit first. A matrix entry ``(r, c)`` owns the register
``[(r*cols + c)*(b_max+1), (r*cols + c + 1)*(b_max+1))`` in the global
assignment vector, so distinct entries never share a bit.
"""

from dataclasses import dataclass

import numpy as np

from .errors import BoundsError, ConfigError, ShapeError


@dataclass(frozen=True)
class EncodingScheme:
    alpha: float = 0.001
    b_max: int = 9

    def __post_init__(self):
        if not (self.alpha > 0 and np.isfinite(self.alpha)):
            raise ConfigError(f"alpha must be positive, got {self.alpha}")
        if int(self.b_max) != self.b_max or self.b_max < 0:
            raise ConfigError(f"b_max must be a non-negative integer, got {self.b_max}")
        if self.b_max > 52:
            raise ConfigError("b_max above 52 cannot be represented exactly")

    @property
    def bits(self):
        return self.b_max + 1

    @property
    def max_code(self):
        return (1 << self.bits) - 1

    @property
    def max_value(self):
        return self.alpha * self.max_code

    def weights(self):
        """Bit weights ``alpha * 2**b`` for ``b = 0..b_max``."""
        return self.alpha * np.ldexp(1.0, np.arange(self.bits))


@dataclass(frozen=True)
class BitLayout:
    rows: int
    cols: int
    scheme: EncodingScheme

    @property
    def total_bits(self):
        return self.rows * self.cols * self.scheme.bits

    def register(self, r, c):
        """Slice of global bit indices owned by entry ``(r, c)``."""
        self._check_entry(r, c)
        start = (r * self.cols + c) * self.scheme.bits
        return slice(start, start + self.scheme.bits)

    def bit_index(self, r, c, b):
        self._check_entry(r, c)
        if not 0 <= b < self.scheme.bits:
            raise BoundsError(f"bit exponent {b} outside [0, {self.scheme.b_max}]")
        return (r * self.cols + c) * self.scheme.bits + b

    def locate(self, index):
        """Inverse of :meth:`bit_index`: global index -> ``(r, c, b)``."""
        if not 0 <= index < self.total_bits:
            raise BoundsError(f"bit {index} outside layout of {self.total_bits} bits")
        entry, b = divmod(index, self.scheme.bits)
        r, c = divmod(entry, self.cols)
        return r, c, b

    def _check_entry(self, r, c):
        if not (0 <= r < self.rows and 0 <= c < self.cols):
            raise BoundsError(f"entry ({r}, {c}) outside {self.rows}x{self.cols} layout")


def beta(layout, r, c, global_bit):
    """Weight of ``global_bit`` in the value of entry ``(r, c)``.

    ``alpha * 2**b`` when the bit belongs to the entry's register (``b`` being
    its offset inside the register), else 0.
    """
    reg = layout.register(r, c)
    if not 0 <= global_bit < layout.total_bits:
        raise BoundsError(f"bit {global_bit} outside layout of {layout.total_bits} bits")
    if reg.start <= global_bit < reg.stop:
        return layout.scheme.alpha * float(1 << (global_bit - reg.start))
    return 0.0


def quantize(scheme, v):
    """Register bits (LSB first) of ``v`` clamped to the representable range."""
    if not np.isfinite(v):
        raise ConfigError(f"cannot quantize non-finite value {v}")
    code = int(np.rint(min(max(float(v), 0.0), scheme.max_value) / scheme.alpha))
    code = min(code, scheme.max_code)
    return np.array([(code >> b) & 1 for b in range(scheme.bits)], dtype=np.uint8)


def quantize_grid(scheme, values):
    """Vectorised ``alpha * round(v / alpha)`` with the same clamping as :func:`quantize`."""
    v = np.clip(np.asarray(values, dtype=np.float64), 0.0, scheme.max_value)
    codes = np.minimum(np.rint(v / scheme.alpha), scheme.max_code)
    return codes * scheme.alpha


def decode_value(scheme, bits):
    bits = np.asarray(bits)
    if bits.shape != (scheme.bits,):
        raise ShapeError(f"expected {scheme.bits} bits, got shape {bits.shape}")
    return float(bits.astype(np.float64) @ scheme.weights())


def decode_matrix(layout, assignment):
    q = np.asarray(assignment)
    if q.shape != (layout.total_bits,):
        raise ShapeError(f"expected {layout.total_bits} bits, got shape {q.shape}")
    regs = q.astype(np.float64).reshape(layout.rows, layout.cols, layout.scheme.bits)
    return regs @ layout.scheme.weights()


def encode_matrix(layout, m):
    """Concatenate :func:`quantize` of every entry in row-major order."""
    m = np.asarray(m, dtype=np.float64)
    if m.shape != (layout.rows, layout.cols):
        raise ShapeError(f"expected shape {(layout.rows, layout.cols)}, got {m.shape}")
    return np.concatenate([quantize(layout.scheme, v) for v in m.ravel()]) if m.size else (
        np.zeros(0, dtype=np.uint8))
