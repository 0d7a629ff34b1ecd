"""Qubit-cost model for embedding fully connected QUBOs on a Chimera lattice.

Costs follow the triangle clique embedding, where each logical variable becomes
a chain of ``ceil(L / shore) + 1`` physical qubits. No embedding search is run.
"""

import math
from dataclasses import dataclass

from .errors import ConfigError


@dataclass(frozen=True)
class ChimeraSpec:
    grid_rows: int = 16
    grid_cols: int = 16
    shore: int = 4

    def __post_init__(self):
        if min(self.grid_rows, self.grid_cols, self.shore) < 1:
            raise ConfigError("Chimera dimensions must be positive")

    @classmethod
    def parse(cls, text):
        """``"16x16x4"`` -> ``ChimeraSpec(16, 16, 4)``; a missing shore defaults to 4."""
        try:
            parts = [int(p) for p in text.lower().split("x")]
        except ValueError as exc:
            raise ConfigError(f"bad grid {text!r}, expected ROWSxCOLS[xSHORE]") from exc
        if len(parts) == 2:
            parts.append(4)
        if len(parts) != 3:
            raise ConfigError(f"bad grid {text!r}, expected ROWSxCOLS[xSHORE]")
        return cls(*parts)

    @property
    def num_qubits(self):
        return self.grid_rows * self.grid_cols * 2 * self.shore

    @property
    def clique_bound(self):
        """Largest complete graph the clique embedding can host."""
        return self.shore * min(self.grid_rows, self.grid_cols) + 1


def clique_chain_length(num_logical, spec):
    """Chain length of the triangle construction, an upper bound."""
    if num_logical < 1:
        raise ConfigError("num_logical must be >= 1")
    return math.ceil(num_logical / spec.shore) + 1


def boundary_optimized_chain_length(num_logical, spec):
    """Chain length when the last partial block is folded into the boundary cells.

    Matches the standard K_{4m+1} construction (chains of ``m + 1``, so 17 for
    K_65 on a 16x16 lattice) and gives 1 for a lone variable. Reported only, not
    used for feasibility.
    """
    if num_logical < 1:
        raise ConfigError("num_logical must be >= 1")
    if num_logical == 1:
        return 1
    return math.ceil((num_logical - 1) / spec.shore) + 1


def physical_qubits_for_clique(num_logical, spec):
    return num_logical * clique_chain_length(num_logical, spec)


def _fits(logical, spec):
    return (logical <= spec.clique_bound
            and physical_qubits_for_clique(logical, spec) <= spec.num_qubits)


def max_direct_reals(spec, bits_per_value):
    """Most real values whose fully connected encoding embeds directly."""
    if bits_per_value < 1:
        raise ConfigError("bits_per_value must be >= 1")
    reals = 0
    while _fits((reals + 1) * bits_per_value, spec):
        reals += 1
    return reals


def qubit_curve(spec, bits_per_value, max_reals):
    """Rows ``(reals, logical_bits, physical_qubits, feasible)`` for 1..max_reals."""
    rows = []
    for r in range(1, max_reals + 1):
        logical = r * bits_per_value
        rows.append((r, logical, physical_qubits_for_clique(logical, spec), _fits(logical, spec)))
    return rows
