"""Inner loops of the QUBO solvers, in a numba and a pure-numpy flavour.

Both flavours consume the same pre-drawn random numbers and perform the same
elementwise float operations, so they return the same results. Setting the
environment variable ``QCNMF_NUMBA=0`` selects the numpy flavour globally.
"""

import math

import numpy as np

from ._accel import USE_NUMBA, njit

GRAY_BLOCK_BITS = 12
EXHAUSTIVE_CHUNK = 1 << 14


# ---------------------------------------------------------------- annealing

@njit(cache=True, nogil=True)
def _anneal_nb(linear, coupling, q0, uniforms, temps):
    n = linear.shape[0]
    sweeps = temps.shape[0]
    q = q0.copy()
    field = linear.copy()
    for i in range(n):
        if q[i]:
            for j in range(n):
                field[j] += coupling[i, j]
    e = 0.0
    for i in range(n):
        if q[i]:
            e += 0.5 * (linear[i] + field[i])
    best = q.copy()
    best_e = e
    trace = np.empty(sweeps)
    for s in range(sweeps):
        t = temps[s]
        for i in range(n):
            sign = 1.0 - 2.0 * q[i]
            delta = sign * field[i]
            if delta <= 0.0 or uniforms[s, i] < math.exp(-delta / t):
                q[i] = 1 - q[i]
                for j in range(n):
                    field[j] += sign * coupling[i, j]
                e += delta
                if e < best_e:
                    best_e = e
                    best[:] = q
        trace[s] = best_e
    return best, best_e, trace


def _anneal_np(linear, coupling, q0, uniforms, temps):
    """Batched twin of ``_anneal_nb``: leading axis of ``q0``/``uniforms`` is the restart."""
    q = q0.copy()
    r, n = q.shape
    # accumulate in the same order as the numba kernel so both agree bitwise
    field = np.repeat(linear[None, :], r, axis=0)
    for i in range(n):
        on = q[:, i] == 1
        field[on] += coupling[i][None, :]
    e = np.zeros(r)
    for i in range(n):
        on = q[:, i] == 1
        e[on] += 0.5 * (linear[i] + field[on, i])
    best = q.copy()
    best_e = e.copy()
    trace = np.empty((r, temps.shape[0]))
    rows = np.arange(r)
    for s, t in enumerate(temps):
        for i in range(n):
            sign = 1.0 - 2.0 * q[:, i]
            delta = sign * field[:, i]
            with np.errstate(over="ignore"):
                boltz = np.exp(-delta / t)
            accept = (delta <= 0.0) | (uniforms[:, s, i] < boltz)
            if accept.any():
                idx = rows[accept]
                q[idx, i] = 1 - q[idx, i]
                field[idx] += sign[idx, None] * coupling[i][None, :]
                e[idx] += delta[idx]
                improved = e < best_e
                if improved.any():
                    best_e[improved] = e[improved]
                    best[improved] = q[improved]
        trace[:, s] = best_e
    return best, best_e, trace


def anneal(linear, coupling, q0, uniforms, temps, use_numba=None):
    """Run one annealing chain per row of ``q0``.

    Returns ``(best_states, best_relative_energies, best_so_far_trace)``;
    energies exclude the model offset.
    """
    use_numba = USE_NUMBA if use_numba is None else use_numba
    linear = np.ascontiguousarray(linear, dtype=np.float64)
    coupling = np.ascontiguousarray(coupling, dtype=np.float64)
    q0 = np.ascontiguousarray(q0, dtype=np.uint8)
    temps = np.ascontiguousarray(temps, dtype=np.float64)
    if not use_numba:
        return _anneal_np(linear, coupling, q0, uniforms, temps)
    out = [_anneal_nb(linear, coupling, q0[r], np.ascontiguousarray(uniforms[r]), temps)
           for r in range(q0.shape[0])]
    return (np.stack([o[0] for o in out]), np.array([o[1] for o in out]),
            np.stack([o[2] for o in out]))


# --------------------------------------------------------------- enumeration

@njit(cache=True, nogil=True)
def _ctz(v):
    c = 0
    while (v & 1) == 0:
        v >>= 1
        c += 1
    return c


@njit(cache=True, nogil=True)
def _exhaustive_nb(linear, coupling, tol):
    n = linear.shape[0]
    lo = min(n, GRAY_BLOCK_BITS)
    hi = n - lo
    emin = np.inf
    best_code = np.int64(-1)
    q = np.zeros(n, dtype=np.uint8)
    field = np.empty(n)
    # pass 0 locates the minimum, pass 1 picks the smallest code within tol of it
    for phase in range(2):
        for prefix in range(1 << hi):
            for j in range(n):
                q[j] = 0
            for j in range(hi):
                q[lo + j] = (prefix >> j) & 1
            for j in range(n):
                field[j] = linear[j]
            for i in range(lo, n):
                if q[i]:
                    for j in range(n):
                        field[j] += coupling[i, j]
            e = 0.0
            for i in range(lo, n):
                if q[i]:
                    e += 0.5 * (linear[i] + field[i])
            low = np.int64(0)
            base = np.int64(prefix) << lo
            for step in range(1 << lo):
                if step > 0:
                    i = _ctz(step)
                    sign = 1.0 - 2.0 * q[i]
                    e += sign * field[i]
                    q[i] = 1 - q[i]
                    low ^= np.int64(1) << i
                    for j in range(n):
                        field[j] += sign * coupling[i, j]
                if phase == 0:
                    if e < emin:
                        emin = e
                elif e <= emin + tol:
                    code = base | low
                    if best_code < 0 or code < best_code:
                        best_code = code
    return best_code, emin


def _exhaustive_np(linear, coupling, tol):
    n = linear.shape[0]
    total = 1 << n
    upper = np.triu(coupling, k=1)
    shifts = np.arange(n, dtype=np.int64)

    def chunk_energies(start):
        codes = np.arange(start, min(start + EXHAUSTIVE_CHUNK, total), dtype=np.int64)
        bits = ((codes[:, None] >> shifts) & 1).astype(np.float64)
        return codes, bits @ linear + np.einsum("ij,ij->i", bits @ upper, bits)

    emin = min(chunk_energies(s)[1].min() for s in range(0, total, EXHAUSTIVE_CHUNK))
    for s in range(0, total, EXHAUSTIVE_CHUNK):
        codes, e = chunk_energies(s)
        hit = np.flatnonzero(e <= emin + tol)
        if hit.size:
            return int(codes[hit[0]]), float(emin)
    raise AssertionError("unreachable: minimum not found on second pass")


def exhaustive_min(linear, coupling, tol, use_numba=None):
    """Smallest code (LSB-first integer) whose energy is within ``tol`` of the minimum."""
    use_numba = USE_NUMBA if use_numba is None else use_numba
    linear = np.ascontiguousarray(linear, dtype=np.float64)
    coupling = np.ascontiguousarray(coupling, dtype=np.float64)
    if linear.shape[0] == 0:
        return 0, 0.0
    if use_numba:
        code, emin = _exhaustive_nb(linear, coupling, float(tol))
        return int(code), float(emin)
    return _exhaustive_np(linear, coupling, float(tol))


def warmup():
    """Trigger JIT compilation so later timings exclude it."""
    if not USE_NUMBA:
        return
    lin = np.array([-1.0, 0.5])
    cpl = np.array([[0.0, 1.0], [1.0, 0.0]])
    anneal(lin, cpl, np.zeros((1, 2), np.uint8), np.full((1, 2, 2), 0.5), np.array([1.0, 0.1]))
    exhaustive_min(lin, cpl, 1e-12)
