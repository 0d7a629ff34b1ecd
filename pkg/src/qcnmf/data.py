"""Synthetic blob data and the CSV formats used by the command line."""

import numpy as np

from .errors import ConfigError, ParseError

MAX_CENTER_DRAWS = 10_000


def make_blobs(points, dims, clusters, spread, seed, min_separation=0.0):
    """Isotropic Gaussian blobs with centres drawn uniformly in ``[0, 1]^dims``.

    Point ``i`` belongs to cluster ``i % clusters``. Centres are redrawn until
    every pair is at least ``min_separation`` apart.
    Returns ``(points x dims array, labels)``.
    """
    if not points >= clusters >= 1 or dims < 1:
        raise ConfigError("need points >= clusters >= 1 and dims >= 1")
    if spread < 0:
        raise ConfigError("spread must be non-negative")
    rng = np.random.default_rng(seed)
    for _ in range(MAX_CENTER_DRAWS):
        centers = rng.random((clusters, dims))
        diff = centers[:, None, :] - centers[None, :, :]
        dist = np.sqrt((diff ** 2).sum(-1))[np.triu_indices(clusters, 1)]
        if dist.size == 0 or dist.min() >= min_separation:
            break
    else:
        raise ConfigError(f"could not place {clusters} centres {min_separation} apart")
    labels = np.arange(points) % clusters
    data = centers[labels] + spread * rng.standard_normal((points, dims))
    return data, labels


def format_row(values):
    return ",".join(f"{v:.12g}" for v in values)


def write_csv(path, data):
    with open(path, "w") as fh:
        for row in np.atleast_2d(data):
            fh.write(format_row(row) + "\n")


def read_csv(path):
    """Rows of comma-separated reals, no header; blank lines are skipped."""
    rows, width = [], None
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                row = [float(tok) for tok in line.split(",")]
            except ValueError as exc:
                raise ParseError(f"non-numeric field in {line!r}", lineno) from exc
            if not all(np.isfinite(row)):
                raise ParseError("non-finite value", lineno)
            if width is None:
                width = len(row)
            elif len(row) != width:
                raise ParseError(f"expected {width} columns, got {len(row)}", lineno)
            rows.append(row)
    if not rows:
        raise ParseError("no data rows", 1)
    return np.array(rows)


def write_labels(path, labels):
    with open(path, "w") as fh:
        fh.writelines(f"{int(v)}\n" for v in labels)


def read_labels(path):
    out = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                out.append(int(line))
            except ValueError as exc:
                raise ParseError(f"bad label {line!r}", lineno) from exc
    return np.array(out, dtype=int)
