"""Field, weight and spectrum serialisation.

Binary layout (fields and spectra): little-endian int32 m, then m int32
axis lengths, then the complex128 samples in row-major (C) order.  Spectra
are stored over the index set -N_j .. N_j - 1 per axis in increasing order.
"""

import csv
import json

import numpy as np

from .quadrature import CorrectionWeights, KernelSpectrum
from .singularity import GridSpec

_INT = np.dtype("<i4")
_CPLX = np.dtype("<c16")


def write_binary(path, samples):
    a = np.ascontiguousarray(np.asarray(samples, dtype=complex))
    with open(path, "wb") as fh:
        fh.write(np.array([a.ndim, *a.shape], dtype=_INT).tobytes())
        fh.write(a.astype(_CPLX).tobytes())


def read_binary(path):
    with open(path, "rb") as fh:
        raw = fh.read()
    m = int(np.frombuffer(raw[:4], dtype=_INT)[0])
    shape = tuple(int(v) for v in np.frombuffer(raw[4:4 + 4 * m], dtype=_INT))
    data = np.frombuffer(raw[4 + 4 * m:], dtype=_CPLX)
    if data.size != int(np.prod(shape)):
        raise ValueError(f"{path}: expected {int(np.prod(shape))} samples, found {data.size}")
    return data.reshape(shape).astype(complex)


def write_field_csv(path, samples):
    """One row per sample: integer indices, real part, imaginary part (17 digits)."""
    a = np.asarray(samples, dtype=complex)
    m = max(a.ndim, 1)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow([f"i{j}" for j in range(m)] + ["re", "im"])
        for idx in np.ndindex(a.shape):
            v = a[idx]
            w.writerow([*idx, f"{v.real:.17g}", f"{v.imag:.17g}"])


def read_field_csv(path, shape=None):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    m = len(header) - 2
    if not body:
        return np.zeros(shape if shape is not None else (0,) * m, dtype=complex)
    idx = np.array([[int(v) for v in r[:m]] for r in body])
    vals = np.array([float(r[m]) + 1j * float(r[m + 1]) for r in body])
    if shape is None:
        shape = tuple(idx.max(axis=0) + 1)
    out = np.zeros(shape, dtype=complex)
    out[tuple(idx.T)] = vals
    return out


def write_table_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for r in rows:
            w.writerow([f"{v:.17g}" if isinstance(v, float) else v for v in r])


def weights_to_dict(weights):
    c = complex(weights.center_weight)
    return {
        "grid": weights.grid.to_dict(),
        "construction_grid": weights.construction_grid.to_dict(),
        "refine": weights.refine,
        "subset_halfwidth": None if weights.subset_halfwidth is None else list(weights.subset_halfwidth),
        "center_weight": [c.real, c.imag],
        "entries": [
            [*(int(v) for v in i), float(w.real), float(w.imag)]
            for i, w in zip(weights.index, weights.values)
        ],
    }


def weights_from_dict(d):
    grid = GridSpec.from_dict(d["grid"])
    m = grid.m
    ent = d["entries"]
    index = np.array([e[:m] for e in ent], dtype=np.int64).reshape(-1, m)
    values = np.array([e[m] + 1j * e[m + 1] for e in ent], dtype=complex)
    hw = d.get("subset_halfwidth")
    return CorrectionWeights(
        grid=grid, construction_grid=GridSpec.from_dict(d["construction_grid"]), refine=int(d["refine"]),
        center_weight=complex(*d["center_weight"]), index=index, values=values,
        subset_halfwidth=None if hw is None else tuple(hw),
    )


def write_weights(path, weights):
    with open(path, "w") as fh:
        json.dump(weights_to_dict(weights), fh)


def read_weights(path):
    with open(path) as fh:
        return weights_from_dict(json.load(fh))


def write_spectrum(path, spectrum):
    write_binary(path, spectrum.coeffs)


def read_spectrum(path, grid):
    coeffs = read_binary(path)
    if coeffs.shape != grid.shape:
        raise ValueError(f"spectrum shape {coeffs.shape} does not match grid {grid.shape}")
    return KernelSpectrum(grid=grid, coeffs=coeffs)
