"""Synthetic binary tasks, the 8x8 digits loader and seeded splitting."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import EmptyClassError, InvalidArgumentError, ParseError

LINEAR_SIZE = 51
NONLINEAR_SIZE = 863
DIGITS_SIZE = 1797


@dataclass
class Dataset:
    X: np.ndarray
    y: np.ndarray
    name: str = ""
    # (unit normal, offset) of the generating line, for synthetic linear data
    boundary: tuple | None = None

    def __post_init__(self):
        self.X = np.asarray(self.X, dtype=np.float64)
        self.y = np.asarray(self.y, dtype=np.float64).ravel()
        if self.X.ndim != 2 or self.X.shape[0] != self.y.size or self.y.size == 0:
            raise InvalidArgumentError(f"bad dataset shapes X{self.X.shape} y{self.y.shape}")
        if not np.all(np.isfinite(self.X)):
            raise InvalidArgumentError("dataset contains non-finite features")
        if not np.all((self.y == 0) | (self.y == 1)):
            raise InvalidArgumentError("labels must be 0 or 1")

    @property
    def m(self) -> int:
        return int(self.y.size)

    @property
    def n_features(self) -> int:
        return int(self.X.shape[1])

    def subset(self, idx, name=None) -> "Dataset":
        return Dataset(self.X[idx], self.y[idx], name or self.name)


def gen_linear(m: int = LINEAR_SIZE, seed: int = 0, margin: float = 0.2) -> Dataset:
    """Points in ``[-1, 1]^2`` labeled by a random line, with an empty band of half-width ``margin``."""
    if m < 2:
        raise InvalidArgumentError("m must be >= 2")
    if not 0 < margin < 1:
        raise InvalidArgumentError(f"margin must lie in (0, 1), got {margin!r}")
    rng = np.random.default_rng(seed)
    angle = rng.uniform(0.0, 2.0 * np.pi)
    normal = np.array([np.cos(angle), np.sin(angle)])
    offset = rng.uniform(-0.5, 0.5) * (1.0 - margin)
    X = np.empty((m, 2))
    filled = 0
    while filled < m:
        cand = rng.uniform(-1.0, 1.0, size=(2 * m, 2))
        cand = cand[np.abs(cand @ normal + offset) >= margin]
        take = min(m - filled, len(cand))
        X[filled:filled + take] = cand[:take]
        filled += take
    y = (X @ normal + offset > 0).astype(np.float64)
    return Dataset(X, y, "linear", boundary=(normal, float(offset)))


def gen_nonlinear(m: int = NONLINEAR_SIZE, seed: int = 0, noise: float = 0.05) -> Dataset:
    """Two interleaved half-moons; ``noise`` is the std of isotropic Gaussian jitter.

    Class 0 lies on the upper unit half-circle around the origin, class 1 on
    the lower unit half-circle around ``(1, 0.5)``.
    """
    if m < 2:
        raise InvalidArgumentError("m must be >= 2")
    if noise < 0:
        raise InvalidArgumentError("noise must be >= 0")
    rng = np.random.default_rng(seed)
    m0 = (m + 1) // 2
    m1 = m - m0
    t0 = rng.uniform(0.0, np.pi, m0)
    t1 = rng.uniform(0.0, np.pi, m1)
    upper = np.column_stack([np.cos(t0), np.sin(t0)])
    lower = np.column_stack([1.0 - np.cos(t1), 0.5 - np.sin(t1)])
    X = np.vstack([upper, lower])
    if noise > 0:
        X = X + noise * rng.standard_normal(X.shape)
    y = np.concatenate([np.zeros(m0), np.ones(m1)])
    order = rng.permutation(m)
    return Dataset(X[order], y[order], "nonlinear")


def read_digits_rows(path):
    """Parse every row of a digits CSV; returns ``(pixels, labels)`` as int arrays."""
    path = Path(path)
    pixels, labels = [], []
    with path.open(newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 65:
                raise ParseError(path, lineno, f"expected 65 fields, found {len(row)}")
            try:
                values = [int(c) for c in row]
            except ValueError as exc:
                raise ParseError(path, lineno, f"non-integer field ({exc})") from None
            if any(v < 0 or v > 16 for v in values[:64]):
                raise ParseError(path, lineno, "pixel value outside [0, 16]")
            if not 0 <= values[64] <= 9:
                raise ParseError(path, lineno, f"label {values[64]} outside [0, 9]")
            pixels.append(values[:64])
            labels.append(values[64])
    return np.array(pixels, dtype=np.int64).reshape(-1, 64), np.array(labels, dtype=np.int64)


def load_digits_csv(path, class_a: int = 0, class_b: int = 1) -> Dataset:
    """Binary subset of the 8x8 digits: ``class_a -> 0``, ``class_b -> 1``, pixels / 16."""
    if class_a == class_b:
        raise InvalidArgumentError("class_a and class_b must differ")
    pixels, labels = read_digits_rows(path)
    keep = (labels == class_a) | (labels == class_b)
    if not np.any(labels == class_a) or not np.any(labels == class_b):
        raise EmptyClassError(f"no rows labeled {class_a} or {class_b} in {path}")
    X = pixels[keep] / 16.0
    y = (labels[keep] == class_b).astype(np.float64)
    return Dataset(X, y, f"digits{class_a}v{class_b}")


def split(ds: Dataset, test_fraction: float = 0.2, seed: int = 0):
    """Seeded permutation; the first ``ceil(m * test_fraction)`` indices form the test set."""
    if not 0 < test_fraction < 1:
        raise InvalidArgumentError("test_fraction must lie in (0, 1)")
    n_test = math.ceil(ds.m * test_fraction)
    if n_test < 1 or n_test >= ds.m:
        raise InvalidArgumentError(f"split of {ds.m} examples leaves an empty side")
    perm = np.random.default_rng(seed).permutation(ds.m)
    test_idx, train_idx = perm[:n_test], perm[n_test:]
    return ds.subset(train_idx, ds.name), ds.subset(test_idx, ds.name)


def write_csv(ds: Dataset, path) -> None:
    """Export as ``features..., label`` rows, no header."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        for x, y in zip(ds.X, ds.y):
            w.writerow([repr(float(v)) for v in x] + [int(y)])
