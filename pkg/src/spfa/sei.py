"""Square Euclidean Imbalance of empirical distributions.

For counts c over b bins with n = sum(c):

    SEI = sum_d (c_d / n - 1/b)^2

Zero exactly when the counts are uniform; maximal, (b-1)/b, for a point mass.
Under a uniform source the expectation of the empirical SEI is (b-1)/(n*b),
which is the reference scale the key search compares candidates against.
"""

import numpy as np

from .errors import ConfigurationError


def sei(counts) -> float:
    counts = np.asarray(counts)
    if counts.ndim != 1 or counts.size < 2:
        raise ConfigurationError("sei needs a 1-d histogram with at least 2 bins")
    if np.any(counts < 0):
        raise ConfigurationError("negative count")
    n = counts.sum()
    if n <= 0:
        raise ConfigurationError("sei of an empty histogram")
    if np.issubdtype(counts.dtype, np.integer):
        # sum((c/n - 1/b)^2) = sum(c^2)/n^2 - 1/b; the integer sum makes the
        # result independent of bin order, so XOR-relabeling leaves it exact
        sumsq = int(np.dot(counts, counts))
        return sumsq / float(int(n)) ** 2 - 1.0 / counts.size
    p = counts / n
    return float(np.sum((p - 1.0 / counts.size) ** 2))


def sei_rows(hists: np.ndarray, n: int) -> np.ndarray:
    """SEI of every row of an (m, bins) count matrix sharing the same total n."""
    hists = np.asarray(hists)
    if hists.ndim != 2:
        raise ConfigurationError("expected an (m, bins) count matrix")
    if n <= 0:
        raise ConfigurationError("row total must be positive")
    if np.issubdtype(hists.dtype, np.integer):
        sumsq = np.einsum("ij,ij->i", hists, hists)
        return sumsq / float(n) ** 2 - 1.0 / hists.shape[1]
    p = hists / float(n)
    p -= 1.0 / hists.shape[1]
    return np.einsum("ij,ij->i", p, p)


def null_sei_mean(bins: int, n: int) -> float:
    """Expected empirical SEI of n uniform draws over `bins` bins."""
    return (bins - 1) / (bins * float(n))


def histogram(values, bins: int) -> np.ndarray:
    values = np.asarray(values)
    if values.size and (values.min() < 0 or values.max() >= bins):
        raise ConfigurationError("value out of bin range")
    return np.bincount(values.ravel(), minlength=bins)
