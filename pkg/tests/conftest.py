import numpy as np

from ripsapprox.geometry import PointCloud


def random_cloud(seed, n, d, box=10.0):
    """Distinct uniform points in [0, box)^d; retries the (measure-zero)
    duplicate draw so PointCloud never rejects."""
    rng = np.random.default_rng(seed)
    while True:
        pts = rng.uniform(0.0, box, size=(n, d))
        if len({tuple(row) for row in pts}) == n:
            return PointCloud(pts)
