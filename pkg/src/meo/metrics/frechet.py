"""Frechet distance between Gaussian fits of geometric feature sets."""

from __future__ import annotations

import numpy as np
from scipy import linalg

from .features import geometric_features

RIDGE_EPS = 1e-6


def frechet_from_matrices(feats_a: np.ndarray, feats_b: np.ndarray) -> tuple:
    """Returns (distance, metadata). Feature matrices are (clips, features)."""
    if feats_a.shape[0] < 2 or feats_b.shape[0] < 2:
        raise ValueError("need at least 2 clips per side")
    mu_a, mu_b = feats_a.mean(axis=0), feats_b.mean(axis=0)
    cov_a = np.cov(feats_a, rowvar=False)
    cov_b = np.cov(feats_b, rowvar=False)
    meta = {"ridge_added": False}
    singular = (np.linalg.matrix_rank(cov_a) < cov_a.shape[0]
                or np.linalg.matrix_rank(cov_b) < cov_b.shape[0])
    covmean = None
    if not singular:
        covmean, _ = linalg.sqrtm(cov_a @ cov_b, disp=False)
    if covmean is None or not np.isfinite(covmean).all():
        eye = RIDGE_EPS * np.eye(cov_a.shape[0])
        cov_a = cov_a + eye
        cov_b = cov_b + eye
        covmean, _ = linalg.sqrtm(cov_a @ cov_b, disp=False)
        meta["ridge_added"] = True
        meta["ridge"] = RIDGE_EPS
    if np.iscomplexobj(covmean):
        covmean = covmean.real
    diff = mu_a - mu_b
    dist = float(diff @ diff + np.trace(cov_a + cov_b - 2.0 * covmean))
    return max(dist, 0.0), meta


def frechet_feature_distance(clips_a, clips_b, with_metadata: bool = False):
    feats_a = np.stack([geometric_features(c) for c in clips_a])
    feats_b = np.stack([geometric_features(c) for c in clips_b])
    dist, meta = frechet_from_matrices(feats_a, feats_b)
    return (dist, meta) if with_metadata else dist
