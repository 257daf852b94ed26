from .gmpjpe import g_mpjpe
from .features import geometric_features, FEATURE_NAMES
from .frechet import frechet_feature_distance
from .fidelity import FidelityTest, fidelity_auto, fidelity_test_for

__all__ = [
    "g_mpjpe", "geometric_features", "FEATURE_NAMES",
    "frechet_feature_distance", "FidelityTest", "fidelity_auto", "fidelity_test_for",
]
