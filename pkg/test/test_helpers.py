import os

import numpy as np

from app.coefficients import constant_system, permutation_system


def rel_path(path):
    return os.path.relpath(
        os.path.abspath(os.path.join(os.path.dirname(__file__), path))
    )


def constant(L, d=1):
    return constant_system(L.category, d, L.p, linking=L)


def permutation(L, gamma, K=None):
    return permutation_system(L, gamma, K if K is not None else gamma.trivial, L.p)


def random_cochains(complex_, n, count, seed=0):
    rng = np.random.default_rng(seed)
    return [complex_.random_cochain(n, rng) for _ in range(count)]


def assert_passed(reports):
    failed = [r.to_dict() for r in reports if not r.passed]
    assert not failed, failed
