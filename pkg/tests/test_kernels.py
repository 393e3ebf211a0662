"""The compiled kernels and the pure-Python fallbacks must agree exactly."""

import random

import numpy as np

from rrs.kernels import lcs_dp, lcs_dp_python, ted_dp, ted_dp_python
from rrs.treediff import _Interner, _tree_arrays

from oracles import lcs_naive, random_tree_pair


def test_ted_kernel_matches_python_fallback():
    rng = random.Random(99)
    for _ in range(50):
        t1, t2 = random_tree_pair(rng, 10)
        interner = _Interner()
        a1 = _tree_arrays(t1, interner)
        a2 = _tree_arrays(t2, interner)
        compiled = ted_dp(*a1, *a2, 1, 1, 1)
        plain = ted_dp_python(*a1, *a2, 1, 1, 1)
        assert compiled == plain


def test_lcs_kernel_matches_python_fallback_and_oracle():
    rng = random.Random(7)
    for _ in range(100):
        a = np.array([rng.randrange(4) for _ in range(rng.randrange(1, 12))],
                     dtype=np.int64)
        b = np.array([rng.randrange(4) for _ in range(rng.randrange(1, 12))],
                     dtype=np.int64)
        compiled = int(lcs_dp(a, b))
        plain = int(lcs_dp_python(a, b))
        naive = lcs_naive(tuple(a.tolist()), tuple(b.tolist()))
        assert compiled == plain == naive


def test_env_flag_selects_fallback(monkeypatch):
    import importlib
    import sys

    monkeypatch.setenv("RRS_DISABLE_NUMBA", "1")
    saved = sys.modules.pop("rrs.kernels")
    try:
        module = importlib.import_module("rrs.kernels")
        assert module.NUMBA_ENABLED is False
        assert module.ted_dp is module.ted_dp_python
    finally:
        sys.modules["rrs.kernels"] = saved
