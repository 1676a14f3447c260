import numpy as np
import pytest

from lrdcp import _pykernels
from lrdcp.scores import ScoreSpec, make_scores

kernels = pytest.importorskip("lrdcp._kernels")


@pytest.mark.parametrize("n", [3, 4, 17, 250, 1001])
def test_sn_values_bit_identical(n):
    rng = np.random.default_rng(n)
    for _ in range(20):
        v = rng.standard_normal(n) * rng.uniform(1e-3, 1e3) + rng.uniform(-1e3, 1e3)
        a_val, a_deg = kernels.sn_values(v)
        b_val, b_deg = _pykernels.sn_values(v)
        assert np.array_equal(a_val, b_val)
        assert np.array_equal(a_deg, b_deg)


def test_sn_rows_bit_identical():
    V = np.random.default_rng(1).standard_normal((40, 33))
    for a, b in zip(kernels.sn_rows(V), _pykernels.sn_rows(V)):
        assert np.array_equal(a, b)


@pytest.mark.parametrize("l", [3, 9, 22, 40])
@pytest.mark.parametrize("kind", ["wilcoxon", "vdw", "median", None])
def test_window_max_bit_identical(l, kind):
    x = np.random.default_rng(l).standard_normal(400)
    scores = None if kind is None else make_scores(ScoreSpec.parse(kind), l)
    a = kernels.window_sn_max(x, l, scores)
    b = _pykernels.window_sn_max(x, l, scores)
    assert np.array_equal(a, b)
    # a slice of windows equals the same slice of the full pass
    assert np.array_equal(kernels.window_sn_max(x, l, scores, 17, 101), a[17:101])
    assert np.array_equal(_pykernels.window_sn_max(x, l, scores, 17, 101), b[17:101])


def test_window_ranks_with_ties():
    x = np.random.default_rng(9).integers(0, 3, 300).astype(float)
    s = make_scores(ScoreSpec.vdw(), 12)
    assert np.array_equal(kernels.window_sn_max(x, 12, s), _pykernels.window_sn_max(x, 12, s))


def test_constant_windows():
    x = np.ones(50)
    assert np.array_equal(kernels.window_sn_max(x, 10), np.zeros(41))
    assert np.array_equal(_pykernels.window_sn_max(x, 10), np.zeros(41))


def test_score_length_checked():
    with pytest.raises(ValueError):
        kernels.window_sn_max(np.arange(20.0), 5, np.ones(4))
