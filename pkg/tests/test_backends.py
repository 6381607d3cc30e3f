"""The compiled and pure-Python kernels must agree bit for bit."""

import numpy as np
import pytest

from topiclens import _accel
from topiclens._accel import _core_py

compiled = pytest.importorskip("topiclens._accel._core",
                               reason="compiled backend not built")

# First six outputs of the reference pcg32 stream for seed=42, seq=54,
# from the canonical minimal C implementation.
PCG32_REFERENCE = [0xA15C02B7, 0x7B47F409, 0xBA1D3330,
                   0x83D2F293, 0xBFA4784B, 0xCBED606E]


def test_pcg32_reference_vector_python():
    rng = _core_py.Pcg32(42, 54)
    assert [rng.next_uint32() for _ in range(6)] == PCG32_REFERENCE


def test_pcg32_reference_vector_compiled():
    rng = compiled.Pcg32(42, 54)
    assert [rng.next_uint32() for _ in range(6)] == PCG32_REFERENCE


def test_pcg32_streams_match_across_backends():
    for seed, seq in [(0, 0), (1, 7), (123456789, 987654321), (2**63, 2**31)]:
        a = _core_py.Pcg32(seed, seq)
        b = compiled.Pcg32(seed, seq)
        assert [a.next_uint32() for _ in range(64)] == \
               [b.next_uint32() for _ in range(64)]


def _random_problem(seed, n_points=40, n_edges=160):
    rng = np.random.default_rng(seed)
    pos = rng.normal(size=(n_points, 2))
    heads = rng.integers(0, n_points, size=n_edges)
    tails = (heads + 1 + rng.integers(0, n_points - 1, size=n_edges)) % n_points
    weights = rng.random(n_edges) + 0.05
    eps = weights.max() / weights
    return pos, heads.astype(np.int64), tails.astype(np.int64), eps


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_layout_bitwise_identical(seed):
    pos, heads, tails, eps = _random_problem(seed)
    args = (pos, heads, tails, eps, 1.577, 0.895, 60, 1.0, 5, seed, pos.shape[0])
    out_py, e_py, p_py = _core_py.optimize_embedding(*args)
    out_c, e_c, p_c = compiled.optimize_embedding(*args)
    assert (e_py, p_py) == (e_c, p_c) == (-1, -1)
    assert np.array_equal(out_py, out_c)


def test_layout_edgeless_bitwise_identical():
    pos = np.random.default_rng(3).normal(size=(8, 2))
    empty = np.empty(0, dtype=np.float64)
    args = (pos, empty.astype(np.int64), empty.astype(np.int64), empty,
            1.577, 0.895, 40, 1.0, 5, 9, 8)
    out_py, _, _ = _core_py.optimize_embedding(*args)
    out_c, _, _ = compiled.optimize_embedding(*args)
    assert np.array_equal(out_py, out_c)


def test_place_boxes_bitwise_identical():
    rng = np.random.default_rng(4)
    half_w = rng.uniform(5, 40, size=60)
    half_h = rng.uniform(3, 15, size=60)
    rp = _core_py.place_boxes(half_w, half_h, 400.0, 300.0)
    rc = compiled.place_boxes(half_w, half_h, 400.0, 300.0)
    for a, b in zip(rp, rc):
        assert np.array_equal(a, b)


def test_backend_selection_reports_a_backend():
    assert _accel.BACKEND in ("compiled", "python")


def test_pure_python_env_flag(tmp_path):
    import subprocess
    import sys

    code = ("import topiclens._accel as a; print(a.BACKEND)")
    out = subprocess.run(
        [sys.executable, "-c", code],
        env={"PATH": "/usr/bin:/bin", "TOPICLENS_PURE_PYTHON": "1"},
        capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
