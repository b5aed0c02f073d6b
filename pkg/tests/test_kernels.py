import os
import subprocess
import sys

import numpy as np
import pytest

from tentlimit import _kernels as K
from tentlimit.chains import build_chain
from tentlimit.symbolic import _encode, ladder_nu
from tentlimit.tentmap import Slope


@pytest.mark.parametrize("s", [2.0, 1.75, (1 + 5**0.5) / 2])
@pytest.mark.parametrize("j", [0, 1, 4, 7])
def test_grid_roots_agree(s, j):
    a = np.sort(np.atleast_1d(K.grid_roots_numba(s, j, 0.0, 0.5, 4096)))
    b = np.sort(np.atleast_1d(K.grid_roots_numpy(s, j, 0.0, 0.5, 4096)))
    assert a.shape == b.shape
    assert np.allclose(a, b, atol=1e-12)


def test_histogram_agree():
    a = K.orbit_histogram_numba(1.75, 20000, 64, 32)
    b = K.orbit_histogram_numpy(1.75, 20000, 64, 32)
    assert (a == b).all()


def test_window_codes_agree():
    sym = _encode(ladder_nu().prefix(2000))
    a = K.window_codes_numba(sym, 1000, 4)
    b = K.window_codes_numpy(sym, 1000, 4)
    assert np.array_equal(np.sort(a), np.sort(b))


@pytest.mark.parametrize("spec,p", [("2", 6), ("7/4", 5), ("19/10", 4)])
def test_refinement_assign_agree(spec, p):
    s = Slope.parse(spec)
    fine, coarse = build_chain(s, p), build_chain(s, p - 1)
    qf, Fa = fine.scaled
    qc, Ca = coarse.scaled
    a, b = s.value.numerator, s.value.denominator
    x = K.refinement_assign_numba(Fa, Ca * (qf // qc), a, b, qf)
    y = K.refinement_assign_numpy(Fa, Ca * (qf // qc), a, b, qf)
    assert np.array_equal(x, y) and (x > 0).all()


def test_env_flag_selects_numpy():
    code = "from tentlimit import _kernels as K; print(K.NUMBA_AVAILABLE, K.grid_roots is K.grid_roots_numpy)"
    env = dict(os.environ, TENTLIMIT_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["False", "True"]
