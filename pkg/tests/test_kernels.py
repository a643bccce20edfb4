"""Backend selection and exact agreement of the kernel twins."""

import os
import random
import subprocess
import sys

import pytest

import upblab._kernels as kernels
from upblab._kernels import available_backends, reference

from oracles import rand_hermitian, rand_scalar


def _triple_rows(m):
    return m._triple_rows()


def _backend_modules():
    mods = [reference]
    if "compiled" in available_backends():
        from upblab._kernels import _fast

        mods.append(_fast)
    return mods


def test_compiled_backend_is_built():
    # The repository ships the extension; the suite exercises both twins.
    assert "compiled" in available_backends()


def test_env_var_forces_backend():
    env = dict(os.environ)
    env["UPBLAB_KERNELS"] = "python"
    out = subprocess.run(
        [sys.executable, "-c", "import upblab._kernels as k; print(k.BACKEND)"],
        env=env,
        capture_output=True,
        text=True,
    )
    assert out.stdout.strip() == "python"
    env["UPBLAB_KERNELS"] = "compiled"
    out = subprocess.run(
        [sys.executable, "-c", "import upblab._kernels as k; print(k.BACKEND)"],
        env=env,
        capture_output=True,
        text=True,
    )
    assert out.stdout.strip() == "compiled"
    env["UPBLAB_KERNELS"] = "nonsense"
    out = subprocess.run(
        [sys.executable, "-c", "import upblab._kernels"],
        env=env,
        capture_output=True,
        text=True,
    )
    assert out.returncode != 0


def test_twins_agree_on_random_matrices():
    mods = _backend_modules()
    if len(mods) < 2:
        pytest.skip("compiled twin not built")
    rng = random.Random(2024)
    for _ in range(150):
        nr, nc = rng.randint(1, 7), rng.randint(1, 7)
        from upblab.linalg import ExactMatrix

        m = ExactMatrix.from_rows(
            [[rand_scalar(rng) for _ in range(nc)] for _ in range(nr)]
        )
        rows = _triple_rows(m)
        results = [mod.rref(rows, nr, nc) for mod in mods]
        assert results[0] == results[1]
        ranks = [mod.bareiss_rank(rows, nr, nc) for mod in mods]
        assert ranks[0] == ranks[1] == results[0][0]


def test_twins_agree_on_hermitian_elimination():
    mods = _backend_modules()
    if len(mods) < 2:
        pytest.skip("compiled twin not built")
    rng = random.Random(77)
    for trial in range(150):
        n = rng.randint(1, 7)
        h = rand_hermitian(rng, n, psd=trial % 2 == 0)
        rows = _triple_rows(h)
        recs = [mod.ldl_hermitian(rows, n) for mod in mods]
        assert recs[0] == recs[1]


def test_rref_does_not_mutate_input():
    rng = random.Random(5)
    h = rand_hermitian(rng, 4)
    rows = _triple_rows(h)
    snapshot = [list(r) for r in rows]
    kernels.rref(rows, 4, 4)
    kernels.ldl_hermitian(rows, 4)
    kernels.bareiss_rank(rows, 4, 4)
    assert rows == snapshot
