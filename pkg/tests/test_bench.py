import importlib.util
from pathlib import Path

import pytest

from fanorigid import _kernels

BENCH = Path(__file__).resolve().parent.parent / "benchmarks" / "bench_reduce.py"


@pytest.mark.skipif("cython" not in _kernels.backends(), reason="compiled kernel not built")
def test_benchmark_runs_and_backends_agree():
    spec = importlib.util.spec_from_file_location("bench_reduce", BENCH)
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    before = _kernels.nf_modp
    rows, size = mod.bench(5, 3, repeat=1)
    assert {r[0] for r in rows} == {"python", "cython"}
    assert size > 0
    assert _kernels.nf_modp is before
