import subprocess
import sys
from pathlib import Path

import pytest

from emlab import _backend

BENCH = Path(__file__).resolve().parent.parent / "benchmarks" / "bench_kernels.py"


@pytest.mark.skipif(len(_backend.available()) < 2, reason="compiled kernels not built")
def test_benchmark_backends_agree():
    res = subprocess.run([sys.executable, str(BENCH), "--quick", "--repeat", "1"],
                         capture_output=True, text=True, timeout=600)
    assert res.returncode == 0, res.stdout + res.stderr
    assert "MISMATCH" not in res.stdout
