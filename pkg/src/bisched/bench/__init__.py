from __future__ import annotations

from bisched.bench.generator import Profile, gen_random
from bisched.bench.harness import BenchRow, run_bench, write_bench

__all__ = ["BenchRow", "Profile", "gen_random", "run_bench", "write_bench"]
