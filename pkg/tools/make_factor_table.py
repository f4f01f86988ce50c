"""Regenerate src/prcldpc/data/mersenne_factors.txt (needs sympy)."""
import sys
from pathlib import Path

from sympy import factorint

out = Path(__file__).resolve().parents[1] / "src" / "prcldpc" / "data" / "mersenne_factors.txt"
lines = ["# prime factors of 2^k - 1, repeated primes listed with multiplicity"]
for k in range(1, 129):
    f = factorint(2**k - 1) if k > 1 else {}
    primes = [str(p) for p in sorted(f) for _ in range(f[p])]
    lines.append(f"{k}: {' '.join(primes)}".rstrip())
    print(k, file=sys.stderr, end=" ", flush=True)
out.write_text("\n".join(lines) + "\n")
