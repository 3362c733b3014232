#!/usr/bin/env python3
"""Regenerates src/brief_pattern.inc: 256 BRIEF test pairs in a 31x31 patch.

Pairs are drawn i.i.d. from an isotropic Gaussian with sigma = 31/5, rounded
and clipped to [-13, 13]; degenerate pairs (p == q) are redrawn.
"""
import numpy as np

SEED = 20240531
rng = np.random.default_rng(SEED)
pairs = []
while len(pairs) < 256:
    p = np.clip(np.rint(rng.normal(0.0, 31.0 / 5.0, size=4)), -13, 13).astype(int)
    if p[0] == p[2] and p[1] == p[3]:
        continue
    pairs.append(p)

print(f"// Generated by tools/gen_brief_pattern.py (seed {SEED}). Do not edit.")
print("// Each row: px, py, qx, qy")
for p in pairs:
    print("    {%d, %d, %d, %d}," % tuple(p))
