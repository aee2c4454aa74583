"""
Constellations and balanced labelings
=====================================

Builds each supported constellation, shows its real-axis projection, and
demonstrates what a balanced labeling (E-map) does: at every real
coordinate, the labels of the points sharing it have exactly half ones in
each bit column, so knowing the real coordinate reveals nothing about any
individual bit.
"""
import numpy as np

from relaysec import build_constellation, export_text, project, validate_emap

print("Supported constellations")
print("=" * 60)
for kind in ("qpsk", "psk8", "qam16", "qam32", "qam64", "qam128", "qam256"):
    c = build_constellation(kind, "emap")
    p = project(c)
    ok, _ = validate_emap(c)
    gray_ok, _ = validate_emap(build_constellation(kind, "gray"))
    print(f"{kind:7s}  M={c.m:3d}  q={c.q}  |S_R|={len(p.s_r):2d}  "
          f"row counts={sorted(set(p.d.tolist()))}  "
          f"balanced(emap)={ok}  balanced(gray)={gray_ok}")

print()
print("The 8-PSK labeling, coordinate by coordinate")
print("=" * 60)
c = build_constellation("psk8", "emap")
p = project(c)
for ci, b in enumerate(p.b_mats):
    rows = [" ".join(str(int(x)) for x in row) for row in b]
    print(f"real = {p.s_r[ci]:+.4f}:  labels {rows[0]}  /  {rows[1]}  "
          f"(column sums {b.sum(axis=0).tolist()})")

print()
print("Equivocation, by exact enumeration")
print("=" * 60)
print("Pick a random row of a coordinate's label matrix; the probability that")
print("its bit j matches the true row's bit j is exactly 1/2 for every (c, j):")
c = build_constellation("qam16", "emap")
p = project(c)
for ci, b in enumerate(p.b_mats):
    d = b.shape[0]
    probs = []
    for j in range(c.q):
        k = int(b[:, j].sum())
        matches = k * k + (d - k) * (d - k)  # agreeing ordered row pairs
        probs.append(matches / (d * d))
    print(f"  coordinate {ci}: match probabilities {probs}")

print()
print("Export format (one 're im label' line per point), first four of 16-QAM:")
print("=" * 60)
print("\n".join(export_text(c).splitlines()[:4]))
