#!/usr/bin/env python3
"""Writes data/intel_lab_fixture.csv: 54 synthetic sensors on a 40 m x 31 m
floor plan with a smooth temperature field (no download needed)."""
import math
import random
import sys

rng = random.Random(54)
rows = []
# Sensors along the walls of a rectangular floor plan, plus a few inside.
perimeter = []
for i in range(44):
    t = i / 44 * 2 * (40 + 31)
    if t < 40:
        x, y = t, 0.5
    elif t < 71:
        x, y = 39.5, t - 40
    elif t < 111:
        x, y = 111 - t, 30.5
    else:
        x, y = 0.5, 142 - t
    perimeter.append((x + rng.uniform(-0.8, 0.8), y + rng.uniform(-0.8, 0.8)))
interior = [(rng.uniform(8, 32), rng.uniform(8, 23)) for _ in range(10)]
for sid, (x, y) in enumerate(perimeter + interior, start=1):
    temp = 19.0 + 0.08 * x + 0.05 * y + 1.2 * math.sin(x / 9.0) * math.cos(y / 7.0)
    temp += rng.gauss(0.0, 0.05)
    rows.append((sid, round(x, 2), round(y, 2), round(temp, 3)))

out = sys.argv[1] if len(sys.argv) > 1 else "data/intel_lab_fixture.csv"
with open(out, "w") as f:
    f.write("sensor_id,x,y,temperature,timestamp\n")
    for sid, x, y, t in rows:
        f.write(f"{sid},{x},{y},{t},2004-03-01T12:00:00\n")
