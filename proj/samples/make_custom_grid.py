"""Writes custom_bump_grid.json: the bump coefficient c = kappa 64 (t(1-t))^3,
t = (|z0| - 0.3) / 0.4, sampled on a uniform 33 x 33 grid over [-1, 1]^2."""
import json
import math

n, kappa = 33, 0.2
c = []
for j in range(n):
    for i in range(n):
        x, y = -1 + 2 * i / (n - 1), -1 + 2 * j / (n - 1)
        t = (math.hypot(x, y) - 0.3) / 0.4
        c.append([kappa * 64 * (t * (1 - t)) ** 3 if 0 < t < 1 else 0.0, 0.0])
with open("custom_bump_grid.json", "w") as f:
    json.dump({"n": n, "c": c, "b": [[0.0, 0.0]] * (n * n)}, f)
