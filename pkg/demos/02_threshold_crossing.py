"""Following a resonance in the coupling until it becomes a bound state.

The zero labelled z0 moves toward the threshold zeta = 0 as alpha grows.
It can only leave the second sheet through that branch point, which happens
when the real number f(0; alpha) changes sign. Past that coupling the zero
is a real eigenvalue below threshold.
"""
import numpy as np

from friedrichs import LevelPair, Problem, preset
from friedrichs.models import sweep_alpha

for name, pair, grid in (
    ("paper-coulomb", (2, 1), np.linspace(0.5, 6.0, 12)),
    ("paper-osc", (2, 1), np.linspace(0.5, 0.8, 7)),
):
    prob = Problem(preset(name), LevelPair(*pair))
    print(f"\n{name} pair {prob.pair}: critical coupling from f(0; alpha) = 0 -> {prob.critical_alpha():.6f}")
    for tr in sweep_alpha(prob, grid):
        if str(tr.label) != "z0":
            continue
        print(f"  z0 tracked through {len(tr.alphas)} points, terminal state {tr.terminal_state.value}")
        step = max(1, len(tr.alphas) // 8)
        pts = list(zip(tr.alphas, tr.zetas))
        shown = pts[::step] if pts[::step][-1] == pts[-1] else pts[::step] + pts[-1:]
        for a, z in shown:
            print(f"    alpha = {a:8.5f}   zeta = {z:.6f}")

prob = Problem(preset("paper-osc"), LevelPair(1, 0))
print(f"\npaper-osc pair (1,0) at alpha = 1 is already past its critical coupling "
      f"({prob.critical_alpha():.4f}); bound state at zeta = {prob.bound_state(1.0):.6f}")
