"""The first nonstandard resonance z1 along the oscillator ladder (n, n-1).

For each adjacent pair the extent measure d grows with n. z1 stays a few
hundred MeV above the lower level while its width changes by orders of
magnitude between neighbouring pairs.
"""
from friedrichs import Box, LevelPair, Problem, oscillator, preset, solve

spec = preset("paper-osc")
box = Box(0.0, 3.0, -1.2, 0.0)
print(f"hbar omega = {spec.hbar_omega} MeV, mu = {spec.mu}\n")
print(f"{'pair':>8}  {'d':>6}  {'E(z1) MeV':>10}  {'gap MeV':>8}  {'width MeV':>10}")
for n in (1, 2, 3, 4, 5, 10, 20):
    pair = LevelPair(n, n - 1)
    sol = solve(Problem(spec, pair), spec.alpha, box, track_z0=False)
    z1 = sol.by_label("z1")
    lower = (n - 0.5) * spec.hbar_omega
    d = oscillator.pair_extent(n, n - 1)
    if z1 is None:
        print(f"{str(pair):>8}  {d:6.3f}  (no z1 in {box})")
        continue
    print(f"{str(pair):>8}  {d:6.3f}  {z1.energy.real:10.1f}  {z1.energy.real - lower:8.1f}  {z1.width:10.2f}")
