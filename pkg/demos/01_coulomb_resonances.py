"""Resonances of the Coulomb pair (2,1) at strong coupling.

The upper level would sit at zeta = 1 without coupling. Turning the coupling
on shifts it into the lower half plane (the standard resonance) and brings
in a cluster of extra zeros of the continued resolvent (nonstandard
resonances) around the image of the form factor's pole.
"""
from friedrichs import LevelPair, Problem, preset, solve

spec = preset("paper-coulomb")
prob = Problem(spec, LevelPair(2, 1))
alpha = 1.0

print(f"system: {spec.kind.value}, mc^2 = {spec.mass_energy} MeV, pair {prob.pair}, alpha = {alpha}")
print(f"form-factor pole mapped to zeta: {prob.pole(alpha):.4f}")
print(f"search box: {prob.default_box(alpha)}\n")

sol = solve(prob, alpha)
print(f"{'branch':>12}  {'zeta':>28}  {'E/mc^2':>22}  {'width/mc^2':>10}  residual")
for r in sol.resonances:
    e = r.energy / spec.mass_energy
    print(f"{str(r.branch):>12}  {r.zeta:28.6f}  {e:22.4f}  {r.width / spec.mass_energy:10.4f}  {r.residual:.1e}")

n = sol.narrowest_nonstandard()
s = sol.standard()
print(f"\nnarrowest nonstandard resonance: E = {n.energy:.2f} MeV, width {n.width:.1f} MeV")
print(f"standard resonance: E = {s.energy:.2f} MeV, width {s.width:.3f} MeV")
spacing = (1 / 1**2 - 1 / 2**2) * alpha**2 * spec.mass_energy / 2
print(f"level spacing {spacing:.1f} MeV: every nonstandard width exceeds it, "
      f"the standard width is {100 * s.width / spacing:.0f}% of it")

