"""Electromagnetic-strength coupling: alpha = 1/137 with the electron mass.

At weak coupling the standard resonance has the tiny golden-rule width of a
radiative transition. The nonstandard zeros still exist, but they huddle
around the image of the form factor's pole, far from the physical levels,
with widths of a few keV.
"""
from friedrichs import Box, LevelPair, Problem, preset, solve, zeta_to_energy

spec = preset("electron-coulomb")
prob = Problem(spec, LevelPair(2, 1))
a = spec.alpha
p = prob.pole(a)
box = Box(-0.2 * abs(p), 0.2 * abs(p), 1.2 * p.imag, 0.8 * p.imag)
print(f"alpha = {a:.6f}, pole image at zeta = {p:.2f}; searching {box}")

sol = solve(prob, a, box, classify=False)
for r in sol.resonances:
    print(f"  nonstandard zero zeta = {r.zeta:.3f}: width {r.width * 1e3:.3f} keV")

st = prob.standard_branch(a)
w = abs(zeta_to_energy(spec, prob.pair, st.final).imag) * 1e6
print(f"standard resonance: zeta = {st.final:.12f}, width {w:.3e} eV")
