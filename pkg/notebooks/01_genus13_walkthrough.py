"""Genus 13, end to end.

A random skew matrix Psi on the scroll of type (3,2,2,2) produces a
5-gonal canonical curve of genus 13. We compare its linear strand with the
scroll resolution, find the six extra syzygies, and watch them assemble
into a rational normal quintic.

Run: python3 notebooks/01_genus13_walkthrough.py
"""

import numpy as np

from fivegonal import comparison as cmp
from fivegonal import gonal5 as g5
from fivegonal.linalg import kernel_basis, rank

P = 10007

# %% The configuration
cfg = g5.config_for_genus(13)
print("scroll type e =", cfg.scroll.e, " a =", cfg.a, " b =", cfg.b, " type", cfg.type_tag)

# %% Build a curve and check its Hilbert function in degrees 2 and 3
bundle = g5.make_bundle(13, P, seed=0)
print(len(bundle.quadrics), "quadrics;",
      [g5.hilbert_check(bundle.quadrics, 13, m, P) for m in (2, 3)], "= h(2), h(3)")

# %% Extra syzygies: the kernel of psi_4
res = cmp.betti_delta(bundle.psi)
print(f"dim ker = {res.dim_ker}, beta_C = {res.betti_C}, beta_X = {res.betti_X}")
print("second prime:", res.second)

# %% One kernel element, built without any elimination
ke = cmp.kernel_element(bundle.psi)
print("certificate column", ke.column, "in degree", ke.j, "verified:", ke.verified)
print("direct application is zero:", not cmp.apply_psi(bundle.psi, ke.vector(cfg)).any())

# %% The family over P^1 spans the kernel
fam = cmp.family_basis_g13(bundle.psi)
ker = np.array(kernel_basis(cmp.assemble_psi(bundle.psi)))
print("family rank", rank(fam, P), " joint rank with kernel", rank(np.vstack([fam, ker]), P))

# %% The full linear strand of the curve, via the mapping cone
table = cmp.mapping_cone_betti(bundle.psi)
print(table.render())
print("self-dual:", table.dual())
