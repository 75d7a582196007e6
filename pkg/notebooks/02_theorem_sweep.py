"""Sweeping the genus.

Below genus 19 the kernel of psi can be computed outright. Above that we
only build one kernel element and verify it. Each certificate check is
symbolic and cheap, so the whole sweep to genus 43 takes seconds.

Run: python3 notebooks/02_theorem_sweep.py
"""

import time

from fivegonal import comparison as cmp
from fivegonal import gonal5 as g5

P = 10007

# %% Where each genus sits
for g in range(9, 32):
    s = cmp.genus_summary(g)
    thr = cmp.construction_threshold(g5.config_for_genus(g))
    print(f"g={g:2d} type {s['type']:>4}  b={s['b']}  window={s['window']}  threshold={thr}")

# %% Full kernels where they fit (genus 17 needs about two minutes)
for g in (11, 13, 15):
    t0 = time.perf_counter()
    k = cmp.psi_nullity(g5.random_psi(g5.config_for_genus(g), P, 0))
    print(f"g={g}: dim ker psi = {k}  ({time.perf_counter() - t0:.1f}s)")

# %% Certificates for larger genera
for g, c in [(g, 0) for g in range(19, 42, 2)] + [(28, 0), (30, 0), (43, 1)]:
    psi = g5.random_psi(g5.config_for_genus(g), P, 0)
    t0 = time.perf_counter()
    ke = cmp.kernel_element(psi, shift=c)
    print(f"g={g} shift={c}: column {ke.column}, j={ke.j}, forced={ke.n_forced}, "
          f"verified={ke.verified}  ({time.perf_counter() - t0:.2f}s)")

# %% Genus 26 sits below the construction threshold at shift 0
cfg26 = g5.config_for_genus(26)
print("g=26 threshold (forced, available):", cmp.construction_threshold(cfg26))
