# %% [markdown]
# # Susceptibility across a resonance
#
# Sweep omega through omega12 = 1 at a strong field (F = 0.05). The weak-field
# polarizability has a pole at resonance. The strong-field chi stays finite
# and peaks near the edges of the dressed splitting.

# %%
import numpy as np

from floqpol import ScanSpec, run_scan, sos_polarizability, two_level_model

model = two_level_model(1.0, 1.0)
rows = run_scan(ScanSpec("frequency", 0.8, 1.2, 41, 0.05, model, observables=("chi",)))

# %%
print(" omega     chi(F=0.05)   alpha_SOS")
for r in rows[::4]:
    w = r["frequency"]
    sos = sos_polarizability(model, 1, w) if abs(w - 1.0) > 1e-9 else float("inf")
    print(f"{w:.3f}  {r['chi']:+12.5f}  {sos:+12.5f}")

# %%
chi = np.array([r["chi"] for r in rows])
peak = rows[int(np.argmax(np.abs(chi)))]["frequency"]
print(f"all finite: {bool(np.all(np.isfinite(chi)))}, largest |chi| at omega = {peak:.3f}")
