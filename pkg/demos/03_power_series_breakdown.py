# %% [markdown]
# # Where the power series in F stops working
#
# For a two-level system at omega = 0.9 the amplitude series for P_1 converges
# only for F < |omega - omega12| / D12 = 0.1. Fit alpha F + gamma F^3 on a grid
# inside that radius and on one that goes past it.

# %%
from floqpol import ScanSpec, fit_susceptibilities, run_scan, sos_polarizability, two_level_model
from floqpol.analytic import TwoLevelParams, convergence_radius

model = two_level_model(1.0, 1.0)
omega = 0.9
radius = convergence_radius(TwoLevelParams(1.0, omega, 1.0, 0.0))
print("convergence radius:", radius)

# %%
for reach in (0.5, 1.5):
    spec = ScanSpec("amplitude", reach * radius / 15, reach * radius, 15, omega, model,
                    observables=("P",), n_report=1)
    rows = run_scan(spec)
    fit = fit_susceptibilities([r["amplitude"] for r in rows], [r["P_1"] for r in rows])
    print(f"grid to {reach:.1f} x radius: alpha = {fit.alpha:.4f}, gamma = {fit.gamma:.2f}, "
          f"residual = {fit.residual:.3e}")

print("sum-over-states alpha:", sos_polarizability(model, 1, omega))
