"""How good is eliminating the cavity?

Evolves the exact atoms-plus-cavity model and its reduced two-qubit
counterpart side by side, reports the worst trajectory distance, the
one-photon population (the small parameter of the elimination), and the
stability of everything under a larger Fock truncation.
"""

import numpy as np

from entangler import analysis, dynamics, model, schedules
from entangler.experiments import full_vacuum_state, reduced_basis_state
from entangler.qops import partial_trace

grid = np.linspace(0.0, 20.0, 201)
rho0_red = reduced_basis_state("uu")

for label, sched in (
    ("constant 5.6 kHz", schedules.Constant(5.6)),
    ("exponential 100 e^(-0.8 t)", schedules.Exponential(100.0, 0.8)),
):
    print(f"profile: {label}")
    for fock in (5, 7):
        params = model.PhysicalParams(fock_dim=fock)
        full = model.build_full(params, sched)
        reduced = model.build_reduced(params, sched)
        traj_full = dynamics.evolve(full, full_vacuum_state(params), 20.0, grid, tol=1e-9)
        traj_red = dynamics.evolve(reduced, rho0_red, 20.0, grid, tol=1e-9)
        atoms = dynamics.Trajectory(
            grid, [partial_trace(s, (0, 1)) for s in traj_full.states], {"params": params}
        )
        eps = analysis.norm_error(atoms, traj_red)
        diag = model.correction_diagnostic(traj_full)
        print(
            f"  fock_dim={fock}: eps = max_t |rho_exact - rho_reduced|_F = {eps:.5f}; "
            f"max <1|rho|1> population = {np.max(diag.one_photon_population):.5f}; "
            f"max neglected-term norm = {np.max(diag.correction_norm):.5f}"
        )
    print()

print("stronger cavity damping (gamma_b x10) tightens the reduction:")
params10 = model.PhysicalParams(gamma_b=20000.0)
full = model.build_full(params10, schedules.Constant(5.6))
reduced = model.build_reduced(params10, schedules.Constant(5.6))
traj_full = dynamics.evolve(full, full_vacuum_state(params10), 20.0, grid)
traj_red = dynamics.evolve(reduced, rho0_red, 20.0, grid)
atoms = dynamics.Trajectory(grid, [partial_trace(s, (0, 1)) for s in traj_full.states], {})
print(f"  eps at gamma_b = 20 MHz: {analysis.norm_error(atoms, traj_red):.6f}")
