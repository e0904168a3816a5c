"""Error analysis: atomic decay, coupling asymmetry, frequency offset.

The scheme degrades gracefully: tiny atomic decay is invisible on the
20 ms timescale, coupling asymmetry turns the steady state mixed, and a
common frequency offset costs only a quadratic-in-offset concurrence
penalty at 20 ms.
"""

import numpy as np

from entangler import analysis, dynamics, model, schedules
from entangler.experiments import reduced_basis_state

rho0 = reduced_basis_state("uu")
grid = np.linspace(0.0, 20.0, 201)

print("atomic decay (constant 5.6 kHz profile):")
for gn in (0.0, 0.001, 0.1):
    params = model.PhysicalParams(gamma1=gn, gamma2=gn)
    reduced = model.build_reduced(params, schedules.Constant(5.6), include_atomic_decay=True)
    series = analysis.concurrence_series(dynamics.evolve(reduced, rho0, 20.0, grid))
    print(f"  gamma_n = {gn:5.3f} kHz: peak C = {np.max(series):.4f}, C(20 ms) = {series[-1]:.4f}")

print("\ncoupling asymmetry g2 = (1 + eta_g) g1 (constant 5.6 kHz):")
for eta in (0.0, 0.05, 0.1, 0.2):
    params = model.PhysicalParams(eta_g=eta)
    reduced = model.build_reduced(params, schedules.Constant(5.6))
    dim, basis = dynamics.steady_states(reduced)
    state = basis[0]
    print(
        f"  eta_g = {eta:4.2f}: steady purity = {state.purity():.4f}, "
        f"steady concurrence = {analysis.concurrence(state):.4f}"
    )

print("\ncommon frequency offset eta (detunings dw(1 + eta), dw(eta - 1)):")
etas = np.round(np.arange(0.0, 1.0001, 0.1), 10)
for name, sched in (
    ("constant", schedules.Constant(5.6)),
    ("exponential", schedules.Exponential(100.0, 0.8)),
):
    c20 = []
    for eta in etas:
        params = model.PhysicalParams(eta_omega=float(eta))
        reduced = model.build_reduced(params, sched)
        traj = dynamics.evolve(reduced, rho0, 20.0, grid)
        c20.append(analysis.concurrence(traj.states[-1]))
    fit = analysis.quad_fit(etas, c20)
    print(
        f"  {name:12s} C20(eta) fit: a2 = {fit.a2:+.4f}, a1 = {fit.a1:+.4f}, "
        f"a0 = {fit.a0:.4f} (rms {fit.residual:.1e}); C20(1) = {c20[-1]:.4f}"
    )
print("\n(the constant profile wins for eta > 0.2: a large initial splitting")
print(" amplifies the offset error before it has decayed away)")
