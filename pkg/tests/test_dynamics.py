import numpy as np
import pytest
from scipy.linalg import expm

from entangler import analysis, dynamics, model, schedules
from entangler.errors import (
    DegenerateSteadyStateError,
    IntegrationError,
    LayoutError,
    NumericalError,
)
from entangler.qops import (
    DensityMatrix,
    Operator,
    SpaceLayout,
    TWO_QUBITS,
    basis_ket,
    sigma_lower,
)


def random_hermitian(rng, d, scale=10.0):
    m = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return scale * (m + m.conj().T) / 2


def random_model(rng, layout, n_jumps=2, autonomous=True):
    d = layout.dim
    h = random_hermitian(rng, d)
    jumps = []
    for _ in range(n_jumps):
        a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        jumps.append((float(rng.uniform(0.2, 5.0)), Operator(layout, a)))
    return model.LindbladModel(layout, h, jumps=jumps)


def random_state(rng, layout):
    m = rng.standard_normal((layout.dim, layout.dim)) + 1j * rng.standard_normal(
        (layout.dim, layout.dim)
    )
    m = m @ m.conj().T
    return DensityMatrix(layout, m / np.trace(m))


def test_liouvillian_zero_model():
    lay = SpaceLayout([2])
    m = model.LindbladModel(lay, np.zeros((2, 2)))
    assert np.array_equal(dynamics.liouvillian(m).matrix, np.zeros((4, 4)))


def test_liouvillian_dimension():
    m = model.build_reduced(model.PhysicalParams(), schedules.Constant(5.6))
    assert dynamics.liouvillian(m).matrix.shape == (16, 16)


def test_liouvillian_matches_direct_rhs_on_seeded_states():
    # oracle: apply the generator directly, no vectorization identities
    rng = np.random.default_rng(42)
    lay = SpaceLayout([2, 2])
    m = random_model(rng, lay)
    L = dynamics.liouvillian(m).matrix
    h = m.h_static
    for _ in range(20):
        rho = random_state(rng, lay).matrix
        direct = -1j * (h @ rho - rho @ h)
        for rate, op in m.jumps:
            a = op.matrix
            ad = a.conj().T
            direct += rate * (a @ rho @ ad - 0.5 * (ad @ a @ rho + rho @ ad @ a))
        via_l = dynamics.unvectorize(L @ dynamics.vectorize(rho), 4)
        assert np.max(np.abs(via_l - direct)) < 1e-11


def test_superoperator_preserves_trace_functional():
    rng = np.random.default_rng(5)
    for lay in (SpaceLayout([2]), SpaceLayout([2, 2]), SpaceLayout([3])):
        m = random_model(rng, lay)
        L = dynamics.liouvillian(m).matrix
        tr_vec = dynamics.vectorize(np.eye(lay.dim))
        assert np.max(np.abs(tr_vec.conj() @ L)) < 1e-9


def test_liouvillian_spectra_dissipative_on_seeded_models():
    rng = np.random.default_rng(6)
    for _ in range(10):
        lay = SpaceLayout([2, 2])
        m = random_model(rng, lay, n_jumps=int(rng.integers(1, 4)))
        eigs = np.linalg.eigvals(dynamics.liouvillian(m).matrix)
        assert np.max(np.real(eigs)) <= 1e-8


def test_evolve_zero_generator_constant():
    lay = SpaceLayout([2])
    m = model.LindbladModel(lay, np.zeros((2, 2)))
    rho0 = DensityMatrix(lay, np.diag([0.25, 0.75]).astype(complex))
    traj = dynamics.evolve(m, rho0, 1.0, np.linspace(0, 1, 11))
    for s in traj.states:
        assert np.allclose(s.matrix, rho0.matrix, atol=1e-12)


@pytest.mark.parametrize("method", ["auto", "ode"])
def test_evolve_single_qubit_decay_law(method):
    gamma = 80.0
    lay = SpaceLayout([2])
    m = model.LindbladModel(
        lay,
        np.zeros((2, 2)),
        jumps=[(gamma, sigma_lower(0, lay))],
        autonomous=(method != "ode"),
    )
    rho0 = DensityMatrix.from_ket(lay, basis_ket(lay, [1]))
    grid = np.linspace(0, 0.1, 21)
    traj = dynamics.evolve(m, rho0, 0.1, grid, tol=1e-10, method=method)
    excited = np.array([np.real(s.matrix[1, 1]) for s in traj.states])
    assert np.max(np.abs(excited - np.exp(-gamma * grid))) < 1e-6


def test_evolve_matches_expm_oracle_reduced_model():
    # frozen generator exponential as the independent propagator
    m = model.build_reduced(model.PhysicalParams(), schedules.Constant(5.6))
    lay = m.layout
    rho0 = DensityMatrix.from_ket(lay, basis_ket(lay, (0, 1)))
    grid = np.linspace(0, 1.0, 9)
    L = dynamics.liouvillian(m).matrix
    oracle = [
        dynamics.unvectorize(expm(L * t) @ dynamics.vectorize(rho0.matrix), 4)
        for t in grid
    ]
    for method in ("ode", "auto"):
        traj = dynamics.evolve(m, rho0, 1.0, grid, tol=1e-10, method=method)
        worst = max(
            np.max(np.abs(s.matrix - o)) for s, o in zip(traj.states, oracle)
        )
        assert worst < 1e-6, f"method={method}: {worst}"


def test_evolve_oracle_equivalence_seeded_autonomous_models():
    rng = np.random.default_rng(12)
    for lay in (SpaceLayout([3]), SpaceLayout([2, 2])):
        m = random_model(rng, lay)
        rho0 = random_state(rng, lay)
        grid = np.linspace(0, 0.5, 10)
        L = dynamics.liouvillian(m).matrix
        traj = dynamics.evolve(m, rho0, 0.5, grid, tol=1e-10, method="ode")
        for t, s in zip(grid, traj.states):
            o = dynamics.unvectorize(
                expm(L * t) @ dynamics.vectorize(rho0.matrix), lay.dim
            )
            assert np.max(np.abs(s.matrix - o)) < 1e-6


def test_evolve_refinement_convergence_time_dependent():
    m = model.build_reduced(model.PhysicalParams(), schedules.Exponential(100.0, 0.8))
    rho0 = DensityMatrix.from_ket(TWO_QUBITS, basis_ket(TWO_QUBITS, (0, 0)))
    grid = np.linspace(0, 5.0, 26)
    tol = 1e-9
    a = dynamics.evolve(m, rho0, 5.0, grid, tol=tol)
    b = dynamics.evolve(m, rho0, 5.0, grid, tol=tol / 10.0)
    worst = max(
        np.linalg.norm(sa.matrix - sb.matrix) for sa, sb in zip(a.states, b.states)
    )
    assert worst < 10.0 * tol


def test_trajectory_invariants_on_integrated_runs():
    m = model.build_reduced(model.PhysicalParams(), schedules.Exponential(100.0, 0.8))
    rho0 = DensityMatrix.from_ket(TWO_QUBITS, basis_ket(TWO_QUBITS, (1, 1)))
    traj = dynamics.evolve(m, rho0, 10.0, np.linspace(0, 10, 101), tol=1e-9)
    for s in traj.states:
        assert abs(np.trace(s.matrix) - 1.0) <= 1e-6
        assert np.linalg.norm(s.matrix - s.matrix.conj().T) <= 1e-8
        assert np.min(np.linalg.eigvalsh((s.matrix + s.matrix.conj().T) / 2)) >= -1e-6


def test_evolve_rejects_bad_inputs():
    m = model.build_reduced(model.PhysicalParams(), schedules.Constant(5.6))
    lay1 = SpaceLayout([2])
    wrong = DensityMatrix.from_ket(lay1, basis_ket(lay1, [0]))
    rho0 = DensityMatrix.from_ket(TWO_QUBITS, basis_ket(TWO_QUBITS, (0, 0)))
    with pytest.raises(LayoutError):
        dynamics.evolve(m, wrong, 1.0)
    with pytest.raises(ValueError):
        dynamics.evolve(m, rho0, -1.0)
    with pytest.raises(ValueError):
        dynamics.evolve(m, rho0, 1.0, np.array([0.0, 0.5, 0.25]))
    with pytest.raises(ValueError):
        dynamics.evolve(m, rho0, 1.0, method="magic")


def test_state_between_matches_direct_evolution():
    m = model.build_reduced(model.PhysicalParams(), schedules.Constant(5.6))
    rho0 = DensityMatrix.from_ket(TWO_QUBITS, basis_ket(TWO_QUBITS, (1, 1)))
    grid = np.linspace(0.0, 2.0, 5)
    traj = dynamics.evolve(m, rho0, 2.0, grid)
    mid = dynamics.state_between(m, traj.states[1], float(grid[1]), float(grid[3]))
    assert np.max(np.abs(mid.matrix - traj.states[3].matrix)) < 1e-9


def test_steady_states_unique_matches_analytic():
    params = model.PhysicalParams()
    d = model.derive(params)
    m = model.build_reduced(params, schedules.Constant(5.6))
    dim, basis = dynamics.steady_states(m)
    assert dim == 1
    psi = model.analytic_steady_state(5.6, d.alpha)
    assert np.linalg.norm(basis[0].matrix - np.outer(psi, psi.conj())) < 1e-7


def test_steady_states_degenerate_without_detuning():
    m = model.build_reduced(model.PhysicalParams(), schedules.Constant(0.0))
    dim, basis = dynamics.steady_states(m)
    assert dim >= 2
    assert len(basis) == dim


def test_steady_states_single_qubit_ground():
    lay = SpaceLayout([2])
    m = model.LindbladModel(lay, np.zeros((2, 2)), jumps=[(1.3, sigma_lower(0, lay))])
    dim, basis = dynamics.steady_states(m)
    assert dim == 1
    assert np.allclose(basis[0].matrix, np.diag([1.0, 0.0]), atol=1e-10)


def test_spectral_gap_single_qubit():
    gamma = 2.6
    lay = SpaceLayout([2])
    m = model.LindbladModel(lay, np.zeros((2, 2)), jumps=[(gamma, sigma_lower(0, lay))])
    # eigenvalues of this generator are {0, -gamma, -gamma/2, -gamma/2}
    eigs = np.sort(np.real(np.linalg.eigvals(dynamics.liouvillian(m).matrix)))
    assert np.allclose(eigs, [-gamma, -gamma / 2, -gamma / 2, 0.0], atol=1e-12)
    assert dynamics.spectral_gap(m) == pytest.approx(gamma / 2, abs=1e-10)


def test_spectral_gap_zero_generator_errors():
    lay = SpaceLayout([2])
    m = model.LindbladModel(lay, np.zeros((2, 2)))
    with pytest.raises(NumericalError):
        dynamics.spectral_gap(m)


def test_spectral_gap_degenerate_errors():
    m = model.build_reduced(model.PhysicalParams(), schedules.Constant(0.0))
    with pytest.raises(DegenerateSteadyStateError):
        dynamics.spectral_gap(m)


def test_spectral_gap_positive_at_default_point():
    m = model.build_reduced(model.PhysicalParams(), schedules.Constant(5.6))
    assert dynamics.spectral_gap(m) > 0.0


def test_attractivity_from_basis_states():
    params = model.PhysicalParams()
    m = model.build_reduced(params, schedules.Constant(5.6))
    gap = dynamics.spectral_gap(m)
    window = 10.0 / gap
    _, basis = dynamics.steady_states(m)
    evals, evecs = np.linalg.eigh(basis[0].matrix)
    target = evecs[:, -1]
    for idx in [(0, 0), (0, 1), (1, 0), (1, 1)]:
        rho0 = DensityMatrix.from_ket(TWO_QUBITS, basis_ket(TWO_QUBITS, idx))
        traj = dynamics.evolve(m, rho0, window, np.linspace(0, window, 50))
        assert analysis.fidelity(traj.states[-1], target) >= 0.999


def test_vectorize_round_trip_column_stacking():
    m = np.arange(16, dtype=complex).reshape(4, 4)
    v = dynamics.vectorize(m)
    assert v[1] == m[1, 0]  # column stacking, not row stacking
    assert np.array_equal(dynamics.unvectorize(v, 4), m)
