import numpy as np
import pytest

from entangler import analysis, dynamics, model, schedules
from entangler.analysis import concurrence, concurrence_pure, fidelity, norm_error, quad_fit
from entangler.errors import LayoutError
from entangler.qops import (
    DensityMatrix,
    SpaceLayout,
    TWO_QUBITS,
    basis_ket,
    singlet_ket,
)


def haar_unitary(rng, d=2):
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_two_qubit_state(rng, rank=4):
    a = rng.standard_normal((4, rank)) + 1j * rng.standard_normal((4, rank))
    m = a @ a.conj().T
    return m / np.trace(m)


def test_concurrence_singlet_and_product():
    assert concurrence(np.outer(singlet_ket(), singlet_ket().conj())) == pytest.approx(1.0, abs=1e-12)
    uu = basis_ket(TWO_QUBITS, (0, 0))
    assert concurrence(np.outer(uu, uu.conj())) == pytest.approx(0.0, abs=1e-12)


def test_concurrence_steady_state_at_99_percent_point():
    psi = model.analytic_steady_state(0.14 * 40.0, -40.0)
    c = concurrence(np.outer(psi, psi.conj()))
    assert c == pytest.approx(0.9903, abs=1e-4)
    assert c == pytest.approx(model.steady_concurrence(0.14), abs=1e-12)


def test_concurrence_rank2_mixture_against_convex_roof_oracle():
    # 0.5 |uu><uu| + 0.5 singlet projector; brute-force minimum over
    # two-element decompositions rho = sum |w_i><w_i| parametrized by U(2)
    uu = basis_ket(TWO_QUBITS, (0, 0))
    rho = 0.5 * np.outer(uu, uu.conj()) + 0.5 * np.outer(singlet_ket(), singlet_ket().conj())
    evals, evecs = np.linalg.eigh(rho)
    keep = evals > 1e-12
    sub = evecs[:, keep] * np.sqrt(evals[keep])  # columns w_i of one decomposition
    assert sub.shape[1] == 2
    best = np.inf
    for theta in np.linspace(0.0, np.pi / 2, 61):
        for phi in np.linspace(0.0, 2 * np.pi, 61, endpoint=False):
            u = np.array(
                [
                    [np.cos(theta), np.exp(1j * phi) * np.sin(theta)],
                    [-np.exp(-1j * phi) * np.sin(theta), np.cos(theta)],
                ]
            )
            w = sub @ u.T
            avg = 0.0
            for i in range(2):
                p = float(np.real(w[:, i].conj() @ w[:, i]))
                if p > 1e-14:
                    avg += p * concurrence_pure(w[:, i] / np.sqrt(p))
            best = min(best, avg)
    formula = concurrence(rho)
    assert formula == pytest.approx(0.5, abs=1e-12)
    # roof property: no decomposition averages below the formula value
    assert best >= formula - 1e-9
    assert best == pytest.approx(formula, abs=2e-3)


def test_concurrence_matches_eigenvalue_route_on_seeded_states():
    sysy = np.kron([[0, -1j], [1j, 0]], [[0, -1j], [1j, 0]])
    rng = np.random.default_rng(17)
    for _ in range(50):
        rho = random_two_qubit_state(rng)
        ev = np.linalg.eigvals(rho @ sysy @ rho.conj() @ sysy)
        lam = np.sort(np.sqrt(np.abs(np.real(ev))))
        reference = max(0.0, lam[3] - lam[2] - lam[1] - lam[0])
        assert concurrence(rho) == pytest.approx(reference, abs=1e-10)


def test_concurrence_local_unitary_invariance():
    rng = np.random.default_rng(23)
    for _ in range(30):
        rho = random_two_qubit_state(rng, rank=int(rng.integers(1, 5)))
        u = np.kron(haar_unitary(rng), haar_unitary(rng))
        rotated = u @ rho @ u.conj().T
        assert abs(concurrence(rotated) - concurrence(rho)) < 1e-9


def test_concurrence_range_and_pure_state_formula():
    rng = np.random.default_rng(29)
    for _ in range(50):
        rho = random_two_qubit_state(rng)
        assert 0.0 <= concurrence(rho) <= 1.0 + 1e-12
        v = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        v /= np.linalg.norm(v)
        assert concurrence(np.outer(v, v.conj())) == pytest.approx(
            concurrence_pure(v), abs=1e-10
        )


def test_concurrence_rejects_wrong_layout():
    with pytest.raises(LayoutError):
        concurrence(np.eye(3) / 3)
    lay = SpaceLayout([2])
    with pytest.raises(LayoutError):
        concurrence(DensityMatrix.from_ket(lay, basis_ket(lay, [0])))


def test_fidelity_trivials():
    psi = singlet_ket()
    rho = DensityMatrix.from_ket(TWO_QUBITS, psi)
    assert fidelity(rho, psi) == pytest.approx(1.0, abs=1e-12)
    assert fidelity(rho, basis_ket(TWO_QUBITS, (0, 0))) == pytest.approx(0.0, abs=1e-12)
    mixed = DensityMatrix(TWO_QUBITS, np.eye(4) / 4)
    assert fidelity(mixed, psi) == pytest.approx(0.25, abs=1e-12)
    with pytest.raises(LayoutError):
        fidelity(rho, np.array([1.0, 0.0]))


def _single_point_traj(mat):
    return dynamics.Trajectory(
        np.array([0.0]),
        [DensityMatrix(TWO_QUBITS, mat, validate=False)],
        {},
    )


def test_norm_error_identical_and_crafted_difference():
    m = model.build_reduced(model.PhysicalParams(), schedules.Constant(5.6))
    rho0 = DensityMatrix.from_ket(TWO_QUBITS, basis_ket(TWO_QUBITS, (0, 0)))
    traj = dynamics.evolve(m, rho0, 1.0, np.linspace(0, 1, 5))
    assert norm_error(traj, traj) == 0.0
    assert norm_error(traj, traj, "trace") == 0.0

    # rank-1 perturbation of known size: both norms equal |c| for c*|v><v|
    base = np.eye(4, dtype=complex) / 4
    v = np.array([0.5, 0.5, -0.5, 0.5])
    pert = base + 0.01 * np.outer(v, v)
    a, b = _single_point_traj(base), _single_point_traj(pert)
    assert norm_error(a, b, "frobenius") == pytest.approx(0.01, rel=1e-12)
    assert norm_error(a, b, "trace") == pytest.approx(0.01, rel=1e-12)


def test_norm_error_grid_mismatch_and_bad_kind():
    m = model.build_reduced(model.PhysicalParams(), schedules.Constant(5.6))
    rho0 = DensityMatrix.from_ket(TWO_QUBITS, basis_ket(TWO_QUBITS, (0, 0)))
    t1 = dynamics.evolve(m, rho0, 1.0, np.linspace(0, 1, 5))
    t2 = dynamics.evolve(m, rho0, 1.0, np.linspace(0, 1, 7))
    with pytest.raises(ValueError):
        norm_error(t1, t2)
    with pytest.raises(ValueError):
        norm_error(t1, t1, "operator")


def test_time_to_threshold_already_met_at_start():
    m = model.build_reduced(model.PhysicalParams(), schedules.Constant(5.6))
    rho0 = DensityMatrix.from_ket(TWO_QUBITS, singlet_ket())
    assert analysis.time_to_threshold(m, rho0, 0.5, 1.0, 5.0) == 0.0


def test_time_to_threshold_not_reached_marker():
    m = model.build_reduced(model.PhysicalParams(), schedules.Constant(5.6))
    rho0 = DensityMatrix.from_ket(TWO_QUBITS, basis_ket(TWO_QUBITS, (0, 0)))
    assert analysis.time_to_threshold(m, rho0, 1.0, 1.0, 1.0) is None


def test_time_to_threshold_weakly_increasing_in_fraction():
    # the first crossing time of a higher target can never come earlier
    m = model.build_reduced(model.PhysicalParams(), schedules.Constant(5.6))
    rho0 = DensityMatrix.from_ket(TWO_QUBITS, basis_ket(TWO_QUBITS, (1, 1)))
    fractions = [0.2, 0.5, 0.8, 0.95]
    times = [analysis.time_to_threshold(m, rho0, f, 0.99, 40.0) for f in fractions]
    assert all(t is not None for t in times)
    assert all(t2 >= t1 - 1e-9 for t1, t2 in zip(times, times[1:]))


def test_time_to_threshold_bisection_resolution():
    m = model.build_reduced(model.PhysicalParams(), schedules.Constant(5.6))
    rho0 = DensityMatrix.from_ket(TWO_QUBITS, basis_ket(TWO_QUBITS, (0, 1)))
    coarse = analysis.time_to_threshold(m, rho0, 0.9, 0.99, 30.0, grid_points=40)
    fine = analysis.time_to_threshold(m, rho0, 0.9, 0.99, 30.0, grid_points=900)
    assert abs(coarse - fine) < 5e-2


def test_time_to_threshold_input_validation():
    m = model.build_reduced(model.PhysicalParams(), schedules.Constant(5.6))
    rho0 = DensityMatrix.from_ket(TWO_QUBITS, basis_ket(TWO_QUBITS, (0, 0)))
    with pytest.raises(ValueError):
        analysis.time_to_threshold(m, rho0, 0.0, 1.0, 5.0)
    with pytest.raises(ValueError):
        analysis.time_to_threshold(m, rho0, 0.5, 0.0, 5.0)


def test_quad_fit_exact_quadratic():
    xs = np.linspace(-1, 2, 7)
    ys = 0.3 * xs**2 - 1.2 * xs + 0.05
    fit = quad_fit(xs, ys)
    assert fit.a2 == pytest.approx(0.3, abs=1e-12)
    assert fit.a1 == pytest.approx(-1.2, abs=1e-12)
    assert fit.a0 == pytest.approx(0.05, abs=1e-12)
    assert fit.residual == pytest.approx(0.0, abs=1e-12)


def test_quad_fit_matches_normal_equation_oracle():
    rng = np.random.default_rng(31)
    xs = np.linspace(0, 1, 11)
    ys = -0.06 * xs**2 - 0.002 * xs + 0.99 + 0.01 * rng.standard_normal(11)
    fit = quad_fit(xs, ys)
    # oracle: solve the 3x3 normal equations directly
    v = np.column_stack([xs**2, xs, np.ones_like(xs)])
    coef = np.linalg.solve(v.T @ v, v.T @ ys)
    assert fit.a2 == pytest.approx(coef[0], abs=1e-10)
    assert fit.a1 == pytest.approx(coef[1], abs=1e-10)
    assert fit.a0 == pytest.approx(coef[2], abs=1e-10)
    assert fit.residual >= 0.0


def test_quad_fit_invariant_under_reindexing():
    rng = np.random.default_rng(37)
    xs = np.linspace(0, 1, 9)
    ys = 0.5 * xs**2 + 0.1 * xs - 0.3 + 0.05 * rng.standard_normal(9)
    fit1 = quad_fit(xs, ys)
    order = rng.permutation(9)
    fit2 = quad_fit(xs[order], ys[order])
    assert fit1.a2 == pytest.approx(fit2.a2, abs=1e-12)
    assert fit1.residual == pytest.approx(fit2.residual, abs=1e-12)


def test_quad_fit_degenerate_inputs():
    with pytest.raises(ValueError):
        quad_fit([0.0, 1.0], [1.0, 2.0])
    with pytest.raises(ValueError):
        quad_fit([1.0, 1.0, 1.0, 1.0], [1.0, 2.0, 3.0, 4.0])
