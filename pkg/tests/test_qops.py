import numpy as np
import pytest
from scipy.linalg import expm

from entangler.errors import LayoutError
from entangler.qops import (
    DensityMatrix,
    Operator,
    SpaceLayout,
    TWO_QUBITS,
    annihilator,
    basis_ket,
    collective_lowering,
    dissipator,
    hermiticity_defect,
    partial_trace,
    sigma_lower,
    singlet_ket,
    tensor,
)

SIG = np.array([[0, 1], [0, 0]], dtype=complex)


def test_layout_basics():
    lay = SpaceLayout([2, 2, 3])
    assert lay.dim == 12
    assert lay.n_factors == 3
    assert lay == SpaceLayout((2, 2, 3))
    with pytest.raises(LayoutError):
        SpaceLayout([2, 0])


def test_tensor_identity_case():
    eye = tensor(TWO_QUBITS, {})
    assert np.array_equal(eye.matrix, np.eye(4))


def test_tensor_two_factor_product():
    a = np.array([[1, 2], [3, 4]], dtype=complex)
    b = np.array([[0, 1j], [-1j, 5]], dtype=complex)
    composed = tensor(TWO_QUBITS, {0: a}) @ tensor(TWO_QUBITS, {1: b})
    assert np.allclose(composed.matrix, np.kron(a, b))


def test_tensor_embedding_matches_index_oracle():
    # independent oracle: walk basis states (a, b, c) by index arithmetic
    lay = SpaceLayout([2, 2, 3])
    got = tensor(lay, {0: SIG}).matrix
    expected = np.zeros((12, 12), dtype=complex)
    for a in range(2):
        for b in range(2):
            for c in range(3):
                for a2 in range(2):
                    row = (a * 2 + b) * 3 + c
                    col = (a2 * 2 + b) * 3 + c
                    expected[row, col] += SIG[a, a2]
    assert np.array_equal(got, expected)


def test_tensor_dimension_mismatch_rejected():
    with pytest.raises(LayoutError):
        tensor(TWO_QUBITS, {0: np.eye(3)})
    with pytest.raises(LayoutError):
        tensor(TWO_QUBITS, {5: np.eye(2)})


def test_tensor_embeddings_on_disjoint_factors_commute():
    lay = SpaceLayout([2, 3, 2])
    rng = np.random.default_rng(3)
    a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    b = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    ea = tensor(lay, {1: a})
    eb = tensor(lay, {2: b})
    assert np.allclose((ea @ eb).matrix, (eb @ ea).matrix)
    # and multiplying the embeddings equals embedding the pair
    assert np.allclose((ea @ eb).matrix, tensor(lay, {1: a, 2: b}).matrix)


def test_tensor_associative_dimension_multiplicative():
    lay = SpaceLayout([2, 2, 3])
    rng = np.random.default_rng(4)
    mats = [
        rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        for d in lay.factor_dims
    ]
    full = tensor(lay, dict(enumerate(mats))).matrix
    assert full.shape == (12, 12)
    assert np.allclose(full, np.kron(np.kron(mats[0], mats[1]), mats[2]))


def test_sigma_lower_definition():
    lone = SpaceLayout([2])
    s = sigma_lower(0, lone).matrix
    up, down = basis_ket(lone, [0]), basis_ket(lone, [1])
    assert up.conj() @ s @ down == 1.0
    assert np.count_nonzero(s) == 1
    # number operator counts the |d> population
    n = s.conj().T @ s
    assert np.allclose(n @ down, down)
    assert np.allclose(n @ up, 0.0)


def test_sigma_lower_annihilates_singlet():
    s1 = sigma_lower(0, TWO_QUBITS).matrix
    s2 = sigma_lower(1, TWO_QUBITS).matrix
    assert np.max(np.abs((s1 + s2) @ singlet_ket())) == 0.0


def test_sigma_lower_index_checks():
    with pytest.raises(LayoutError):
        sigma_lower(2, TWO_QUBITS)
    with pytest.raises(LayoutError):
        sigma_lower(2, SpaceLayout([2, 2, 3]))


def test_annihilator_smallest_truncation():
    assert np.array_equal(annihilator(2).matrix, [[0, 1], [0, 0]])
    with pytest.raises(LayoutError):
        annihilator(1)


def test_annihilator_commutator_below_truncation():
    n_c = 6
    b = annihilator(n_c).matrix
    comm = b @ b.conj().T - b.conj().T @ b
    # canonical on levels 0..n_c-2; broken only at the top level
    assert np.allclose(comm[: n_c - 1, : n_c - 1], np.eye(n_c - 1))
    assert comm[n_c - 1, n_c - 1] != 1.0


@pytest.mark.parametrize(
    "beta,n_c",
    [(0.2, 12), (0.3, 14), (-0.7, 26), (1.0, 38)],
)
def test_displacement_identity_on_low_subspace(beta, n_c):
    # oracle: matrix exponential of the displacement generator; the identity
    # holds entrywise on levels n <= n_c/2 once the truncation leaves enough
    # headroom above the subspace (the margin needed grows with |beta|;
    # beta = 0.2 is the scheme's own displacement at the default drive)
    b = annihilator(n_c).matrix
    u = expm(beta * (b - b.conj().T))
    displaced = u @ b @ u.conj().T
    sub = slice(0, n_c // 2 + 1)
    assert np.max(np.abs(displaced[sub, sub] - (b + beta * np.eye(n_c))[sub, sub])) < 1e-6


def test_collective_lowering_symmetric_and_weighted():
    s1 = sigma_lower(0, TWO_QUBITS).matrix
    s2 = sigma_lower(1, TWO_QUBITS).matrix
    assert np.allclose(collective_lowering(200.0, 200.0, 200.0, TWO_QUBITS).matrix, s1 + s2)
    eta = 0.13
    j = collective_lowering(150.0, (1 + eta) * 150.0, 150.0, TWO_QUBITS)
    assert np.allclose(j.matrix, s1 + (1 + eta) * s2)
    # no excitation to lower in |uu>
    assert np.max(np.abs(j.matrix @ basis_ket(TWO_QUBITS, (0, 0)))) == 0.0
    with pytest.raises(ValueError):
        collective_lowering(1.0, 1.0, 0.0, TWO_QUBITS)


def test_dissipator_zero_and_decay():
    lay = SpaceLayout([2])
    zero = Operator(lay, np.zeros((2, 2)))
    rho_d = DensityMatrix.from_ket(lay, basis_ket(lay, [1]))
    assert np.array_equal(dissipator(zero, rho_d), np.zeros((2, 2)))
    out = dissipator(sigma_lower(0, lay), rho_d)
    assert np.allclose(out, np.diag([1.0, -1.0]))


def test_dissipator_traceless_on_seeded_inputs():
    rng = np.random.default_rng(11)
    lay = SpaceLayout([2, 3])
    for _ in range(25):
        a = Operator(lay, rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6)))
        m = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
        m = m @ m.conj().T
        rho = DensityMatrix(lay, m / np.trace(m))
        assert abs(np.trace(dissipator(a, rho))) < 1e-10


def test_dissipator_layout_mismatch():
    a = sigma_lower(0, TWO_QUBITS)
    rho = DensityMatrix.from_ket(SpaceLayout([2]), basis_ket(SpaceLayout([2]), [0]))
    with pytest.raises(LayoutError):
        dissipator(a, rho)


def test_partial_trace_product_state():
    lay = SpaceLayout([2, 3])
    rho_a = np.diag([0.25, 0.75]).astype(complex)
    m = np.zeros((3, 3), dtype=complex)
    m[0, 0] = 0.5
    m[1, 1] = 0.5
    rho = DensityMatrix(lay, np.kron(rho_a, m))
    red = partial_trace(rho, {0})
    assert np.allclose(red.matrix, rho_a)
    assert abs(np.trace(red.matrix) - 1.0) < 1e-12


def test_partial_trace_bell_state_oracle():
    # hand computation: Bell x vacuum traced over the cavity gives the Bell
    # projector back; tracing to one qubit leaves the maximally mixed state
    lay = SpaceLayout([2, 2, 3])
    bell = np.zeros(4, dtype=complex)
    bell[0] = bell[3] = 1 / np.sqrt(2)
    vac = np.zeros(3, dtype=complex)
    vac[0] = 1.0
    rho = DensityMatrix.from_ket(lay, np.kron(bell, vac))
    atoms = partial_trace(rho, (0, 1))
    assert np.allclose(atoms.matrix, np.outer(bell, bell.conj()))
    one = partial_trace(rho, (0,))
    assert np.allclose(one.matrix, np.eye(2) / 2)


def test_partial_trace_empty_keep_rejected():
    lay = SpaceLayout([2, 2])
    rho = DensityMatrix.from_ket(lay, basis_ket(lay, (0, 0)))
    with pytest.raises(LayoutError):
        partial_trace(rho, set())


def test_density_matrix_validation():
    with pytest.raises(ValueError):
        DensityMatrix(TWO_QUBITS, np.eye(4))  # trace 4
    bad = np.diag([1.5, -0.5, 0.0, 0.0]).astype(complex)
    with pytest.raises(ValueError):
        DensityMatrix(TWO_QUBITS, bad)
    skew = np.eye(4, dtype=complex) / 4
    skew[0, 1] = 1e-6
    with pytest.raises(ValueError):
        DensityMatrix(TWO_QUBITS, skew)


def test_operator_immutability():
    op = sigma_lower(0, TWO_QUBITS)
    with pytest.raises(ValueError):
        op.matrix[0, 0] = 9.0
    with pytest.raises(AttributeError):
        op.matrix = np.eye(4)


def test_hermiticity_defect():
    assert hermiticity_defect(np.eye(3)) == 0.0
    m = np.eye(3, dtype=complex)
    m[0, 1] = 2e-7
    assert abs(hermiticity_defect(m) - 2e-7) < 1e-20


def test_sign_conventions_pin_steady_state():
    # J and H = dw*Jz + alpha*Jx both annihilate the balanced superposition
    # (dw, alpha, -alpha, 0)/Omega; this fixes every sign convention
    dw, alpha = 5.6, -40.0
    s1 = sigma_lower(0, TWO_QUBITS).matrix
    s2 = sigma_lower(1, TWO_QUBITS).matrix
    j = s1 + s2
    jx = j + j.conj().T
    jz = s1.conj().T @ s1 - s2.conj().T @ s2
    psi = np.array([dw, alpha, -alpha, 0.0], dtype=complex)
    psi /= np.linalg.norm(psi)
    h = dw * jz + alpha * jx
    assert np.max(np.abs(j @ psi)) < 1e-12
    assert np.max(np.abs(h @ psi)) < 1e-12
