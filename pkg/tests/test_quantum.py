import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hybrid_ids.quantum import (
    QuantumState,
    VqcWeights,
    angle_encode,
    apply_cnot,
    apply_rot,
    apply_ry,
    apply_rz,
    apply_strongly_entangling,
    dense_unitary_oracle,
    embed,
    embed_batch,
    embedding_gates,
    expval_z,
    init_weights,
    new_state,
    read_embeddings,
    read_weights,
    run_gates,
    write_embeddings,
    write_weights,
)
from hybrid_ids.quantum import oracle


def random_state(n, rng):
    v = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return QuantumState(n, v / np.linalg.norm(v))


def random_gates(n, count, rng):
    gates = []
    for _ in range(count):
        kind = rng.choice(["ry", "rz", "rot", "cnot"] if n > 1 else ["ry", "rz", "rot"])
        if kind == "cnot":
            c, t = rng.choice(n, size=2, replace=False)
            gates.append(("cnot", int(c), int(t)))
        elif kind == "rot":
            gates.append(("rot", int(rng.integers(n)), *rng.uniform(-2 * np.pi, 2 * np.pi, 3)))
        else:
            gates.append((str(kind), int(rng.integers(n)), float(rng.uniform(-2 * np.pi, 2 * np.pi))))
    return gates


# -- state and single gates -------------------------------------------------------


def test_new_state():
    assert new_state(1).amplitudes.tolist() == [1, 0]
    s = new_state(3)
    assert s.amplitudes.shape == (8,) and s.amplitudes[0] == 1 and np.count_nonzero(s.amplitudes) == 1


@pytest.mark.parametrize("n", [0, 13, -1])
def test_new_state_range(n):
    with pytest.raises(ValueError):
        new_state(n)


def test_ry_examples(rng):
    s = random_state(3, rng)
    before = s.amplitudes.copy()
    assert np.array_equal(apply_ry(s, 1, 0.0).amplitudes, before)
    one = apply_ry(new_state(1), 0, math.pi).amplitudes
    assert np.allclose(one, [0, 1], atol=1e-15)
    half = apply_ry(new_state(1), 0, math.pi / 2).amplitudes
    assert np.allclose(half, [math.sqrt(2) / 2, math.sqrt(2) / 2], atol=1e-15)


def test_rz_examples(rng):
    s = random_state(2, rng)
    before = s.amplitudes.copy()
    assert np.allclose(apply_rz(s.copy(), 0, 0.0).amplitudes, before, atol=0)
    assert np.allclose(apply_rz(s.copy(), 1, 2 * math.pi).amplitudes, -before, atol=1e-15)
    z = apply_rz(new_state(1), 0, math.pi).amplitudes
    assert np.allclose(z, [np.exp(-1j * math.pi / 2), 0], atol=1e-15)
    assert abs(z[0]) ** 2 == pytest.approx(1.0, abs=1e-15)


def test_rot_collapses(rng):
    s = random_state(2, rng)
    assert np.allclose(apply_rot(s.copy(), 0, 0, 0, 0).amplitudes, s.amplitudes, atol=1e-15)
    th = 0.83
    assert np.allclose(apply_rot(s.copy(), 1, 0, th, 0).amplitudes, apply_ry(s.copy(), 1, th).amplitudes, atol=1e-14)
    a, b = 0.4, -1.7
    assert np.allclose(
        apply_rot(s.copy(), 0, a, 0, b).amplitudes, apply_rz(s.copy(), 0, a + b).amplitudes, atol=1e-14
    )


def test_cnot_examples(rng):
    s = apply_cnot(new_state(2), 0, 1)
    assert s.amplitudes.tolist() == [1, 0, 0, 0]
    ten = QuantumState(2, [0, 0, 1, 0])  # |10>, qubit 0 is the leftmost bit
    assert apply_cnot(ten, 0, 1).amplitudes.tolist() == [0, 0, 0, 1]
    r = random_state(3, rng)
    back = apply_cnot(apply_cnot(r.copy(), 2, 0), 2, 0)
    assert np.array_equal(back.amplitudes, r.amplitudes)


@pytest.mark.parametrize("args", [(0, 0), (0, 2), (-1, 0)])
def test_cnot_bad_indices(args):
    with pytest.raises((ValueError, IndexError)):
        apply_cnot(new_state(2), *args)


@pytest.mark.parametrize("fn", [apply_ry, apply_rz])
def test_single_qubit_index_range(fn):
    with pytest.raises(IndexError):
        fn(new_state(2), 2, 0.1)
    with pytest.raises(IndexError):
        apply_rot(new_state(2), 5, 0, 0, 0)
    with pytest.raises(IndexError):
        expval_z(new_state(2), 2)


def test_expval_examples():
    s = new_state(3)
    assert [expval_z(s, q) for q in range(3)] == [1.0, 1.0, 1.0]
    assert expval_z(QuantumState(2, [0, 1, 0, 0]), 1) == -1.0
    assert abs(expval_z(apply_ry(new_state(1), 0, math.pi / 2), 0)) < 1e-12


def test_gate_algebra(rng):
    for _ in range(20):
        s = random_state(3, rng)
        a, b = rng.uniform(-4, 4, 2)
        q = int(rng.integers(3))
        two = apply_ry(apply_ry(s.copy(), q, a), q, b)
        assert np.allclose(two.amplitudes, apply_ry(s.copy(), q, a + b).amplitudes, atol=1e-13)


# -- oracle ------------------------------------------------------------------------


def test_oracle_identity_and_kron():
    assert np.array_equal(dense_unitary_oracle([], 3), np.eye(8))
    th = 0.7
    u = dense_unitary_oracle([("ry", 0, th)], 2)
    assert np.allclose(u, np.kron(oracle.ry(th), np.eye(2)), atol=0)


def test_oracle_unitary(rng):
    for n in (1, 2, 3, 4):
        u = dense_unitary_oracle(random_gates(n, 15, rng), n)
        assert np.abs(u.conj().T @ u - np.eye(1 << n)).max() < 1e-12


def test_oracle_size_limit():
    with pytest.raises(ValueError):
        dense_unitary_oracle([], 5)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_kernels_match_oracle(n, rng):
    for _ in range(10):
        gates = random_gates(n, 25, rng)
        s = random_state(n, rng)
        fast = run_gates(s.copy(), gates).amplitudes
        ref = dense_unitary_oracle(gates, n) @ s.amplitudes
        assert np.abs(fast - ref).max() <= 1e-12


# -- circuit ---------------------------------------------------------------------


def test_angle_encode_product_state(rng):
    x = rng.random(5)
    s = angle_encode(new_state(5), x)
    assert np.allclose([expval_z(s, q) for q in range(5)], np.cos(x), atol=1e-12)


def test_angle_encode_single_feature():
    x = np.array([1.0, 0, 0])
    s = angle_encode(new_state(3), x)
    assert expval_z(s, 0) == pytest.approx(math.cos(1.0), abs=1e-12)
    assert expval_z(s, 1) == pytest.approx(1.0) and expval_z(s, 2) == pytest.approx(1.0)


def test_angle_encode_zero_is_identity():
    s = angle_encode(new_state(4), np.zeros(4))
    assert np.array_equal(s.amplitudes, new_state(4).amplitudes)


def test_angle_encode_dimension_mismatch():
    with pytest.raises(ValueError):
        angle_encode(new_state(3), np.zeros(4))


def test_angle_scale_knob(rng):
    x = rng.random(3)
    assert np.allclose(embed(x, None, angle_scale=math.pi), np.cos(math.pi * x), atol=1e-12)


def test_entangling_zero_angles_fixed_point():
    w = VqcWeights(np.zeros((3, 4, 3)))
    s = apply_strongly_entangling(new_state(4), w)
    assert np.allclose(s.amplitudes, new_state(4).amplitudes, atol=0)


def test_entangling_two_qubit_layer_rule(rng):
    s = random_state(2, rng)
    w = VqcWeights(np.zeros((1, 2, 3)))
    got = apply_strongly_entangling(s.copy(), w).amplitudes
    ref = apply_cnot(apply_cnot(s.copy(), 0, 1), 1, 0).amplitudes
    assert np.allclose(got, ref, atol=0)


def test_entangling_ranges_follow_layer_index():
    w = VqcWeights(np.zeros((4, 4, 3)))
    cnots = [g for g in embedding_gates(np.zeros(4), w) if g[0] == "cnot"]
    ranges = [(t - c) % 4 for _, c, t in cnots]
    assert ranges == [1] * 4 + [2] * 4 + [3] * 4 + [1] * 4


def test_entangling_single_qubit_has_no_cnot():
    w = init_weights(1, 3, 0)
    assert not [g for g in embedding_gates([0.3], w) if g[0] == "cnot"]


def test_entangling_shape_mismatch():
    with pytest.raises(ValueError):
        apply_strongly_entangling(new_state(3), init_weights(4, 1, 0))


def test_three_qubit_depth_two_matches_oracle(rng):
    w = init_weights(3, 2, seed=21)
    x = rng.random(3)
    gates = embedding_gates(x, w)
    ref = dense_unitary_oracle(gates, 3)[:, 0]
    s = apply_strongly_entangling(angle_encode(new_state(3), x), w)
    assert np.abs(s.amplitudes - ref).max() <= 1e-12


def test_embed_two_qubit_matches_oracle():
    w = init_weights(2, 2, seed=5)
    x = np.array([0.25, 0.9])
    psi = dense_unitary_oracle(embedding_gates(x, w), 2)[:, 0]
    ref = [oracle.oracle_expval_z(psi, q, 2) for q in range(2)]
    assert np.allclose(embed(x, w), ref, atol=1e-12)


def test_embed_zero_everything():
    assert embed(np.zeros(8), VqcWeights(np.zeros((2, 8, 3)))).tolist() == [1.0] * 8


def test_embed_deterministic(rng):
    w = init_weights(8, 2, 3)
    x = rng.random(8)
    assert np.array_equal(embed(x, w), embed(x.copy(), w))


def test_embed_dimension_mismatch():
    with pytest.raises(ValueError):
        embed(np.zeros(3), init_weights(4, 2, 0))


def test_init_weights_contract():
    a, b = init_weights(8, 2, 99), init_weights(8, 2, 99)
    assert a.angles.shape == (2, 8, 3) and a.angles.size == 48
    assert np.array_equal(a.angles, b.angles)
    assert np.all((a.angles >= 0) & (a.angles < 2 * np.pi))
    assert not np.array_equal(a.angles, init_weights(8, 2, 100).angles)
    with pytest.raises(ValueError):
        init_weights(8, 0, 1)


def test_weights_immutable():
    w = init_weights(2, 1, 0)
    with pytest.raises(ValueError):
        w.angles[0, 0, 0] = 1.0


def test_batch_threads_match_serial(rng):
    w = init_weights(6, 2, 1)
    X = rng.random((17, 6))
    assert np.array_equal(embed_batch(X, w, workers=1), embed_batch(X, w, workers=4))


def test_weights_and_embedding_files(tmp_path, rng):
    w = init_weights(4, 2, 8)
    write_weights(w, tmp_path / "w.txt")
    back = read_weights(tmp_path / "w.txt")
    assert np.array_equal(back.angles, w.angles) and back.seed == 8
    lines = (tmp_path / "w.txt").read_text().splitlines()
    assert lines[0].startswith("# depth=2 n_qubits=4 seed=8")
    assert float(lines[2]) == w.angles[0, 0, 0] and float(lines[3]) == w.angles[0, 0, 1]
    E = embed_batch(rng.random((3, 4)), w)
    write_embeddings(E, [0, 1, 1], tmp_path / "e.csv", 2, 8, 1.0)
    E2, y2 = read_embeddings(tmp_path / "e.csv")
    assert np.array_equal(E2, E) and y2.tolist() == [0, 1, 1]
    assert (tmp_path / "e.csv").read_text().startswith("# n_qubits=4 depth=2 seed=8 angle_scale=1.0")


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 8), st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_norm_preserved_random_circuits(n, depth, seed):
    rng = np.random.default_rng(seed)
    x = rng.random(n)
    w = init_weights(n, depth, seed)
    s = apply_strongly_entangling(angle_encode(new_state(n), x), w)
    run_gates(s, random_gates(n, 10, rng))
    assert abs(s.norm() - 1.0) <= 1e-10
    z = np.array([expval_z(s, q) for q in range(n)])
    assert np.all(np.abs(z) <= 1.0 + 1e-12)
