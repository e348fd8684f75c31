import math

import numpy as np
import pytest

from seqdisc.arc import min_runs
from seqdisc.errors import DimensionMismatch, IndexOutOfRange, NotDifferent
from seqdisc.linalg import basis_state, fourier_state, haar_state, haar_unitary
from seqdisc.simulator import (
    eliminate_tournament,
    pauli_matrix,
    pauli_one_run_impossible,
    pauli_two_run_protocol,
    run_protocol,
)
from seqdisc.synthesis import synthesize_protocol

X = np.array([[0, 1], [1, 0]])
Z = np.diag([1, -1])
I2 = np.eye(2)


def _by_label(records):
    return {r.label: r for r in records}


def test_in_pair_truths_are_deterministic(rng):
    u, v = haar_unitary(3, rng), haar_unitary(3, rng)
    p = synthesize_protocol(u, v)
    recs = _by_label(run_protocol(p, u, 500, seed=1))
    assert recs["U"].counts == 500 and recs["U"].probability == 1.0
    recs = _by_label(run_protocol(p, v, 500, seed=1))
    assert recs["V"].counts == 500


def test_third_truth_frequencies_within_binomial_bands(rng):
    u, v, t = (haar_unitary(3, rng) for _ in range(3))
    p = synthesize_protocol(u, v)
    out = p.run(t)
    expected = {"U": abs(np.vdot(p.branch_u_output, out)) ** 2, "V": abs(np.vdot(p.branch_v_output, out)) ** 2}
    shots = 20_000
    recs = _by_label(run_protocol(p, t, shots, seed=7))
    for label, prob in expected.items():
        sigma = math.sqrt(shots * prob * (1 - prob))
        assert abs(recs[label].counts - shots * prob) <= 3 * sigma + 1
        assert recs[label].probability == pytest.approx(prob, abs=1e-7)
    assert sum(r.probability for r in recs.values()) == pytest.approx(1, abs=1e-9)
    assert sum(r.counts for r in recs.values()) == shots


def test_run_protocol_is_deterministic(rng):
    u, v, t = (haar_unitary(2, rng) for _ in range(3))
    p = synthesize_protocol(u, v)
    a = run_protocol(p, t, 1000, seed=42)
    b = run_protocol(p, t, 1000, seed=42)
    assert a == b
    assert run_protocol(p, t, 1000, seed=43) != a


def test_run_protocol_dimension_check(rng):
    p = synthesize_protocol(Z, I2)
    with pytest.raises(DimensionMismatch):
        run_protocol(p, np.eye(3), 10, 0)


def test_counts_prefix_consistency(rng):
    # shot i draws the same variate whatever the batch size
    u, v, t = (haar_unitary(2, rng) for _ in range(3))
    p = synthesize_protocol(u, v)
    small = run_protocol(p, t, 1, seed=5)
    big = run_protocol(p, t, 2, seed=5)
    first = [r.label for r in small if r.counts][0]
    assert _by_label(big)[first].counts >= 1


def test_tournament_two_candidates():
    t = eliminate_tournament([Z, I2], 0, seed=0)
    assert t.survivor == 0 and t.total_runs == 1 and len(t.rounds) == 1


def test_tournament_paulis():
    t = eliminate_tournament([Z, I2, X], 2, seed=0)
    assert t.survivor == 2 and t.total_runs <= 2
    assert t.max_pair_runs == 1


def test_tournament_rejects_degenerate():
    with pytest.raises(NotDifferent):
        eliminate_tournament([Z, np.exp(0.4j) * Z, X], 0, seed=0)
    with pytest.raises(IndexOutOfRange):
        eliminate_tournament([Z, X], 5, seed=0)


def test_tournament_random(rng):
    for trial in range(100):
        cands = [haar_unitary(2, rng) for _ in range(5)]
        truth = int(rng.integers(0, 5))
        t = eliminate_tournament(cands, truth, seed=trial)
        assert t.survivor == truth
        n_max = max(min_runs(a, b) for i, a in enumerate(cands) for b in cands[i + 1:])
        assert t.max_pair_runs == n_max
        assert n_max <= t.total_runs or len(t.rounds) == 4
        assert t.total_runs <= 4 * n_max
        assert len(t.rounds) == 4 and len({r.eliminated for r in t.rounds}) == 4
        assert t.total_runs == sum(r.num_runs for r in t.rounds)


def test_pauli_matrices():
    assert np.array_equal(pauli_matrix(2, 1, 0).matrix, X)
    assert np.allclose(pauli_matrix(2, 0, 1).matrix, Z)
    w = np.exp(2j * np.pi / 3)
    s = pauli_matrix(3, 1, 2).matrix
    for k in range(3):
        col = s[:, k]
        assert col[(k + 1) % 3] == pytest.approx(w ** (2 * k))
        assert np.count_nonzero(np.abs(col) > 1e-12) == 1
    with pytest.raises(IndexOutOfRange):
        pauli_matrix(3, 3, 0)


@pytest.mark.parametrize("d", [2, 3, 5])
def test_pauli_phase_identity(d):
    w = np.exp(2j * np.pi / d)
    psi = np.kron(basis_state(d, 0), fourier_state(d, 0))
    for m in range(d):
        for n in range(d):
            s = pauli_matrix(d, m, n).matrix
            expected = w ** (-m * n) * np.kron(basis_state(d, m), fourier_state(d, n))
            assert np.linalg.norm(np.kron(s, s) @ psi - expected) <= 1e-10


def test_pauli_two_run_examples():
    proto = pauli_two_run_protocol(2)
    assert proto.identify(np.eye(2)) == ((0, 0), pytest.approx(1.0))
    out = proto.output(pauli_matrix(2, 1, 1))
    assert np.allclose(out, -np.kron(basis_state(2, 1), fourier_state(2, 1)))
    assert proto.identify(pauli_matrix(2, 1, 1))[0] == (1, 1)


def test_pauli_exhaustive_d3():
    proto = pauli_two_run_protocol(3)
    for m in range(3):
        for n in range(3):
            readout, prob = proto.identify(pauli_matrix(3, m, n))
            assert readout == (m, n) and prob == pytest.approx(1, abs=1e-12)


def test_pauli_sampling():
    proto = pauli_two_run_protocol(3)
    counts = proto.sample(pauli_matrix(3, 2, 1), 300, seed=9)
    assert counts[2, 1] == 300 and counts.sum() == 300


def test_pauli_one_run_impossible():
    assert pauli_one_run_impossible(2, 0, 0, states=[basis_state(2, 0)])
    # the images of e0 under sigma_00 and sigma_01 coincide
    assert np.allclose(pauli_matrix(2, 0, 0).matrix @ basis_state(2, 0), pauli_matrix(2, 0, 1).matrix @ basis_state(2, 0))
    assert pauli_one_run_impossible(2, 100, 1)
    assert pauli_one_run_impossible(3, 100, 2)


def test_pauli_one_run_check_can_fail():
    # overlaps never exceed 1, so with tol = 1 no pair counts as non-orthogonal
    assert not pauli_one_run_impossible(3, 5, 0, tol=1.0)
