import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qjoin.decision import NotRealizable, construct_witness, iplus_range
from qjoin.fixtures import (
    CYCLE_LAMBDA,
    cycles_blocks,
    cycles_join,
    cycles_pattern,
    rank_two_star,
    rank_two_star_general,
)
from qjoin.model import EigenvalueList, MultiplicityMatrix
from qjoin.realization import (
    RealizationConfig,
    RealizationError,
    assemble_join,
    clique_join_pattern,
    haar_orthogonal,
    nowhere_zero_orthonormal_basis,
    realize,
    realize_clique_block,
    verify_realization,
)

CFG = RealizationConfig()


def _eigenspaces(A, values, tol=1e-8):
    w, Q = np.linalg.eigh(A)
    return {v: Q[:, np.abs(w - v) <= tol] for v in values}


def _coupling_structure(A_G, A_H, C, values):
    """Max off-block norm and the singular values of each diagonal block of S^T C T."""
    SG, SH = _eigenspaces(A_G, values), _eigenspaces(A_H, values)
    assert sum(b.shape[1] for b in SG.values()) == A_G.shape[0]
    assert sum(b.shape[1] for b in SH.values()) == A_H.shape[0]
    off = 0.0
    diag = {}
    for a in values:
        for b in values:
            blk = SG[a].T @ C @ SH[b]
            if a == b:
                diag[a] = np.linalg.svd(blk, compute_uv=False) if blk.size else np.zeros(0)
            elif blk.size:
                off = max(off, float(np.abs(blk).max()))
    return off, diag


def test_config_validation():
    with pytest.raises(ValueError):
        RealizationConfig(tol_residual=0)
    with pytest.raises(ValueError):
        RealizationConfig(tol_nonzero=-1)
    with pytest.raises(ValueError):
        RealizationConfig(max_retries=0)


def test_haar_orthogonal():
    U = haar_orthogonal(5, np.random.default_rng(1))
    np.testing.assert_allclose(U.T @ U, np.eye(5), atol=1e-12)
    np.testing.assert_array_equal(U, haar_orthogonal(5, np.random.default_rng(1)))


def test_clique_block_trivial():
    A, U = realize_clique_block((1,), EigenvalueList([0.25]))
    assert A.tolist() == [[0.25]] and U.tolist() == [[1.0]]


def test_clique_block_two_by_two():
    A, U = realize_clique_block((1, 1), EigenvalueList([-1.0, 1.0]))
    np.testing.assert_allclose(np.linalg.eigvalsh(A), [-1, 1], atol=1e-9)
    assert abs(A[0, 1]) > 1e-8
    np.testing.assert_allclose(U.T @ U, np.eye(2), atol=1e-9)


def test_clique_block_rejects_single_eigenvalue():
    with pytest.raises(ValueError):
        realize_clique_block((0, 2), EigenvalueList([-1.0, 1.0]))
    with pytest.raises(ValueError):
        realize_clique_block((1,), EigenvalueList([-1.0, 1.0]))


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(0, 3), min_size=3, max_size=5), st.integers(0, 2**32))
def test_clique_block_spectrum(v, seed):
    if sum(v) == 0 or (sum(v) >= 2 and sum(1 for x in v if x) < 2):
        return
    lam = EigenvalueList.default(len(v))
    cfg = RealizationConfig(seed=seed)
    A, U = realize_clique_block(v, lam, cfg)
    expected = np.repeat(lam.values, v)
    np.testing.assert_allclose(np.linalg.eigvalsh(A), expected, atol=1e-9)
    np.testing.assert_allclose(U.T @ U, np.eye(sum(v)), atol=1e-9)
    assert np.abs(U).min() >= cfg.tol_nonzero
    off = A[~np.eye(sum(v), dtype=bool)]
    assert off.size == 0 or np.abs(off).min() >= cfg.tol_nonzero


def test_nowhere_zero_single_vector():
    b = np.array([[1.0], [1.0]]) / np.sqrt(2)
    np.testing.assert_array_equal(nowhere_zero_orthonormal_basis(b), b)


def test_nowhere_zero_plane():
    out = nowhere_zero_orthonormal_basis(np.eye(2))
    r = np.sqrt(3) / 2
    np.testing.assert_allclose(np.abs(out[:, 0]), [r, 0.5], atol=1e-15)
    np.testing.assert_allclose(np.abs(out[:, 1]), [0.5, r], atol=1e-15)
    np.testing.assert_allclose(out.T @ out, np.eye(2), atol=1e-15)


def test_nowhere_zero_space():
    out = nowhere_zero_orthonormal_basis(np.eye(3))
    assert np.abs(out).min() > 1e-8
    np.testing.assert_allclose(out @ out.T, np.eye(3), atol=1e-12)


def test_nowhere_zero_rejects_non_orthonormal():
    with pytest.raises(ValueError):
        nowhere_zero_orthonormal_basis(np.array([[1.0, 1.0], [0.0, 1.0]]))


def test_nowhere_zero_impossible_span():
    # every vector in span{e1} has a zero in position 2
    with pytest.raises(ValueError):
        nowhere_zero_orthonormal_basis(np.array([[1.0], [0.0]]))


def test_assemble_k2():
    V = W = MultiplicityMatrix([[0], [1], [0]])
    res = assemble_join(V, W, (1,), (1,), EigenvalueList([-1.0, 0.0, 1.0]))
    X = res.X.data
    assert X[0, 0] == pytest.approx(0, abs=1e-15) and X[1, 1] == pytest.approx(0, abs=1e-15)
    assert abs(X[0, 1]) == pytest.approx(1.0)


def test_assemble_rejects_incompatible_and_bad_lambda():
    V = MultiplicityMatrix([[0], [1], [0]])
    W = MultiplicityMatrix([[1], [0], [0]])
    with pytest.raises(ValueError):
        assemble_join(V, W, (1,), (1,))
    with pytest.raises(ValueError):
        assemble_join(V, V, (1,), (1,), EigenvalueList([-1.0, 0.0, 0.5]))
    with pytest.raises(ValueError):
        assemble_join(V, V, (2,), (1,))


def test_assemble_two_k2_vs_two_k1():
    V, W = construct_witness((2, 2), (1, 1))
    res = assemble_join(V, W, (2, 2), (1, 1), EigenvalueList.default(V.rows))
    rep = verify_realization(res.X, (2, 2), (1, 1))
    assert rep.passed and rep.residual <= 1e-9
    np.testing.assert_array_equal(np.abs(res.X.data) > 1e-8 * np.abs(res.X.data).max(),
                                  clique_join_pattern((2, 2), (1, 1)) | np.eye(6, dtype=bool) & (np.abs(res.X.data) > 1e-8))


@pytest.mark.parametrize("m, n", [((2, 2), (1, 1)), ((3, 2), (2, 1, 1)), ((2, 2), (1, 1, 1, 1)), ((3,), (1, 1, 1)), ((4, 1), (2, 2, 1))])
def test_realize_pipeline(m, n):
    V, W = construct_witness(m, n)
    res = realize(m, n)
    rep = verify_realization(res.X, m, n)
    assert rep.passed
    lo, hi = iplus_range(m, n)
    assert lo <= rep.i_plus <= hi
    # i_+ = (last row of V) + (first row of W) + middle mass
    assert rep.i_plus == sum(V.data[-1]) + sum(W.data[0]) + V.middle_mass()
    off, diag = _coupling_structure(res.A_G, res.A_H, res.C, list(res.lam.values))
    assert off <= 1e-8
    for s, lam in enumerate(res.lam.values):
        np.testing.assert_allclose(diag[lam], np.sqrt(max(0.0, 1 - lam**2)), atol=1e-8)


def test_realize_rejects_q3():
    with pytest.raises(NotRealizable):
        realize((2, 2), (1, 1, 1))


def test_realize_reproducible():
    a = realize((3, 2), (2, 1, 1), cfg=RealizationConfig(seed=5))
    b = realize((3, 2), (2, 1, 1), cfg=RealizationConfig(seed=5))
    np.testing.assert_array_equal(a.X.data, b.X.data)


def test_realize_custom_lambda():
    res = realize((2, 2), (1, 1), lam=[0.3])
    assert res.lam.values == (-1.0, 0.3, 1.0) or list(res.lam.values) == [-1.0, 0.3, 1.0]
    assert verify_realization(res.X, (2, 2), (1, 1)).passed


def test_retry_exhaustion_is_inconclusive():
    # a nonzero threshold above any attainable entry makes every attempt fail
    cfg = RealizationConfig(tol_nonzero=0.99, max_retries=2)
    with pytest.raises((RealizationError, ValueError)):
        realize((3, 3), (3, 3), cfg=cfg)


def test_cycles_fixture():
    X = cycles_join()
    rep = verify_realization(X, pattern=cycles_pattern())
    assert rep.passed and rep.residual <= 1e-12 and rep.symmetry_defect == 0
    assert rep.i_plus == 6
    A_G, A_H, C = cycles_blocks()
    lam = [-1.0, -CYCLE_LAMBDA, CYCLE_LAMBDA, 1.0]
    off, diag = _coupling_structure(A_G, A_H, C, lam)
    assert off <= 1e-12
    for v in lam:
        np.testing.assert_allclose(diag[v], np.sqrt(max(0.0, 1 - v * v)), atol=1e-12)


def test_identity_fails():
    rep = verify_realization(np.eye(4), (2,), (1, 1))
    assert rep.orthogonal and not rep.pattern_ok and not rep.spectrum_ok and not rep.passed
    assert rep.i_plus == 4


def test_zeroed_entry_is_named():
    X = cycles_join()
    X[0, 9] = X[9, 0] = 0.0
    rep = verify_realization(X, pattern=cycles_pattern())
    assert not rep.passed
    assert {"i": 0, "j": 9, "kind": "missing-edge", "value": 0.0} in rep.violations


def test_verifier_dimension_mismatch():
    with pytest.raises(ValueError):
        verify_realization(np.eye(3), (2,), (2,))
    with pytest.raises(ValueError):
        verify_realization(np.eye(3))


def test_rank_two_star():
    X = rank_two_star(3)
    pattern = clique_join_pattern((2,), (1, 1, 1))
    rep = verify_realization(X, pattern=pattern)
    assert rep.pattern_ok and not rep.orthogonal
    assert np.linalg.matrix_rank(X) == 2
    np.testing.assert_allclose(rep.eigenvalues, [-1, 0, 0, 0, 1], atol=1e-10)


@pytest.mark.parametrize("lam", [0.5, 2.0, 3.0])
def test_rank_two_star_general(lam):
    X = rank_two_star_general(lam, 4)
    np.testing.assert_allclose(np.linalg.eigvalsh(X), sorted([-1.0, lam, 0, 0, 0, 0]), atol=1e-12)
    pattern = clique_join_pattern((2,), (1, 1, 1, 1))
    off = ~np.eye(6, dtype=bool)
    np.testing.assert_array_equal((np.abs(X) > 1e-12)[off], pattern[off])


def test_required_entries_clear_the_verifier_threshold():
    # a coupling entry once landed between the C-relative and X-relative thresholds
    m, n = (2, 2, 1, 1, 1), (7, 6)
    res = realize(m, n)
    assert verify_realization(res.X, m, n).passed


def test_sampled_sweep_up_to_twenty():
    from qjoin.decision import q_value
    from qjoin.oracle import partitions

    tuples = [p for t in range(1, 20) for p in partitions(t)]
    rnd = np.random.default_rng(11)
    done = 0
    while done < 300:
        m = tuples[rnd.integers(len(tuples))]
        n = tuples[rnd.integers(len(tuples))]
        if sum(m) + sum(n) > 20 or q_value(m, n) != 2:
            continue
        rep = verify_realization(realize(m, n).X, m, n)
        lo, hi = iplus_range(m, n)
        assert rep.passed and lo <= rep.i_plus <= hi, (m, n)
        done += 1
