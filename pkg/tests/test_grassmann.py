import numpy as np
import pytest
from hypothesis import given, strategies as st

from subspace_cond import DistanceKind, SubspaceProjector, distance, principal_angles
from subspace_cond.grassmann import chordal_from_projectors

from conftest import random_unitary

KINDS = list(DistanceKind)


def line(v):
    v = np.asarray(v, dtype=float).reshape(-1, 1)
    return SubspaceProjector.from_basis(v / np.linalg.norm(v))


def random_pair(seed, p, k, complex_=False):
    rng = np.random.default_rng(seed)
    def basis():
        X = rng.standard_normal((p, k))
        if complex_:
            X = X + 1j * rng.standard_normal((p, k))
        return np.linalg.qr(X)[0]
    return SubspaceProjector.from_basis(basis()), SubspaceProjector.from_basis(basis())


pairs = st.builds(
    lambda seed, p, k, c: random_pair(seed, p, min(k, p), c),
    st.integers(0, 2**32 - 1), st.integers(1, 7), st.integers(1, 7), st.booleans())


def test_identical_projectors():
    P, _ = random_pair(0, 5, 2)
    np.testing.assert_allclose(principal_angles(P, P).theta, 0, atol=1e-7)
    for kind in KINDS:
        assert distance(P, P, kind) == pytest.approx(0, abs=1e-7)


def test_orthogonal_lines():
    P, Q = line([1, 0, 0]), line([0, 1, 0])
    np.testing.assert_allclose(principal_angles(P, Q).theta, [np.pi / 2])
    assert distance(P, Q, "chordal") == pytest.approx(1)
    assert distance(P, Q, "grassmann") == pytest.approx(np.pi / 2)
    assert distance(P, Q, "procrustes") == pytest.approx(np.sqrt(2))


@pytest.mark.parametrize("alpha", [0.3, 1e-9, 1.2])
def test_rotated_line(alpha):
    # oracle: the angle between two unit vectors is arccos of their inner product
    q = np.array([np.cos(alpha), np.sin(alpha), 0.0])
    theta = principal_angles(line([1, 0, 0]), line(q)).theta
    assert theta[0] == pytest.approx(alpha, rel=1e-12)


def test_small_angles_are_accurate():
    # a bare arccos would return ~1e-8 here; the sine path keeps full precision
    theta = principal_angles(line([1, 0]), line([1, 1e-12])).theta
    assert theta[0] == pytest.approx(1e-12, rel=1e-10)
    assert distance(line([1, 0]), line([1, 1e-12]), "grassmann") == pytest.approx(1e-12, rel=1e-10)


def test_section3_perturbed_basis():
    # first left singular vector of the perturbed 2x2 block, as printed to 16 digits
    u11, u21 = 9.999999999500002e-1, -9.999999998500292e-6
    e3 = np.zeros(6)
    e3[2] = 1
    u = np.zeros(6)
    u[2], u[3] = u11, u21
    d = distance(line(e3), line(u), "chordal")
    # the published digits come from sqrt(1 - u11^2), which loses ~6 digits to cancellation
    assert d == pytest.approx(9.999978209007872e-6, rel=1e-5)
    assert d == pytest.approx(abs(u21) / np.hypot(u11, u21), rel=1e-12)


def test_mismatch_errors():
    P, _ = random_pair(1, 4, 2)
    Q, _ = random_pair(1, 4, 1)
    with pytest.raises(ValueError):
        principal_angles(P, Q)
    R, _ = random_pair(1, 5, 2)
    with pytest.raises(ValueError):
        distance(P, R, "chordal")


def test_empty_subspaces():
    P = SubspaceProjector(np.zeros((3, 3)), 0)
    assert len(principal_angles(P, P)) == 0
    assert distance(P, P, "grassmann") == 0


@given(pairs)
def test_angles_in_range_and_sorted(pq):
    theta = principal_angles(*pq).theta
    assert np.all(theta >= 0) and np.all(theta <= np.pi / 2 + 1e-15)
    assert np.all(np.diff(theta) >= 0)


@given(pairs)
def test_chordal_consistency(pq):
    P, Q = pq
    theta = principal_angles(P, Q).theta
    assert abs(np.linalg.norm(np.sin(theta)) - chordal_from_projectors(P, Q)) <= 1e-10


@given(pairs)
def test_distance_ordering(pq):
    c, g, p = (distance(*pq, k) for k in KINDS)
    eps = 1e-12
    assert c <= g + eps
    assert c <= p + eps
    assert p <= g + eps


@given(pairs, st.integers(0, 2**32 - 1))
def test_unitary_invariance(pq, seed):
    P, Q = pq
    W = random_unitary(np.random.default_rng(seed), P.dim_ambient, np.iscomplexobj(P.P))
    WP = SubspaceProjector(W @ P.P @ W.conj().T, P.rank)
    WQ = SubspaceProjector(W @ Q.P @ W.conj().T, Q.rank)
    for kind in KINDS:
        assert abs(distance(WP, WQ, kind) - distance(P, Q, kind)) <= 1e-10


@given(pairs)
def test_chordal_complement_isometry(pq):
    P, Q = pq
    d = distance(P, Q, "chordal")
    dc = distance(P.complement(), Q.complement(), "chordal") if P.rank < P.dim_ambient else d
    assert abs(d - dc) <= 1e-10


@pytest.mark.parametrize("seed", range(5))
def test_asymptotic_isometry(seed):
    rng = np.random.default_rng(seed)
    p, k = 6, 2
    B = np.linalg.qr(rng.standard_normal((p, k)))[0]
    X = rng.standard_normal((p, k))
    X -= B @ (B.T @ X)
    t = 1e-5
    Bt = np.linalg.qr(B + t * X)[0]
    P, Q = SubspaceProjector.from_basis(B), SubspaceProjector.from_basis(Bt)
    c, g, pr = (distance(P, Q, kind) for kind in KINDS)
    assert abs(g / c - 1) <= 1e-4
    assert abs(pr / c - 1) <= 1e-4
