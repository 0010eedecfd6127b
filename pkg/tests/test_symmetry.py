import numpy as np
import pytest

from nhskin import (
    ModelSpec,
    PBC,
    build_bdg,
    build_combined,
    build_reflection,
    commutator_residual,
    default_candidates,
    is_reducible,
    ring_candidates,
    theorem_verdict,
    verify_reflection_structure,
)
from nhskin.errors import ConfigError, DimMismatch, MalformedOperator, NonPositiveSize
from nhskin.symmetry import (
    KIND_BLOCKED,
    KIND_EXPECTED,
    KIND_NO_CANDIDATES,
    KIND_REDUCIBLE,
    PAULI,
    SymmetryOp,
)

REFERENCE = ModelSpec(t=1.0, gamma=1.5, delta=0.5, num_sites=100)


def test_reflection_two_site_staggered():
    assert np.array_equal(build_reflection(2, True),
                          np.array([[0.0, -1.0], [1.0, 0.0]]))


def test_reflection_unstaggered_is_anti_identity():
    R = build_reflection(3, False)
    assert np.array_equal(R, np.fliplr(np.eye(3)))


def test_reflection_square_is_signed_identity():
    # (-1)^n (-1)^(L-n+1) = (-1)^(L+1): minus for even L, plus for odd L
    R4 = build_reflection(4, True)
    assert np.abs(R4 @ R4 + np.eye(4)).max() == 0.0
    R5 = build_reflection(5, True)
    assert np.abs(R5 @ R5 - np.eye(5)).max() == 0.0


def test_reflection_rejects_short_chain():
    with pytest.raises(NonPositiveSize):
        build_reflection(1, True)


def test_combined_two_site_blocks():
    S = build_combined("sy", 2, True)
    R = build_reflection(2, True)
    assert np.abs(S.matrix[:2, 2:] + 1j * R).max() == 0.0
    assert np.abs(S.matrix[2:, :2] - 1j * R).max() == 0.0
    assert np.abs(S.matrix[:2, :2]).max() == 0.0


def test_combined_identity_is_doubled_reflection():
    S = build_combined("id", 2, False)
    R = build_reflection(2, False)
    assert np.array_equal(S.matrix, np.kron(np.eye(2), R))


def test_combined_is_unitary_at_scale():
    S = build_combined("sy", 100, True).matrix
    assert np.abs(S @ S.conj().T - np.eye(200)).max() <= 1e-14


@pytest.mark.parametrize("L", [4, 5, 12, 13])
@pytest.mark.parametrize("staggered", [True, False])
def test_combined_squares_to_signed_identity(L, staggered):
    S = build_combined("sy", L, staggered).matrix
    S2 = S @ S
    sign = S2[0, 0]
    assert abs(abs(sign) - 1.0) <= 1e-14
    assert np.abs(S2 - sign * np.eye(2 * L)).max() <= 1e-14


def test_commutator_reference_chain_blocked():
    H = build_bdg(REFERENCE)
    S = build_combined("sy", 100, True)
    assert commutator_residual(H, S) <= 1e-14


def test_commutator_zero_matrix():
    S = build_combined("sy", 4, True)
    assert commutator_residual(np.zeros((8, 8)), S) == 0.0


def test_commutator_broken_by_quarter_phase_potential():
    H = build_bdg(REFERENCE.replace(V=2.0, theta=np.pi / 4))
    S = build_combined("sy", 100, True)
    assert commutator_residual(H, S) > 0.01


def test_commutator_scale_invariance():
    H = build_bdg(REFERENCE.replace(V=2.0, theta=0.7, L=30))
    S = build_combined("sy", 30, True)
    r1 = commutator_residual(H, S)
    r2 = commutator_residual(3.7 * H, S)
    assert abs(r1 - r2) <= 1e-12 * max(r1, 1.0)


def test_commutator_dim_mismatch():
    with pytest.raises(DimMismatch):
        commutator_residual(np.eye(6), build_combined("sy", 4, True))


def test_reducibility_with_pairing_is_irreducible():
    red, comps = is_reducible(build_bdg(REFERENCE.replace(L=20)))
    assert not red
    assert len(comps) == 1 and len(comps[0]) == 40


def test_reducibility_without_pairing_splits_in_two():
    red, comps = is_reducible(build_bdg(REFERENCE.replace(delta=0.0, L=20)))
    assert red
    assert sorted(len(c) for c in comps) == [20, 20]
    assert comps[0] == list(range(20))


def test_reducibility_diagonal_matrix_is_singletons():
    red, comps = is_reducible(np.diag([1.0, 2.0, 3.0, 4.0, 5.0, 6.0]))
    assert red and len(comps) == 6


def test_reflection_structure_accepts_mirror_candidates():
    assert verify_reflection_structure(build_combined("sy", 10, True))
    assert verify_reflection_structure(build_combined("sx", 10, False))


def test_reflection_structure_rejects_identity_site_factor():
    S = SymmetryOp(matrix=np.kron(PAULI["sy"], np.eye(6)),
                   internal_label="sy", spatial_signed=False, sites=6)
    assert not verify_reflection_structure(S)


def test_reflection_structure_rejects_non_factorizable():
    rng = np.random.default_rng(3)
    S = SymmetryOp(matrix=rng.normal(size=(12, 12)) + 0j,
                   internal_label="sy", spatial_signed=False, sites=6)
    with pytest.raises(MalformedOperator):
        verify_reflection_structure(S)


def test_verdict_reference_chain():
    H = build_bdg(REFERENCE)
    v = theorem_verdict(H, default_candidates(100))
    assert v.kind == KIND_BLOCKED
    assert v.candidate.internal_label == "sy" and v.candidate.spatial_signed
    assert v.commutator_residual <= 1e-12


def test_verdict_third_pi_potential_still_blocked():
    # theta = pi/3 keeps the mirror antisymmetry of the potential at L = 100
    H = build_bdg(REFERENCE.replace(V=2.0, theta=np.pi / 3))
    v = theorem_verdict(H, default_candidates(100))
    assert v.kind == KIND_BLOCKED


def test_verdict_quarter_pi_potential_expected():
    H = build_bdg(REFERENCE.replace(V=2.0, theta=np.pi / 4))
    v = theorem_verdict(H, default_candidates(100))
    assert v.kind == KIND_EXPECTED
    assert v.commutator_residual > 1e-3


def test_verdict_gates_on_reducibility():
    H = build_bdg(REFERENCE.replace(delta=0.0, L=30))
    v = theorem_verdict(H, default_candidates(30))
    assert v.kind == KIND_REDUCIBLE
    assert sorted(len(c) for c in v.components) == [30, 30]


def test_verdict_empty_candidates():
    H = build_bdg(REFERENCE.replace(L=10))
    assert theorem_verdict(H, []).kind == KIND_NO_CANDIDATES


def test_verdict_requires_positive_tol():
    with pytest.raises(ConfigError):
        theorem_verdict(np.eye(4), [], tol=0.0)


def test_verdict_deterministic_and_order_respecting():
    H = build_bdg(REFERENCE.replace(L=12))
    cands = default_candidates(12)
    v1 = theorem_verdict(H, cands)
    v2 = theorem_verdict(H, cands)
    assert v1.to_dict() == v2.to_dict()


def test_ring_candidates_cover_all_third_pi_phases():
    # on a ring whose length is a multiple of 6, each theta = k pi/3 is
    # matched by a staggered reflection about one of the six centers
    L = 24
    cands = ring_candidates(L)
    for k in range(6):
        theta = k * np.pi / 3.0
        spec = ModelSpec(t=1.0, gamma=1.5, delta=0.5, big_v=2.0,
                         theta=theta, num_sites=L, boundary=PBC)
        H = build_bdg(spec)
        best = min(commutator_residual(H, c) for c in cands)
        assert best <= 1e-12, f"theta = {k} pi/3 not matched: {best}"
    spec = ModelSpec(t=1.0, gamma=1.5, delta=0.5, big_v=2.0,
                     theta=np.pi / 4, num_sites=L, boundary=PBC)
    H = build_bdg(spec)
    assert min(commutator_residual(H, c) for c in cands) > 1e-3


def test_ring_candidates_need_multiple_of_six():
    with pytest.raises(NonPositiveSize):
        ring_candidates(9)


def test_verdict_never_blocked_for_reducible():
    # premise gate fires before any candidate is consulted
    H = build_bdg(REFERENCE.replace(delta=0.0, L=24))
    v = theorem_verdict(H, default_candidates(24))
    assert v.kind == KIND_REDUCIBLE
