import numpy as np
import pytest

from nhskin import (
    ModelSpec,
    band_energies,
    bloch_matrix,
    build_bdg,
    char_poly_residual,
    continuum_condition,
    gbz_modulus_report,
    solve_beta,
    zak_phase,
)
from nhskin.errors import (
    BandTouching,
    DegenerateLeadingCoeff,
    GbzNotCircle,
    UnsupportedPotential,
    ZeroBeta,
)
from nhskin.nonbloch import (
    BRANCH_ORDER,
    CASE_MINUS_MIDDLE,
    CASE_NEITHER,
    CASE_PLUS_MIDDLE,
    quartic_coefficients,
    wilson_loop_phase,
)

REFERENCE = ModelSpec(t=1.0, gamma=1.5, delta=0.5, num_sites=100)

SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]])


def test_bloch_matrix_at_unity():
    # beta = 1/beta kills every difference term
    M = bloch_matrix(REFERENCE, 1.0)
    assert np.abs(M + 2.0 * SIGMA_Z).max() <= 1e-15


def test_bloch_matrix_at_i():
    M = bloch_matrix(REFERENCE, 1.0j)
    want = -1.5j * np.eye(2) + SIGMA_Y
    assert np.abs(M - want).max() <= 1e-14


def test_bloch_matrix_guards():
    with pytest.raises(ZeroBeta):
        bloch_matrix(REFERENCE, 0.0)
    with pytest.raises(UnsupportedPotential):
        bloch_matrix(REFERENCE.replace(V=2.0), 1.0)


def test_char_poly_trivial_zero():
    # E = -2t, beta = 1: both difference terms and E^2 - 4t^2 vanish
    assert abs(char_poly_residual(REFERENCE, -2.0, 1.0)) <= 1e-14


def test_char_poly_is_determinant():
    rng = np.random.default_rng(5)
    for _ in range(25):
        E = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
        beta = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        if abs(beta) < 0.1:
            continue
        det = np.linalg.det(bloch_matrix(REFERENCE, beta) - E * np.eye(2))
        res = char_poly_residual(REFERENCE, E, beta)
        assert abs(det - res) <= 1e-12 * max(abs(det), 1.0)


def test_solved_roots_satisfy_char_poly():
    rng = np.random.default_rng(6)
    for _ in range(30):
        E = complex(rng.uniform(-4, 4), rng.uniform(-4, 4))
        q = solve_beta(REFERENCE, E)
        scale = max(abs(E) ** 2, REFERENCE.t ** 2)
        for b in q.roots.values():
            assert abs(char_poly_residual(REFERENCE, E, b)) <= 1e-9 * scale


def test_vieta_pair_products():
    rng = np.random.default_rng(7)
    for _ in range(50):
        E = complex(rng.uniform(-4, 4), rng.uniform(-4, 4))
        q = solve_beta(REFERENCE, E)
        assert abs(q.roots["1+"] * q.roots["2+"] + 1.0) <= 1e-10
        assert abs(q.roots["1-"] * q.roots["2-"] + 1.0) <= 1e-10
        prod = np.prod(q.root_array())
        assert abs(prod - 1.0) <= 1e-9


def test_roots_match_companion_matrix():
    rng = np.random.default_rng(8)
    for _ in range(100):
        E = complex(rng.uniform(-4, 4), rng.uniform(-4, 4))
        mine = np.sort_complex(solve_beta(REFERENCE, E).root_array())
        other = np.sort_complex(np.roots(quartic_coefficients(REFERENCE, E)))
        # sorting complex values can swap near-ties; compare as multisets
        from nhskin.spectra import set_distance
        assert set_distance(mine, other) <= 1e-9


def test_moduli_come_in_reciprocal_pairs():
    for E in (0.7 + 0.4j, 0.0 + 0.0j):
        q = solve_beta(REFERENCE, E)
        m = q.sorted_moduli
        assert abs(m[0] * m[3] - 1.0) <= 1e-10
        assert abs(m[1] * m[2] - 1.0) <= 1e-10


def test_quartet_at_zero_energy():
    # x^2 coefficient is delta^2 - t^2 + gamma^2/4 = -0.1875 here and the
    # x term drops out, so the two branches are exact negatives
    q = solve_beta(REFERENCE, 0.0)
    assert abs(q.roots["1+"] * q.roots["2+"] + 1.0) <= 1e-12
    assert abs(q.roots["1-"] * q.roots["2-"] + 1.0) <= 1e-12
    moduli_plus = sorted([abs(q.roots["1+"]), abs(q.roots["2+"])])
    moduli_minus = sorted([abs(q.roots["1-"]), abs(q.roots["2-"])])
    assert np.allclose(moduli_plus, moduli_minus, rtol=1e-10)


def test_reciprocal_limit_roots_on_unit_circle():
    spec = ModelSpec(t=1.0, gamma=0.0, delta=0.0, num_sites=10)
    k = 0.9
    q = solve_beta(spec, -2.0 * np.cos(k))
    assert np.abs(np.abs(q.root_array()) - 1.0).max() <= 1e-10
    # particle band contributes e^{+-ik}, the hole band -e^{-+ik}
    phases = np.sort(np.angle(q.root_array()))
    want = np.sort([k, -k, np.pi - k, -(np.pi - k)])
    assert np.abs(phases - want).max() <= 1e-9


def test_degenerate_leading_coefficient_flagged():
    spec = ModelSpec(t=1.0, gamma=1.0, delta=np.sqrt(0.75), num_sites=10)
    q = solve_beta(spec, 1.0 + 0.5j)
    assert q.degenerate_leading
    assert len(q.roots) == 2
    assert abs(q.roots["1+"] * q.roots["2+"] + 1.0) <= 1e-10
    with pytest.raises(DegenerateLeadingCoeff):
        solve_beta(spec, 0.0)  # reduced equation loses its x term


def test_continuum_condition_on_band_energies():
    for E in band_energies(REFERENCE, 17):
        q = solve_beta(REFERENCE, E)
        assert q.continuum_case in (CASE_MINUS_MIDDLE, CASE_PLUS_MIDDLE)
        assert np.abs(q.sorted_moduli[1:3] - 1.0).max() <= 1e-6


def test_continuum_condition_far_from_spectrum():
    q = solve_beta(REFERENCE, 10.0 + 10.0j)
    assert continuum_condition(q) == CASE_NEITHER


def test_continuum_condition_hermitian_limit():
    spec = ModelSpec(t=1.0, gamma=0.0, delta=0.0, num_sites=10)
    q = solve_beta(spec, -2.0 * np.cos(1.1))
    assert np.abs(q.sorted_moduli - 1.0).max() <= 1e-10
    assert continuum_condition(q) != CASE_NEITHER


def test_gbz_report_band_energies_on_unit_circle():
    rows = gbz_modulus_report(REFERENCE, band_energies(REFERENCE, 25))
    assert max(r["mid_deviation"] for r in rows) <= 1e-6


def test_gbz_finite_chain_deviation_shrinks_with_length():
    # finite open chains sit near, not on, the band curve: the middle
    # moduli deviate O(1/L), halving when L doubles
    devs = {}
    for L in (50, 100):
        vals = np.linalg.eigvals(build_bdg(REFERENCE.replace(L=L)))
        bulk = [complex(E) for E in vals if abs(E) > 1e-6]
        rows = gbz_modulus_report(REFERENCE, bulk)
        devs[L] = max(r["mid_deviation"] for r in rows)
    assert 0.3 <= devs[100] / devs[50] <= 0.7
    assert devs[100] < 0.05


def test_gbz_mirror_energy_same_moduli():
    for E in (0.9 + 0.2j, -1.3 + 0.7j, 2.0 - 0.1j):
        qp = solve_beta(REFERENCE, E)
        qm = solve_beta(REFERENCE, -E)
        assert np.abs(qp.sorted_moduli - qm.sorted_moduli).max() <= 1e-10


def test_zak_phase_reference_chain_is_pi():
    res = zak_phase(REFERENCE, band="plus", grid=4096)
    assert abs(abs(res.phase) - np.pi) <= 1e-2
    res_m = zak_phase(REFERENCE, band="minus", grid=4096)
    assert abs(abs(res_m.phase) - np.pi) <= 1e-2


def test_zak_phase_trivial_chain_is_zero():
    spec = ModelSpec(t=1.0, gamma=0.0, delta=0.0, num_sites=10)
    res = zak_phase(spec, band="plus", grid=256)
    assert abs(res.phase) <= 1e-6


def test_zak_phase_grid_convergence():
    p1 = zak_phase(REFERENCE, grid=512).phase
    p2 = zak_phase(REFERENCE, grid=1024).phase
    delta = abs(p1 - p2)
    delta = min(delta, 2.0 * np.pi - delta)  # phases live on the circle
    assert delta < 1e-3


def test_wilson_loop_gauge_invariance():
    rng = np.random.default_rng(9)
    n = 64
    lefts, rights = [], []
    for k in range(n):
        Hb = bloch_matrix(REFERENCE, np.exp(2j * np.pi * k / n))
        w, VR = np.linalg.eig(Hb)
        idx = int(np.argmax(w.real))
        r = VR[:, idx]
        wl, WL = np.linalg.eig(Hb.conj().T)
        jdx = int(np.argmin(np.abs(np.conj(wl) - w[idx])))
        l = WL[:, jdx].conj()
        l = l / (l @ r)
        lefts.append(l)
        rights.append(r)
    base = wilson_loop_phase(lefts, rights)
    gauges = rng.normal(size=n) + 1j * rng.normal(size=n)
    gauged_l = [l / g for l, g in zip(lefts, gauges)]
    gauged_r = [r * g for r, g in zip(rights, gauges)]
    assert abs(wilson_loop_phase(gauged_l, gauged_r) - base) <= 1e-10


def test_zak_phase_band_touching_detected():
    spec = ModelSpec(t=0.0, gamma=0.1, delta=0.5, num_sites=10)
    with pytest.raises(BandTouching):
        zak_phase(spec, grid=256)


def test_zak_phase_requires_four_roots():
    spec = ModelSpec(t=1.0, gamma=1.0, delta=np.sqrt(0.75), num_sites=10)
    with pytest.raises(GbzNotCircle):
        zak_phase(spec, grid=256)


def test_zak_phase_rejects_potential():
    with pytest.raises(UnsupportedPotential):
        zak_phase(REFERENCE.replace(V=1.0, L=99), grid=256)


def test_band_energies_match_ring_spectrum():
    # sampling both bands over L points reproduces the closed-ring
    # spectrum; cross-oracle with the real-space build
    from nhskin import pbc_spectrum
    from nhskin.spectra import set_distance
    spec = REFERENCE.replace(L=30, boundary="pbc")
    ring = pbc_spectrum(spec)
    bands = band_energies(REFERENCE.replace(L=30), 30)
    H = build_bdg(spec)
    assert set_distance(ring, bands) <= 1e-9 * np.linalg.norm(H)


def test_branch_labels_are_complete():
    q = solve_beta(REFERENCE, 0.3 - 1.1j)
    assert set(q.roots) == set(BRANCH_ORDER)
    assert abs(q.roots["1+"]) <= abs(q.roots["2+"])
    assert abs(q.roots["1-"]) <= abs(q.roots["2-"])
