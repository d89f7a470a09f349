import numpy as np
import pytest

from floqex import BZGrid, ModelParams, band_gap, bare_detuning, dispersion, occupations

GAMMA = (0.0, 0.0)
M = (np.pi, np.pi)


def test_default_parameters():
    p = ModelParams()
    assert (p.u11, p.u12, p.eps21, p.t1, p.t2) == (1.6, 0.8, 3.7, 0.05, -0.15)
    assert p.doping == 0.0
    assert p.t21 == pytest.approx(-0.2)


def test_params_validation():
    with pytest.raises(ValueError):
        ModelParams(doping=1.0)
    with pytest.raises(ValueError):
        ModelParams(doping=-0.1)
    with pytest.raises(ValueError):
        ModelParams(u11=-0.5)
    with pytest.raises(ValueError):
        ModelParams(eps21=float("inf"))


def test_with_laser_keeps_cavity_detuning():
    p = ModelParams()
    q = p.with_laser(2.5)
    assert q.omega_l == 2.5
    assert q.delta_c == pytest.approx(p.delta_c, abs=1e-15)


def test_gap_at_high_symmetry_points():
    p = ModelParams()
    assert band_gap(p, GAMMA) == pytest.approx(2.9)
    assert band_gap(p, M) == pytest.approx(4.5)
    assert dispersion(p, 2, GAMMA) - dispersion(p, 1, GAMMA) == pytest.approx(2.9)


def test_gap_dispersionless_when_hoppings_equal():
    p = ModelParams(t1=-0.15, t2=-0.15)
    rng = np.random.default_rng(0)
    for _ in range(10):
        k = tuple(rng.uniform(0, 2 * np.pi, size=2))
        assert band_gap(p, k) == pytest.approx(p.eps21, abs=1e-12)


def test_dispersion_rejects_bad_band():
    with pytest.raises(ValueError):
        dispersion(ModelParams(), 3, GAMMA)


def test_bare_detuning_examples():
    p = ModelParams(omega_l=2.87)
    assert bare_detuning(p, GAMMA) == pytest.approx(0.03)
    assert bare_detuning(p, M) == pytest.approx(1.63)
    k = (0.7, 1.3)
    on_resonance = ModelParams(omega_l=float(band_gap(p, k)))
    assert bare_detuning(on_resonance, k) == pytest.approx(0.0, abs=1e-15)


def test_bare_detuning_linear_in_drive_frequency():
    k = (1.1, 0.4)
    base = ModelParams(omega_l=2.5)
    d0 = bare_detuning(base, k)
    for dw in (0.1, 0.25, 0.7):
        assert bare_detuning(base.replace(omega_l=2.5 + dw), k) == pytest.approx(d0 - dw)


def test_grid_contains_gamma_and_sums_weights(grid64):
    assert grid64.kx[grid64.gamma_index] == 0.0
    assert grid64.ky[grid64.gamma_index] == 0.0
    total = np.sum(np.full(grid64.n_sites, grid64.weight))
    assert abs(total - 1.0) < 1e-14


def test_grid_closed_under_negation(grid64):
    two_pi = 2 * np.pi
    for nx, ny in [(0, 0), (1, 0), (5, 17), (63, 2)]:
        idx = grid64.index(nx, ny)
        partner = grid64.index(-nx, -ny)
        assert grid64.index(-(-nx), -(-ny)) == idx
        assert grid64.kx[partner] == pytest.approx((-grid64.kx[idx]) % two_pi, abs=1e-12)
        assert grid64.ky[partner] == pytest.approx((-grid64.ky[idx]) % two_pi, abs=1e-12)


def test_inversion_symmetry_of_bands(grid64):
    p = ModelParams()
    l = grid64.l
    eps1 = dispersion(p, 1, (grid64.kx, grid64.ky))
    for nx, ny in [(3, 9), (40, 1), (31, 31)]:
        a = eps1[grid64.index(nx, ny)]
        b = eps1[grid64.index(l - nx, l - ny)]
        assert a == pytest.approx(b, abs=1e-13)


def test_high_symmetry_indices(grid64):
    assert grid64.kx[grid64.y_index] == 0.0
    assert grid64.ky[grid64.y_index] == pytest.approx(np.pi)
    assert grid64.kx[grid64.m_index] == pytest.approx(np.pi)
    with pytest.raises(ValueError):
        BZGrid.square(9).y_index


def test_path_endpoints(grid64):
    path = grid64.path_y_gamma_m()
    assert path[0] == grid64.y_index
    assert path[grid64.l // 2] == grid64.gamma_index
    assert path[-1] == grid64.m_index
    assert len(path) == grid64.l + 1


def test_full_filling():
    p = ModelParams(doping=0.0)
    g = BZGrid.square(8)
    occ = occupations(p, g)
    assert np.array_equal(occ.n_k, np.ones(64))
    assert occ.nu == 1.0


def test_half_filling_small_grid():
    occ = occupations(ModelParams(doping=0.5), BZGrid.square(2))
    assert occ.n_filled == 2
    assert occ.nu == 0.5
    assert int(np.sum(occ.n_k)) == 2


def test_step_filling_matches_exhaustive_sort():
    # independent oracle: sort every point by (energy, kx, ky) and fill the head
    p = ModelParams(doping=0.25, t1=0.05)
    g = BZGrid.square(16)
    occ = occupations(p, g)
    assert occ.n_filled == 192
    eps1 = dispersion(p, 1, (g.kx, g.ky))
    ranked = sorted(range(g.n_sites), key=lambda i: (eps1[i], g.kx[i], g.ky[i]))
    expected = np.zeros(g.n_sites)
    expected[ranked[:192]] = 1.0
    assert np.array_equal(occ.n_k, expected)


def test_occupation_deterministic(grid64):
    p = ModelParams(doping=0.3)
    a = occupations(p, grid64)
    b = occupations(p, grid64)
    assert np.array_equal(a.n_k, b.n_k)
    assert a.nu == b.nu


@pytest.mark.parametrize("doping", [0.0, 0.1, 0.37, 0.81])
def test_filling_tracks_doping(grid64, doping):
    occ = occupations(ModelParams(doping=doping), grid64)
    assert abs(occ.nu - (1.0 - doping)) <= 1.0 / grid64.n_sites
    assert occ.nu == np.sum(occ.n_k) / grid64.n_sites
