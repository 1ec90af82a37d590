import numpy as np
import pytest
from scipy.optimize import linprog

import rotvec as rv
from rotvec.errors import InfeasiblePins

SIN2 = [(0.5, [0, 0], 0, "cos"), (-0.5, [1, 0], 0, "cos")]  # sin^2(pi p1) on T^2


def sin2_hamiltonian():
    return rv.fourier_hamiltonian(2, SIN2)


def test_eval_examples():
    F = sin2_hamiltonian()
    assert F.eval([0.0, 0.0]) == pytest.approx(0.0, abs=1e-14)
    assert F.eval([0.5, 0.0]) == pytest.approx(1.0, abs=1e-14)
    assert F.eval([0.25, 0.0]) == pytest.approx(0.5, abs=1e-14)


def test_grad_examples():
    F = sin2_hamiltonian()
    g = F.grad([0.25, 0.3])
    assert g[0] == pytest.approx(np.pi, abs=1e-12)  # d/dp1 sin^2(pi p1) = pi sin(2 pi p1)
    assert g[1] == pytest.approx(0.0, abs=1e-14)
    const = rv.fourier_hamiltonian(2, [(3.0, [0, 0], 0, "cos")])
    assert np.allclose(const.grad([0.1, 0.9]), 0.0)


def test_dds_examples():
    F = sin2_hamiltonian()
    assert F.dds([0.3, 0.1], 0.7) == 0.0
    assert F.autonomous
    eps = 0.2
    Ft = rv.fourier_hamiltonian(2, SIN2 + [(eps / 2, [1, 0], -1, "cos"),
                                           (-eps / 2, [1, 0], 1, "cos")])
    assert not Ft.autonomous and Ft.period == 1.0
    p1, s = 0.13, 0.41
    expected = 2 * np.pi * eps * np.cos(2 * np.pi * s) * np.sin(2 * np.pi * p1)
    assert Ft.dds([p1, 0.0], s) == pytest.approx(expected, abs=1e-12)
    # 1-periodicity in s
    assert Ft.eval([p1, 0.2], s) == pytest.approx(Ft.eval([p1, 0.2], s + 1.0), abs=1e-12)


def test_gradient_consistency_random_sweep():
    rng = np.random.default_rng(0)
    h = 1e-5
    for _ in range(100):
        terms = []
        for _ in range(rng.integers(1, 5)):
            terms.append((rng.normal(), rng.integers(-2, 3, 2).tolist(),
                          int(rng.integers(-1, 2)), "sin" if rng.random() < 0.5 else "cos"))
        F = rv.fourier_hamiltonian(2, terms)
        x = rng.random(2)
        s = rng.random()
        g = F.grad(x, s)
        for j in range(2):
            dx = np.zeros(2)
            dx[j] = h
            fd = (F.eval(x + dx, s) - F.eval(x - dx, s)) / (2 * h)
            assert abs(g[j] - fd) / (1 + abs(g[j])) < 1e-6


def test_periodicity_on_lifts():
    F = sin2_hamiltonian()
    x = np.array([0.37, 0.81])
    shifted = x + np.array([4.0, -7.0])
    assert F.eval(x) == pytest.approx(F.eval(shifted), abs=1e-12)
    assert np.allclose(F.grad(x), F.grad(shifted), atol=1e-12)


def test_sum_and_product_composites():
    F = sin2_hamiltonian()
    G = rv.fourier_hamiltonian(2, [(1.0, [0, 1], 0, "sin")])
    x = np.array([0.21, 0.64])
    assert (F + G).eval(x) == pytest.approx(F.eval(x) + G.eval(x), abs=1e-13)
    assert (F * G).eval(x) == pytest.approx(F.eval(x) * G.eval(x), abs=1e-13)
    assert (2.5 * F).eval(x) == pytest.approx(2.5 * F.eval(x), abs=1e-13)


# ---------------------------------------------------------------------------
# pinned profiles
# ---------------------------------------------------------------------------

def piecewise_linear_min_slope(pins, m=256):
    """Independent oracle: minimal max|u'| over discretized periodic profiles.

    Linear program over piecewise-linear u on a uniform m-grid, nothing shared
    with the trigonometric construction under test.
    """
    idx = {}
    for t, v in pins:
        i = int(round(t * m)) % m
        assert abs(i / m - t % 1.0) < 1e-12, "oracle grid must contain the pins"
        idx[i] = v
    # variables: u_0..u_{m-1}, tau ; slopes are (u_{i+1} - u_i) * m cyclically
    n = m + 1
    a_ub, b_ub = [], []
    for i in range(m):
        row = np.zeros(n)
        row[i], row[(i + 1) % m] = -m, m
        row[-1] = -1.0
        a_ub.append(row.copy())
        b_ub.append(0.0)
        row[:m] *= -1
        a_ub.append(row)
        b_ub.append(0.0)
    a_eq = []
    b_eq = []
    for i, v in idx.items():
        row = np.zeros(n)
        row[i] = 1.0
        a_eq.append(row)
        b_eq.append(v)
    res = linprog(np.eye(n)[-1], A_ub=np.array(a_ub), b_ub=b_ub,
                  A_eq=np.array(a_eq), b_eq=b_eq,
                  bounds=[(None, None)] * m + [(0, None)], method="highs")
    assert res.success
    return res.fun


def test_min_slope_oracle_value():
    # going 0 -> 1 over half a period and back forces max|u'| >= 2; the
    # triangular profile attains it, so the oracle must return exactly 2
    value = piecewise_linear_min_slope([(0.0, 0.0), (0.5, 1.0)])
    assert value == pytest.approx(2.0, abs=1e-9)


def test_pinned_profile_meets_slope_target():
    F = rv.make_pinned_profile([(0.0, 0.0), (0.5, 1.0)], slope_target=2.1, n_modes=32)
    meta = F.metadata
    assert meta["certified_slope"] <= 2.1
    assert meta["slope_target_met"]
    # pins reproduced
    assert F.eval([0.0, 0.0]) == pytest.approx(0.0, abs=1e-10)
    assert F.eval([0.5, 0.0]) == pytest.approx(1.0, abs=1e-10)
    # certified slope can never beat the infinite-dimensional optimum
    assert meta["certified_slope"] >= piecewise_linear_min_slope([(0.0, 0.0), (0.5, 1.0)])


def test_pinned_profile_certificate_dominates_fine_grid():
    F = rv.make_pinned_profile([(0.0, 0.0), (0.5, 1.0)], slope_target=2.1, n_modes=16)
    t = np.arange(16384) / 16384.0
    pts = np.zeros((len(t), 2))
    pts[:, 0] = t
    fine_max = np.abs(F.grad(pts)[:, 0]).max()
    assert F.metadata["certified_slope"] >= fine_max


def test_pinned_profile_single_pin_gives_flat():
    F = rv.make_pinned_profile([(0.0, 0.0)], n_modes=8)
    pts = np.column_stack([np.linspace(0, 1, 64), np.zeros(64)])
    assert np.allclose(F.eval(pts), 0.0, atol=1e-12)


def test_infeasible_pins():
    with pytest.raises(InfeasiblePins):
        rv.make_pinned_profile([(0.0, 0.0), (0.0, 1.0)])


def test_twelve_modes_cannot_certify_2_1():
    # the minimax slope of a 12-mode profile with these pins is ~2.186, so the
    # requested target is reported unmet rather than silently claimed
    F = rv.make_pinned_profile([(0.0, 0.0), (0.5, 1.0)], slope_target=2.1, n_modes=12)
    assert F.metadata["certified_slope"] > 2.1
    assert F.metadata["slope_target_met"] is False


def test_parse_family_roundtrip():
    F = rv.parse_family({"family": "fourier", "coeffs": [[0.5, [0, 0], 0, "cos"],
                                                         [-0.5, [1, 0], 0, "cos"]]}, 2)
    assert F.eval([0.25, 0.0]) == pytest.approx(0.5)
    G = rv.parse_family({"family": "pinned-profile", "pins": [[0.0, 0.0], [0.5, 1.0]],
                         "n_modes": 8}, 2)
    assert G.eval([0.5, 0.0]) == pytest.approx(1.0, abs=1e-10)
    with pytest.raises(ValueError):
        rv.parse_family({"family": "nope"}, 2)
