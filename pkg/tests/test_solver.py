import numpy as np
import pytest

from conftest import rand_measure, rand_psd, rand_smeasure, rand_spd, rand_weights, sym
from spdmeans import (
    DomainError,
    NonConvergence,
    PMeasure,
    SMeasure,
    SolverConfig,
    congruence_measure,
    distance,
    geometric_mean,
    induced_mean,
    integrate,
    iteration_map,
    karcher_residual,
    lambda_mean,
    loewner_leq,
    mean_kernel,
    measure_leq,
    power_mean,
    product_measure,
    sandwich_check,
    weighted_arith,
    weighted_harm,
)

CFG = SolverConfig()


def two_point(rng, dim, nu=None, lo=0.1, hi=10.0):
    nu = nu or SMeasure.lebesgue(64)
    return product_measure(nu, [(0.5, rand_spd(rng, dim, lo, hi)), (0.5, rand_spd(rng, dim, lo, hi))])


# ---------------------------------------------------------------------------
# iteration map
# ---------------------------------------------------------------------------


def test_iteration_map_fixed_point_at_single_atom():
    rng = np.random.default_rng(1)
    a = rand_spd(rng, 4)
    mu = product_measure(rand_smeasure(rng), [(1.0, a)])
    for t in (0.1, 0.5, 1.0):
        assert np.linalg.norm(iteration_map(a, t, mu) - a) <= 1e-12 * np.linalg.norm(a)


def test_iteration_map_t1_is_arithmetic_mean():
    rng = np.random.default_rng(2)
    mu = rand_measure(rng, 3)
    target = weighted_arith(mu.matrix_pairs())
    x = rand_spd(rng, 3)
    got = iteration_map(x, 1.0, mu)
    assert np.linalg.norm(got - target) <= 1e-12 * (1 + np.linalg.norm(target))


def test_iteration_map_scalar_right_trivial():
    # nu = dirac(1) makes the map affine: (1-t) x + t * sum w a
    rng = np.random.default_rng(3)
    vals = np.array([2.0, 5.0, 11.0])
    w = np.array([0.2, 0.3, 0.5])
    mu = product_measure(SMeasure.dirac(1.0), [(wi, np.array([[v]])) for wi, v in zip(w, vals)])
    for t in (0.25, 0.7):
        x = float(rng.uniform(0.5, 20.0))
        got = iteration_map(np.array([[x]]), t, mu)[0, 0]
        assert abs(got - ((1 - t) * x + t * float(w @ vals))) <= 1e-12 * (1 + x)


def test_iteration_map_monotone_in_x():
    rng = np.random.default_rng(4)
    mu = rand_measure(rng, 3)
    x = rand_spd(rng, 3)
    y = sym(x + rand_psd(rng, 3))
    for t in (0.3, 0.8):
        assert loewner_leq(iteration_map(x, t, mu), iteration_map(y, t, mu), 1e-10)


def test_iteration_map_rejects_bad_t():
    rng = np.random.default_rng(5)
    mu = rand_measure(rng, 2)
    with pytest.raises(DomainError):
        iteration_map(np.eye(2), 0.0, mu)


# ---------------------------------------------------------------------------
# induced mean
# ---------------------------------------------------------------------------


def test_induced_mean_single_atom():
    rng = np.random.default_rng(6)
    a = rand_spd(rng, 4)
    mu = product_measure(rand_smeasure(rng), [(1.0, a)])
    rep = induced_mean(0.5, mu, CFG)
    assert distance(rep.mean, a) <= 1e-11


def test_induced_mean_right_trivial_is_arithmetic():
    rng = np.random.default_rng(7)
    mats = [rand_spd(rng, 3) for _ in range(3)]
    w = rand_weights(rng, 3)
    mu = product_measure(SMeasure.dirac(1.0), list(zip(w, mats)))
    target = weighted_arith(list(zip(w, mats)))
    for t in (0.2, 0.6, 1.0):
        rep = induced_mean(t, mu, CFG)
        assert np.linalg.norm(rep.mean - target) <= 1e-10 * (1 + np.linalg.norm(target))


def test_induced_mean_left_trivial_scalar_fixed_point():
    # nu = dirac(0), scalars 2 and 8 with equal weights: the fixed point of
    # 1 = sum w a / ((1-t) a + t x) at t = 1/2 is x = 4 (solve the quadratic)
    mu = product_measure(
        SMeasure.dirac(0.0), [(0.5, np.array([[2.0]])), (0.5, np.array([[8.0]]))]
    )
    rep = induced_mean(0.5, mu, CFG)
    assert abs(rep.mean[0, 0] - 4.0) <= 1e-10

    # scalar bisection oracle for an asymmetric case
    w, a = np.array([0.3, 0.7]), np.array([1.0, 9.0])
    t = 0.4

    def resid(x):
        return float(np.sum(w * a / ((1 - t) * a + t * x))) - 1.0

    lo_, hi_ = 1e-3, 1e3
    for _ in range(200):
        mid = 0.5 * (lo_ + hi_)
        if resid(mid) > 0:
            lo_ = mid
        else:
            hi_ = mid
    mu2 = product_measure(SMeasure.dirac(0.0), [(0.3, np.array([[1.0]])), (0.7, np.array([[9.0]]))])
    rep2 = induced_mean(t, mu2, CFG)
    assert abs(rep2.mean[0, 0] - lo_) <= 1e-9 * (1 + lo_)


def test_induced_mean_fixed_point_contract():
    rng = np.random.default_rng(8)
    for _ in range(5):
        dim = int(rng.integers(2, 6))
        mu = rand_measure(rng, dim)
        t = float(rng.uniform(0.1, 1.0))
        rep = induced_mean(t, mu, CFG)
        assert distance(rep.mean, iteration_map(rep.mean, t, mu)) <= 10.0 * CFG.fp_tol
        assert rep.final_step <= CFG.fp_tol
        assert sandwich_check(rep.mean, mu)


def test_induced_mean_reparametrized_residual_vanishes():
    # at X = L_t the average of (mean_kernel(s, t, W) - I)/t over the measure
    # is zero; evaluated through the generic integrate route as a cross-check
    rng = np.random.default_rng(9)
    mu = rand_measure(rng, 3)
    t = 0.35
    x = induced_mean(t, mu, CFG).mean
    w, q = np.linalg.eigh(x)
    irs = (q / np.sqrt(w)) @ q.T

    def g(s, a):
        return (mean_kernel(s, t, sym(irs @ a @ irs)) - np.eye(3)) / t

    assert np.linalg.norm(integrate(mu, g)) <= 1e-8


def test_induced_mean_nonconvergence_budget():
    rng = np.random.default_rng(10)
    mu = two_point(rng, 3)
    with pytest.raises(NonConvergence) as info:
        induced_mean(0.1, mu, SolverConfig(max_iters=2))
    assert info.value.iterations <= 2
    assert info.value.final_step > 0.0


def test_induced_mean_t_monotone():
    rng = np.random.default_rng(11)
    mu = rand_measure(rng, 3)
    means = [induced_mean(t, mu, CFG).mean for t in (0.125, 0.25, 0.5, 1.0)]
    for lo_m, hi_m in zip(means, means[1:]):
        assert loewner_leq(lo_m, hi_m, 1e-9)


def test_induced_mean_congruence_equivariance():
    rng = np.random.default_rng(31)
    for _ in range(3):
        mu = rand_measure(rng, 3)
        c = rng.standard_normal((3, 3)) + 2.5 * np.eye(3)
        for t in (0.3, 0.8):
            lhs = induced_mean(t, congruence_measure(c, mu), CFG).mean
            target = sym(c @ induced_mean(t, mu, CFG).mean @ c.T)
            assert np.linalg.norm(lhs - target) <= 1e-8 * (1 + np.linalg.norm(target))


def test_induced_mean_monotone_in_measure():
    rng = np.random.default_rng(12)
    for _ in range(5):
        mu1 = rand_measure(rng, 3)
        mu2 = PMeasure([(w, sym(m + rand_psd(rng, 3)), nu) for w, m, nu in mu1.atoms])
        assert measure_leq(mu1, mu2)
        for t in (0.25, 0.5, 1.0):
            m1 = induced_mean(t, mu1, CFG).mean
            m2 = induced_mean(t, mu2, CFG).mean
            assert loewner_leq(m1, m2, 1e-8)


# ---------------------------------------------------------------------------
# power mean
# ---------------------------------------------------------------------------


def test_power_mean_single_matrix():
    rng = np.random.default_rng(13)
    a = rand_spd(rng, 4)
    rep = power_mean(0.5, [(1.0, a)], CFG)
    assert distance(rep.mean, a) <= 1e-11


def test_power_mean_t1_is_arithmetic():
    rng = np.random.default_rng(14)
    mats = [rand_spd(rng, 3) for _ in range(3)]
    w = rand_weights(rng, 3)
    rep = power_mean(1.0, list(zip(w, mats)), CFG)
    target = weighted_arith(list(zip(w, mats)))
    assert np.linalg.norm(rep.mean - target) <= 1e-11 * (1 + np.linalg.norm(target))


def test_power_mean_commuting_oracle():
    # diagonal matrices reduce to scalar power means (sum w a^t)^(1/t);
    # also checked against a plain scalar fixed-point iteration
    rng = np.random.default_rng(15)
    vals = np.exp(rng.uniform(-1.5, 1.5, (3, 4)))
    w = rand_weights(rng, 3)
    for t in (0.2, 0.5, 0.8):
        rep = power_mean(t, [(w[i], np.diag(vals[i])) for i in range(3)], CFG)
        closed = (w @ vals**t) ** (1.0 / t)
        assert np.max(np.abs(np.diag(rep.mean) - closed) / closed) <= 1e-10
        x = float(vals.mean())
        for _ in range(20000):
            xn = float(np.sum(w * x ** (1 - t) * vals[:, 0] ** t))
            if abs(xn - x) <= 1e-14 * x:
                x = xn
                break
            x = xn
        assert abs(x - closed[0]) <= 1e-9 * closed[0]


def test_power_mean_fixed_point_of_geometric_means():
    rng = np.random.default_rng(16)
    mats = [rand_spd(rng, 3) for _ in range(3)]
    w = rand_weights(rng, 3)
    t = 0.45
    rep = power_mean(t, list(zip(w, mats)), CFG)
    back = sum(wi * geometric_mean(rep.mean, m, t) for wi, m in zip(w, mats))
    assert distance(rep.mean, sym(back)) <= 10.0 * CFG.fp_tol


# ---------------------------------------------------------------------------
# Karcher residual and the lambda (Karcher) mean
# ---------------------------------------------------------------------------


def test_karcher_residual_examples():
    rng = np.random.default_rng(17)
    a = rand_spd(rng, 4)
    mu = product_measure(rand_smeasure(rng), [(1.0, a)])
    assert np.linalg.norm(karcher_residual(a, mu)) <= 1e-13 * np.linalg.norm(a)
    mats = [rand_spd(rng, 3) for _ in range(3)]
    w = rand_weights(rng, 3)
    mu1 = product_measure(SMeasure.dirac(1.0), list(zip(w, mats)))
    x = rand_spd(rng, 3)
    expect = weighted_arith(list(zip(w, mats))) - x
    assert np.linalg.norm(karcher_residual(x, mu1) - expect) <= 1e-11 * (1 + np.linalg.norm(expect))


def test_lambda_mean_single_atom():
    rng = np.random.default_rng(18)
    a = rand_spd(rng, 4)
    mu = product_measure(rand_smeasure(rng), [(1.0, a)])
    rep = lambda_mean(mu, CFG)
    assert distance(rep.mean, a) <= 1e-10


def test_lambda_mean_two_point_geometric():
    rng = np.random.default_rng(19)
    for _ in range(5):
        dim = int(rng.integers(2, 6))
        a, b = rand_spd(rng, dim), rand_spd(rng, dim)
        mu = product_measure(SMeasure.lebesgue(64), [(0.5, a), (0.5, b)])
        rep = lambda_mean(mu, CFG)
        assert distance(rep.mean, geometric_mean(a, b, 0.5)) <= 1e-8
        assert rep.residual_norm <= CFG.residual_tol
        assert rep.final_step <= CFG.fp_tol
        assert len(rep.t_trace) >= 2


def test_lambda_mean_scalar_log_mean():
    rng = np.random.default_rng(20)
    vals = np.exp(rng.uniform(-2, 2, (4, 3)))
    w = rand_weights(rng, 4)
    mu = product_measure(SMeasure.lebesgue(64), [(w[i], np.diag(vals[i])) for i in range(4)])
    rep = lambda_mean(mu, CFG)
    exact = np.exp(w @ np.log(vals))
    assert np.max(np.abs(np.diag(rep.mean) - exact) / exact) <= 1e-8


def test_lambda_mean_dirac_endpoints():
    # dirac(1) gives the arithmetic mean, dirac(0) the harmonic mean
    rng = np.random.default_rng(21)
    mats = [rand_spd(rng, 3) for _ in range(3)]
    w = rand_weights(rng, 3)
    pairs = list(zip(w, mats))
    arith = lambda_mean(product_measure(SMeasure.dirac(1.0), pairs), CFG).mean
    assert np.linalg.norm(arith - weighted_arith(pairs)) <= 1e-9 * np.linalg.norm(arith)
    harm = lambda_mean(product_measure(SMeasure.dirac(0.0), pairs), CFG).mean
    assert np.linalg.norm(harm - weighted_harm(pairs)) <= 1e-8 * np.linalg.norm(harm)


def test_lambda_mean_monotone_and_congruence():
    rng = np.random.default_rng(22)
    for _ in range(3):
        mu1 = rand_measure(rng, 3)
        lam1 = lambda_mean(mu1, CFG).mean
        mu2 = PMeasure([(w, sym(m + rand_psd(rng, 3)), nu) for w, m, nu in mu1.atoms])
        lam2 = lambda_mean(mu2, CFG).mean
        assert loewner_leq(lam1, lam2, 1e-8)
        c = rng.standard_normal((3, 3)) + 2.5 * np.eye(3)
        lam3 = lambda_mean(congruence_measure(c, mu1), CFG).mean
        target = sym(c @ lam1 @ c.T)
        assert np.linalg.norm(lam3 - target) <= 1e-8 * (1 + np.linalg.norm(target))


def test_lambda_mean_superadditive_in_measure():
    # mixing structurally matched measures means combining matched atoms
    # convexly, (1-u) A_k + u B_k, with the weights and [0,1]-parts shared
    rng = np.random.default_rng(23)
    mu1 = rand_measure(rng, 3, n_atoms=3)
    mu2 = PMeasure([(w, sym(m + rand_psd(rng, 3)), nu) for w, m, nu in mu1.atoms])
    lam1 = lambda_mean(mu1, CFG).mean
    lam2 = lambda_mean(mu2, CFG).mean
    for u in (0.25, 0.5, 0.75):
        mixed = PMeasure(
            [
                (w1, (1 - u) * m1 + u * m2, nu1)
                for (w1, m1, nu1), (_, m2, _) in zip(mu1.atoms, mu2.atoms)
            ]
        )
        lam_mix = lambda_mean(mixed, CFG).mean
        assert loewner_leq((1 - u) * lam1 + u * lam2, lam_mix, 1e-8)


def test_lambda_mean_nonexpansive_in_atoms():
    rng = np.random.default_rng(24)
    mu1 = rand_measure(rng, 3, n_atoms=3)
    mu2 = PMeasure(
        [(w, sym(m + rand_psd(rng, 3, scale=0.1)), nu) for w, m, nu in mu1.atoms]
    )
    spread = max(
        distance(m1, m2) for (_, m1, _), (_, m2, _) in zip(mu1.atoms, mu2.atoms)
    )
    lam1 = lambda_mean(mu1, CFG).mean
    lam2 = lambda_mean(mu2, CFG).mean
    assert distance(lam1, lam2) <= spread + 1e-9


def test_lambda_mean_positive_map_compression():
    rng = np.random.default_rng(25)
    mu = rand_measure(rng, 4, n_atoms=3)
    lam = lambda_mean(mu, CFG).mean
    compressed = PMeasure([(w, m[:2, :2].copy(), nu) for w, m, nu in mu.atoms])
    lam_c = lambda_mean(compressed, CFG).mean
    assert loewner_leq(lam[:2, :2], lam_c, 1e-9)


def test_lambda_mean_unique_across_schedules():
    rng = np.random.default_rng(26)
    mu = rand_measure(rng, 3)
    m1 = lambda_mean(mu, SolverConfig(t_start=0.5)).mean
    m2 = lambda_mean(mu, SolverConfig(t_start=0.75)).mean
    m3 = lambda_mean(mu, SolverConfig(t_start=0.5, t_factor=0.25)).mean
    assert distance(m1, m2) <= 1e-7
    assert distance(m1, m3) <= 1e-7


def test_lambda_mean_two_variable_mean_properties():
    # with a two-atom matrix marginal the construction is an operator mean:
    # normalized, monotone, congruence-equivariant
    rng = np.random.default_rng(27)
    nu = rand_smeasure(rng)
    w = 0.3
    eye_mu = product_measure(nu, [(1 - w, np.eye(3)), (w, np.eye(3))])
    assert distance(lambda_mean(eye_mu, CFG).mean, np.eye(3)) <= 1e-10
    a, b = rand_spd(rng, 3), rand_spd(rng, 3)
    m_ab = lambda_mean(product_measure(nu, [(1 - w, a), (w, b)]), CFG).mean
    a2, b2 = sym(a + rand_psd(rng, 3)), sym(b + rand_psd(rng, 3))
    m_a2b2 = lambda_mean(product_measure(nu, [(1 - w, a2), (w, b2)]), CFG).mean
    assert loewner_leq(m_ab, m_a2b2, 1e-8)
    c = sym(rng.standard_normal((3, 3))) + 3.0 * np.eye(3)
    m_cong = lambda_mean(product_measure(nu, [(1 - w, sym(c @ a @ c)), (w, sym(c @ b @ c))]), CFG).mean
    target = sym(c @ m_ab @ c)
    assert np.linalg.norm(m_cong - target) <= 1e-8 * (1 + np.linalg.norm(target))


def test_power_route_equivalence():
    rng = np.random.default_rng(28)
    mats = [rand_spd(rng, 4) for _ in range(3)]
    w = rand_weights(rng, 3)
    pairs = list(zip(w, mats))
    for t in (0.2, 0.5, 0.8):
        direct = power_mean(t, pairs, CFG).mean
        routed = lambda_mean(product_measure(SMeasure.power(t), pairs), CFG).mean
        assert distance(direct, routed) <= 1e-6


def test_sandwich_check():
    rng = np.random.default_rng(29)
    mu = rand_measure(rng, 3)
    pairs = mu.matrix_pairs()
    assert sandwich_check(weighted_arith(pairs), mu)
    assert not sandwich_check(2.0 * weighted_arith(pairs), mu)
    single = product_measure(SMeasure.dirac(0.5), [(1.0, rand_spd(rng, 3))])
    assert sandwich_check(single.atoms[0][1], single)


def test_solver_config_validation():
    with pytest.raises(DomainError):
        SolverConfig(fp_tol=0.0)
    with pytest.raises(DomainError):
        SolverConfig(t_factor=1.0)


def test_report_json_schema():
    rng = np.random.default_rng(30)
    mu = two_point(rng, 2)
    rep = lambda_mean(mu, CFG)
    obj = rep.to_json()
    assert set(obj) == {
        "mean", "iterations", "final_step", "residual_norm", "t_trace", "iterations_bound",
    }
    assert obj["mean"]["dim"] == 2
    assert all(len(pair) == 2 for pair in obj["t_trace"])
