import numpy as np
import pytest
from numpy.polynomial import polynomial as P

from contilearn.data import Standardization
from contilearn.featuremap import (
    Layer,
    RecursiveFeatureMap,
    calibrate_layer,
    embed_mean_solution,
    expand,
    expansion_pairs,
    expansion_size,
    redefine,
)
from contilearn.spectral import PrincipalComponents


def orthonormal_rows(rng, k, m):
    q, _ = np.linalg.qr(rng.normal(size=(m, k)))
    return q.T


def random_map(rng, d, n_layers, n_train=40):
    """A feature map with random projections and training-calibrated scales."""
    std = Standardization(rng.normal(size=d), rng.uniform(0.5, 2.0, size=d))
    F = std.design_matrix(rng.normal(size=(n_train, d)))
    layers = []
    for _ in range(n_layers):
        m_in = F.shape[1]
        k = int(rng.integers(1, min(m_in, 3) + 1))
        pc = PrincipalComponents(rng.normal(size=m_in), orthonormal_rows(rng, k, m_in), np.ones(k))
        layer = calibrate_layer(pc, F)
        F = layer.apply(F)
        layers.append(layer)
    return RecursiveFeatureMap(std, tuple(layers))


def monomial_exponents(d, deg):
    if d == 1:
        return [(a,) for a in range(deg + 1)]
    return [(a, b) for a in range(deg + 1) for b in range(deg + 1 - a)]


def interpolation_residual(fmap, deg, rng):
    """Fit every output feature as a polynomial of total degree <= deg on sample
    points, then measure the worst prediction error on held-out points."""
    d = fmap.d
    exps = monomial_exponents(d, deg)
    X_fit = rng.uniform(-2.0, 2.0, size=(max(4 * len(exps), 60), d))
    X_eval = rng.uniform(-2.0, 2.0, size=(50, d))
    basis = lambda X: np.column_stack([np.prod(X**np.array(e), axis=1) for e in exps])
    V_fit = fmap.transform(X_fit)
    V_eval = fmap.transform(X_eval)
    coef, *_ = np.linalg.lstsq(basis(X_fit), V_fit, rcond=None)
    return float(np.max(np.abs(basis(X_eval) @ coef - V_eval)))


def test_redefine_hand_case():
    # F_0 = (2*3 + 0*5)/2 = 3, F_1 = 5
    pc = PrincipalComponents(np.array([2.0, 0.0]), np.array([[0.0, 1.0]]), np.ones(1))
    assert np.array_equal(redefine(pc, np.array([3.0, 5.0])), [3.0, 5.0])


def test_redefine_orthogonal_input_vanishes():
    pc = PrincipalComponents(np.array([1.0, 0.0, 0.0]), np.array([[0.0, 1.0, 0.0]]), np.ones(1))
    out = redefine(pc, np.array([0.0, 0.0, 7.0]))
    assert np.array_equal(out, [0.0, 0.0])


def test_redefine_with_no_components():
    pc = PrincipalComponents(np.array([3.0, 4.0]), np.zeros((0, 2)), np.zeros(0))
    out = redefine(pc, np.array([3.0, 4.0]))
    assert out.shape == (1,)
    assert np.isclose(out[0], 5.0)


def test_redefine_degenerate_mean_warns_and_uses_constant():
    pc = PrincipalComponents(np.zeros(2), np.array([[1.0, 0.0]]), np.ones(1))
    with pytest.warns(UserWarning, match="constant"):
        out = redefine(pc, np.array([5.0, 6.0]))
    assert np.array_equal(out, [1.0, 5.0])


def test_redefine_dimension_mismatch():
    pc = PrincipalComponents(np.ones(2), np.zeros((0, 2)), np.zeros(0))
    with pytest.raises(ValueError):
        redefine(pc, np.ones(3))


def test_expand_two_features():
    out = expand(np.array([2.0, 3.0]), np.ones(5))
    assert np.array_equal(out, [2.0, 3.0, 4.0, 6.0, 9.0])


def test_expand_pure_bias_direction():
    out = expand(np.array([1.0, 0.0, 0.0]), np.ones(9))
    expected = np.zeros(9)
    expected[0] = 1.0  # linear bias slot
    expected[3] = 1.0  # (0, 0) product slot
    assert np.array_equal(out, expected)


def test_expand_output_width():
    assert expansion_size(3) == 9
    assert expand(np.ones(3), np.ones(9)).shape == (9,)


def test_expand_divides_by_scales():
    scales = np.array([2.0, 4.0, 8.0, 16.0, 32.0])
    out = expand(np.array([2.0, 4.0]), scales)
    assert np.array_equal(out, [1.0, 1.0, 0.5, 0.5, 0.5])


def test_expand_scale_length_mismatch():
    with pytest.raises(ValueError):
        expand(np.ones(2), np.ones(4))


def test_expansion_pair_order_is_lexicographic():
    ii, jj = expansion_pairs(3)
    assert list(zip(ii, jj)) == [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)]


def test_calibrated_scales_give_unit_rms():
    rng = np.random.default_rng(20)
    F = np.hstack([np.ones((30, 1)), rng.normal(size=(30, 2))])
    pc = PrincipalComponents(rng.normal(size=3), orthonormal_rows(rng, 2, 3), np.ones(2))
    layer = calibrate_layer(pc, F)
    rms = np.sqrt(np.mean(layer.apply(F) ** 2, axis=0))
    assert np.max(np.abs(rms - 1.0)) <= 1e-9


def test_identically_zero_feature_keeps_scale_one():
    # u row orthogonal to every training row makes that feature vanish
    F = np.column_stack([np.ones(10), np.linspace(-1, 1, 10), np.zeros(10)])
    pc = PrincipalComponents(
        np.array([1.0, 0.0, 0.0]), np.array([[0.0, 0.0, 1.0]]), np.ones(1)
    )
    layer = calibrate_layer(pc, F)
    out = layer.apply(F)
    assert np.array_equal(out[:, 1], np.zeros(10))  # linear slot of the zero feature
    assert layer.scales[1] == 1.0


def test_zero_layer_map_is_basic_features():
    std = Standardization(np.array([1.0]), np.array([2.0]))
    fmap = RecursiveFeatureMap(std, ())
    x = np.array([5.0])
    assert np.array_equal(fmap.evaluate(x), std.basic_features(x))


def test_one_layer_matches_symbolic_expansion():
    # oracle: multiply the polynomials out with numpy's polynomial arithmetic
    rng = np.random.default_rng(21)
    fmap = random_map(rng, d=1, n_layers=1)
    std = fmap.standardization
    layer = fmap.layers[0]

    one = P.Polynomial([1.0])
    xs = P.Polynomial([-std.mean[0] / std.scale[0], 1.0 / std.scale[0]])
    basis = [one, xs]
    f0_poly = sum(layer.v0[i] * basis[i] for i in range(2)) / np.linalg.norm(layer.v0)
    supers = [f0_poly] + [sum(layer.u[a, i] * basis[i] for i in range(2)) for a in range(layer.k)]
    ii, jj = expansion_pairs(layer.m_super)
    expanded = supers + [supers[a] * supers[b] for a, b in zip(ii, jj)]
    polys = [p / s for p, s in zip(expanded, layer.scales)]

    points = rng.uniform(-3.0, 3.0, size=10)
    for x in points:
        expected = np.array([p(x) for p in polys])
        got = fmap.evaluate(np.array([x]))
        assert np.max(np.abs(got - expected)) <= 1e-10


@pytest.mark.parametrize("d,n_layers", [(1, 1), (2, 1), (1, 2), (2, 2)])
def test_outputs_are_bounded_degree_polynomials(d, n_layers):
    rng = np.random.default_rng(1000 + 10 * d + n_layers)
    fmap = random_map(rng, d=d, n_layers=n_layers)
    assert interpolation_residual(fmap, 2**n_layers, rng) <= 1e-8


def test_embedded_mean_reproduces_scores():
    rng = np.random.default_rng(22)
    std = Standardization(rng.normal(size=2), rng.uniform(0.5, 2.0, size=2))
    F_train = std.design_matrix(rng.normal(size=(50, 2)))
    pc = PrincipalComponents(rng.normal(size=3), orthonormal_rows(rng, 2, 3), np.ones(2))
    layer = calibrate_layer(pc, F_train)
    w_embed = embed_mean_solution(layer)

    X = rng.normal(size=(100, 2))
    F = std.design_matrix(X)
    scores = layer.apply(F) @ w_embed
    assert np.max(np.abs(scores - F @ pc.v0)) <= 1e-10


def test_embedded_zero_mean_is_zero_vector():
    F = np.hstack([np.ones((10, 1)), np.linspace(-1, 1, 10)[:, None]])
    pc = PrincipalComponents(np.zeros(2), np.array([[0.0, 1.0]]), np.ones(1))
    with pytest.warns(UserWarning):
        layer = calibrate_layer(pc, F)
    assert np.array_equal(embed_mean_solution(layer), np.zeros(layer.m_out))


def test_scale_rescaling_is_absorbed_by_the_embedded_coefficient():
    rng = np.random.default_rng(23)
    F = np.hstack([np.ones((20, 1)), rng.normal(size=(20, 2))])
    pc = PrincipalComponents(rng.normal(size=3), orthonormal_rows(rng, 1, 3), np.ones(1))
    layer = calibrate_layer(pc, F)
    rescaled = Layer(layer.v0, layer.u, layer.scales * 2.0, layer.degenerate_v0)

    w_a = embed_mean_solution(layer)
    w_b = embed_mean_solution(rescaled)
    # features shrink by 2, the stored coefficient grows by 2, scores agree
    assert np.isclose(w_b[0], 2.0 * w_a[0])
    assert np.allclose(layer.apply(F) @ w_a, rescaled.apply(F) @ w_b, atol=1e-10)


def test_layer_chain_validation():
    std = Standardization(np.zeros(1), np.ones(1))
    bad = Layer(np.ones(5), np.zeros((0, 5)), np.ones(expansion_size(1)))
    with pytest.raises(ValueError, match="width"):
        RecursiveFeatureMap(std, (bad,))


def test_layer_requires_orthonormal_rows():
    with pytest.raises(ValueError, match="orthonormal"):
        Layer(np.ones(2), np.array([[1.0, 1.0]]), np.ones(expansion_size(2)))


def test_evaluate_checks_input_width():
    std = Standardization(np.zeros(2), np.ones(2))
    fmap = RecursiveFeatureMap(std, ())
    with pytest.raises(ValueError):
        fmap.evaluate(np.zeros(3))


def test_super_features_with_and_without_layers():
    rng = np.random.default_rng(24)
    fmap0 = RecursiveFeatureMap(Standardization(np.zeros(2), np.ones(2)), ())
    X = rng.normal(size=(5, 2))
    assert np.array_equal(fmap0.super_features(X), fmap0.transform(X))

    fmap1 = random_map(rng, d=2, n_layers=1)
    S = fmap1.super_features(X)
    assert S.shape == (5, fmap1.layers[-1].m_super)
