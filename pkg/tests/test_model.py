"""Tests for the DHC network."""
import numpy as np
import pytest
from numpy.testing import assert_allclose

from conftest import small_config
from dhc_classifier.hierarchy import balanced_tree, load_taxonomy
from dhc_classifier.model import (
    build_model,
    fnn_forward,
    heads_forward,
    hen_forward,
    model_backward,
    model_forward,
)
from dhc_classifier.models.config import ModelConfig, ShareMode
from dhc_classifier.nncore import Rng, finite_difference_grad, relative_error, softmax_rows
from dhc_classifier.utils.errors import ConfigurationError, ShapeError


def test_head_widths_follow_share_mode():
    tree = balanced_tree([2, 2])
    config = ModelConfig(input_dim=5, base_hidden_dims=[4], root_dim=16, layer_dims=[8, 8])
    hier = build_model(tree, config, Rng(0))
    assert hier.params["head.layer2.W"].shape == (16, 4)
    indep = build_model(
        tree, config.model_copy(update={"share_mode": ShareMode.INDEPENDENT}), Rng(0)
    )
    assert indep.params["head.layer2.W"].shape == (8, 4)


def test_parameter_names_and_order(small_model):
    assert small_model.params.names() == [
        "fnn.hidden0.W", "fnn.hidden0.b", "fnn.root.W", "fnn.root.b",
        "hen.layer1.W", "hen.layer1.b", "hen.layer2.W", "hen.layer2.b",
        "hen.layer3.W", "hen.layer3.b",
        "head.layer1.W", "head.layer1.b", "head.layer2.W", "head.layer2.b",
        "head.layer3.W", "head.layer3.b",
    ]
    assert not small_model.params["fnn.root.b"].any()


def test_bias_flags(deep_tree):
    model = build_model(deep_tree, small_config(rep_bias=False, head_bias=False), Rng(0))
    assert "hen.layer1.b" not in model.params
    assert "head.layer3.b" not in model.params
    assert "fnn.root.b" in model.params


def test_build_is_deterministic(deep_tree):
    a = build_model(deep_tree, small_config(), Rng(11))
    b = build_model(deep_tree, small_config(), Rng(11))
    for name in a.params:
        assert a.params[name].tobytes() == b.params[name].tobytes()


def test_build_rejects_bad_dims(deep_tree):
    with pytest.raises(ConfigurationError):
        build_model(deep_tree, small_config(root_dim=0), Rng(0))
    with pytest.raises(ConfigurationError):
        build_model(deep_tree, small_config(layer_dims=[2, 2]), Rng(0))


def test_fnn_identity_configuration():
    tree = balanced_tree([2])
    model = build_model(tree, ModelConfig(input_dim=3, base_hidden_dims=[], root_dim=3, layer_dims=[2]), Rng(0))
    model.params["fnn.root.W"][...] = np.eye(3)
    X = Rng(1).normal((3, 3))
    R0 = fnn_forward(model, X)
    assert R0.shape == (3, 3)
    assert_allclose(R0, X, atol=0.0)
    with pytest.raises(ShapeError):
        fnn_forward(model, np.ones((2, 4)))


def test_fnn_matches_scripted_forward(small_model, random_inputs):
    p = small_model.params
    h = np.maximum(random_inputs @ p["fnn.hidden0.W"] + p["fnn.hidden0.b"], 0.0)
    expected = h @ p["fnn.root.W"] + p["fnn.root.b"]
    assert_allclose(fnn_forward(small_model, random_inputs), expected, atol=1e-12)


def test_hen_widths_and_prefix():
    tree = balanced_tree([2, 2, 2])
    model = build_model(tree, ModelConfig(input_dim=3, base_hidden_dims=[], root_dim=5, layer_dims=[4]), Rng(2))
    R0 = Rng(3).normal((6, 5))
    primes, reps = hen_forward(model, R0)
    assert [r.shape[1] for r in reps] == [4, 8, 12]
    assert model.rep_widths() == [4, 8, 12]
    assert reps[0].tobytes() == primes[0].tobytes()
    assert np.ascontiguousarray(reps[1][:, :4]).tobytes() == reps[0].tobytes()
    assert np.ascontiguousarray(reps[2][:, 8:]).tobytes() == primes[2].tobytes()
    with pytest.raises(ShapeError):
        hen_forward(model, np.ones((2, 3)))


def test_single_layer_rep_is_prime():
    tree = balanced_tree([3])
    model = build_model(tree, small_config(), Rng(0))
    primes, reps = hen_forward(model, Rng(1).normal((2, 4)))
    assert reps[0] is primes[0]


def test_heads_uniform_and_degenerate():
    tree = load_taxonomy("a\tROOT\na1\ta\na2\ta\na3\ta\n")
    model = build_model(tree, small_config(), Rng(0))
    for name in model.params:
        if name.startswith("head."):
            model.params[name][...] = 0.0
    _, reps = hen_forward(model, Rng(1).normal((2, 4)))
    dists = heads_forward(model, reps)
    assert_allclose(dists[0], np.ones((2, 1)))
    assert_allclose(dists[1], np.full((2, 3), 1 / 3))


def test_model_forward_matches_composition(small_model, random_inputs):
    trace = model_forward(small_model, random_inputs)
    p = small_model.params
    R0 = fnn_forward(small_model, random_inputs)
    reps = []
    for l in range(1, 4):
        prime = R0 @ p[f"hen.layer{l}.W"] + p[f"hen.layer{l}.b"]
        reps.append(prime if l == 1 else np.concatenate([reps[-1], prime], axis=1))
    for l, rep in enumerate(reps, start=1):
        expected = softmax_rows(rep @ p[f"head.layer{l}.W"] + p[f"head.layer{l}.b"])
        assert_allclose(trace.dists[l - 1], expected, atol=1e-12)
        assert_allclose(trace.dists[l - 1].sum(axis=1), 1.0, atol=1e-9)


def test_forward_is_deterministic(small_model, random_inputs):
    a = model_forward(small_model, random_inputs)
    b = model_forward(small_model, random_inputs)
    for x, y in zip(a.dists, b.dists):
        assert x.tobytes() == y.tobytes()


def test_predict_proba_matches_forward(small_model, random_inputs):
    batched = small_model.predict_proba(random_inputs, batch_size=2)
    for x, y in zip(batched, model_forward(small_model, random_inputs).dists):
        assert_allclose(x, y, atol=1e-15)
    empty = small_model.predict_proba(np.zeros((0, 6)))
    assert [d.shape for d in empty] == [(0, 2), (0, 6), (0, 12)]


def test_share_modes_agree_on_single_layer_tree():
    tree = balanced_tree([4])
    X = Rng(5).normal((3, 6))
    hier = build_model(tree, small_config(), Rng(9))
    indep = build_model(tree, small_config(share_mode=ShareMode.INDEPENDENT), Rng(9))
    a, b = model_forward(hier, X).dists[0], model_forward(indep, X).dists[0]
    assert a.tobytes() == b.tobytes()


@pytest.mark.parametrize("mode, expected_changed", [
    (ShareMode.HIERARCHICAL, [True, True, True]),
    (ShareMode.INDEPENDENT, [True, False, False]),
])
def test_first_projection_fans_out(deep_tree, random_inputs, mode, expected_changed):
    model = build_model(deep_tree, small_config(share_mode=mode), Rng(4))
    before = model_forward(model, random_inputs).dists
    model.params["hen.layer1.W"][...] += 1e-4
    after = model_forward(model, random_inputs).dists
    changed = [bool(np.max(np.abs(a - b)) > 1e-10) for a, b in zip(before, after)]
    assert changed == expected_changed


def test_zero_upstream_gives_zero_gradients(small_model, random_inputs):
    trace = model_forward(small_model, random_inputs)
    model_backward(small_model, trace, dist_grads=[np.zeros_like(d) for d in trace.dists])
    assert all(not small_model.params.grads[n].any() for n in small_model.params)


def test_backward_argument_checks(small_model, random_inputs):
    trace = model_forward(small_model, random_inputs)
    with pytest.raises(ShapeError):
        model_backward(small_model, trace)
    with pytest.raises(ShapeError):
        model_backward(small_model, trace, dist_grads=[np.zeros((1, 1))] * 3)
    small_model.params.step += 1
    with pytest.raises(ShapeError, match="Stale"):
        model_backward(small_model, trace, logit_grads=[np.zeros_like(d) for d in trace.dists])


@pytest.mark.parametrize("mode", [ShareMode.HIERARCHICAL, ShareMode.INDEPENDENT])
def test_backward_matches_finite_differences(deep_tree, mode):
    model = build_model(deep_tree, small_config(share_mode=mode), Rng(21))
    rng = Rng(22)
    X = rng.normal((4, 6))
    weights = [rng.normal(d.shape) for d in model_forward(model, X).dists]

    def objective(_):
        return float(sum(np.sum(w * d) for w, d in zip(weights, model_forward(model, X).dists)))

    model.params.zero_grad()
    model_backward(model, model_forward(model, X), dist_grads=weights)
    analytic = {n: model.params.grads[n].copy() for n in model.params}
    numeric = finite_difference_grad(objective, model.params)
    for name in model.params:
        assert relative_error(analytic[name], numeric[name]) < 1e-5, name


def test_single_layer_matches_flat_classifier():
    tree = balanced_tree([3])
    config = ModelConfig(input_dim=4, base_hidden_dims=[], root_dim=5, layer_dims=[6])
    model = build_model(tree, config, Rng(7))
    rng = Rng(8)
    X = rng.normal((3, 4))
    upstream = rng.normal((3, 3))
    trace = model_forward(model, X)
    model_backward(model, trace, logit_grads=[upstream])

    p = model.params
    R0 = X @ p["fnn.root.W"] + p["fnn.root.b"]
    R1 = R0 @ p["hen.layer1.W"] + p["hen.layer1.b"]
    dR1 = upstream @ p["head.layer1.W"].T
    dR0 = dR1 @ p["hen.layer1.W"].T
    assert_allclose(p.grads["head.layer1.W"], R1.T @ upstream, atol=1e-12)
    assert_allclose(p.grads["hen.layer1.W"], R0.T @ dR1, atol=1e-12)
    assert_allclose(p.grads["fnn.root.W"], X.T @ dR0, atol=1e-12)
