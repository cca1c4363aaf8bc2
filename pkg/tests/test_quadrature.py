import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mrlab.quadrature import (
    InvalidSpecError,
    QuadratureSpec,
    cumulative,
    integrate,
    integrate_callable,
    refinement_verdict,
    tail_cumulative,
)


@pytest.mark.parametrize("kwargs", [
    dict(t_min=0.0),
    dict(t_min=-1.0),
    dict(t_min=10.0, t_max=1.0),
    dict(n_nodes=15),
    dict(rule="simpson"),
])
def test_bad_spec_rejected(kwargs):
    with pytest.raises(InvalidSpecError):
        QuadratureSpec(**kwargs)


def test_nodes_are_log_uniform():
    q = QuadratureSpec(1e-3, 1e3, 61)
    t = q.nodes
    assert t[0] == pytest.approx(1e-3)
    assert t[-1] == pytest.approx(1e3)
    assert np.allclose(np.diff(np.log(t)), q.log_step)


def test_widened_keeps_step_and_nodes():
    q = QuadratureSpec(1e-2, 1e2, 401)
    w = q.widened(2.0)
    assert w.log_step == pytest.approx(q.log_step)
    assert w.t_min < q.t_min and w.t_max > q.t_max
    # the original nodes are a subset of the widened ones
    k = (w.n_nodes - q.n_nodes) // 2
    assert np.allclose(w.nodes[k:k + q.n_nodes], q.nodes, rtol=1e-12)


def test_extended_nodes_offset():
    q = QuadratureSpec(1e-2, 1e2, 101)
    t, off = q.extended_nodes(1.0)
    assert np.allclose(t[off:off + q.n_nodes], q.nodes, rtol=1e-12)


@pytest.mark.parametrize("fn,exact", [
    (lambda t: np.exp(-t), 1.0),
    (lambda t: 1.0 / (1.0 + t) ** 2, 1.0),
    (lambda t: t ** -0.5 / (1.0 + t), math.pi),
    (lambda t: t * np.exp(-t ** 2), 0.5),
])
def test_improper_integrals(fn, exact):
    assert integrate_callable(fn, QuadratureSpec()) == pytest.approx(exact, rel=1e-6)


def test_power_tails_recover_truncated_mass():
    # t^-0.9/(1+t): most of the mass near 0 lies below t_min
    q = QuadratureSpec(1e-3, 1e3, 2048)
    t = q.nodes
    exact = math.pi / math.sin(0.9 * math.pi)
    val = integrate(t ** -0.9 / (1 + t), t)
    bare = integrate(t ** -0.9 / (1 + t), t, lower=False, upper=False)
    assert val == pytest.approx(exact, rel=1e-2)
    assert abs(val - exact) < 0.1 * abs(bare - exact)


def test_non_integrable_tail_is_infinite():
    t = QuadratureSpec().nodes
    assert integrate(1.0 / (1.0 + t), t) == math.inf


def test_cumulative_and_tail_add_up():
    t = QuadratureSpec(1e-4, 1e4, 800).nodes
    g = np.exp(-t) * t ** 0.3
    total = integrate(g, t)
    c = cumulative(g, t)
    r = tail_cumulative(g, t)
    assert np.allclose(c + r, total, rtol=1e-10)
    assert np.all(np.diff(c) >= 0)


@settings(max_examples=30, deadline=None)
@given(mu=st.floats(0.05, 0.95), scale=st.floats(0.1, 10.0))
def test_beta_integral(mu, scale):
    # int_0^inf s^-mu / (scale + s) ds = scale^-mu pi / sin(pi mu)
    q = QuadratureSpec(1e-6, 1e6, 2048)
    val = integrate_callable(lambda s: s ** -mu / (scale + s), q)
    assert val == pytest.approx(scale ** -mu * math.pi / math.sin(math.pi * mu), rel=1e-3)


def test_refinement_verdicts():
    q = QuadratureSpec(1e-3, 1e3, 256)
    conv = refinement_verdict(lambda s: integrate_callable(lambda t: np.exp(-t), s), q)
    div = refinement_verdict(lambda s: math.log(s.t_max), q)
    assert conv[1] == "finite"
    assert div[1] == "diverging"
    assert len(conv[2]) == 3
