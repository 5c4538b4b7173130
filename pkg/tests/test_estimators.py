import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline

from tailspace import core
from tailspace.core import CubeFunction
from tailspace.estimators import (
    HeatSemigroup,
    InfluenceProfile,
    TailProjector,
    WalshHadamardTransformer,
)


@pytest.fixture
def batch(rng):
    return rng.uniform(-1, 1, size=(5, 32))


def test_walsh_matches_functional(batch):
    est = WalshHadamardTransformer().fit(batch)
    out = est.transform(batch)
    for row, coeffs in zip(batch, out):
        np.testing.assert_allclose(coeffs, core.fwht(CubeFunction(row)).coeffs, atol=1e-14)
    np.testing.assert_allclose(est.inverse_transform(out), batch, atol=1e-14)


def test_heat_matches_functional(batch):
    out = HeatSemigroup(t=0.3).fit_transform(batch)
    for row, got in zip(batch, out):
        np.testing.assert_allclose(got, core.heat(CubeFunction(row), 0.3).values, atol=1e-14)


def test_pipeline_semigroup(batch):
    pipe = make_pipeline(HeatSemigroup(t=0.2), HeatSemigroup(t=0.5))
    np.testing.assert_allclose(
        pipe.fit_transform(batch), HeatSemigroup(t=0.7).fit_transform(batch), atol=1e-12
    )


def test_tail_projector(batch):
    proj = TailProjector(k=2).fit(batch)
    out = proj.transform(batch)
    for row in out:
        assert core.tail_certificate(CubeFunction(row), 2, include_constant=True).passes(1e-12)
    # projection is idempotent
    np.testing.assert_allclose(proj.transform(out), out, atol=1e-12)
    kept = TailProjector(k=2, include_constant=False).fit_transform(batch)
    np.testing.assert_allclose(kept.mean(axis=1), batch.mean(axis=1), atol=1e-12)


def test_influence_profile_pivotal():
    f = core.from_callable(3, lambda x: 1 if sum(x) > 0 else -1, kind="pm1")
    prof = InfluenceProfile().fit_transform(f.values[None, :])
    np.testing.assert_allclose(prof, [[0.5, 0.5, 0.5]])
    half = InfluenceProfile(convention="resampling").fit_transform(f.values[None, :])
    np.testing.assert_allclose(half, [[0.25, 0.25, 0.25]])


def test_get_params_and_clone():
    est = HeatSemigroup(t=2.5)
    assert est.get_params() == {"t": 2.5}
    c = clone(est)
    assert c.t == 2.5 and c is not est
    assert TailProjector(k=3).set_params(k=1).k == 1


def test_validation_errors(batch):
    with pytest.raises(NotFittedError):
        WalshHadamardTransformer().transform(batch)
    with pytest.raises(ValueError):
        WalshHadamardTransformer().fit(np.ones((2, 6)))
    est = WalshHadamardTransformer().fit(batch)
    with pytest.raises(ValueError):
        est.transform(np.ones((1, 16)))
    with pytest.raises(ValueError):
        HeatSemigroup(t=-1).fit(batch)
    with pytest.raises(ValueError):
        TailProjector(k=9).fit(batch)
    with pytest.raises(ValueError):
        InfluenceProfile(convention="flip").fit(batch)
