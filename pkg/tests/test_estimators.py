import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from hypwalls import BianchiDomain, DirichletDomain, IsometryClassifier
from hypwalls.estimators import check_matrices, check_matrix, check_points
from hypwalls.exceptions import DeterminantError, DomainError
from hypwalls.fixtures import figure_eight
from hypwalls.models import MoebiusMatrix


@pytest.fixture(scope="module")
def bianchi():
    return BianchiDomain(d=5).fit()


def test_params_round_trip():
    est = DirichletDomain(max_word_len=2, norm_bound=12.0)
    params = est.get_params()
    assert params["max_word_len"] == 2 and params["norm_bound"] == 12.0
    twin = clone(est).set_params(samples_per_wall=50)
    assert twin.samples_per_wall == 50 and est.samples_per_wall == 200
    assert BianchiDomain(d=7).get_params()["d"] == 7


def test_dirichlet_fit_predict_transform():
    est = DirichletDomain(max_word_len=4, norm_bound=60).fit([[[1, 2], [0, 1]], [[1, 0], [2, 1]]])
    assert est.n_faces_ == 4 and est.spec_.fuchsian
    labels = est.predict([[0.0, 0.0, 2.0], [0.5, 0.0, 0.1], [1.0, 0.0, 3.0]])
    assert labels.tolist() == [1, -1, 0]
    out = est.transform([[4.3, 0.0, 0.7]])
    assert est.predict(out).tolist() != [-1]
    assert est.df_report().is_df


def test_dirichlet_accepts_group_spec():
    est = DirichletDomain(max_word_len=3, norm_bound=30).fit(figure_eight())
    assert est.n_faces_ == 12
    rep = est.df_report()
    assert not rep.is_df and len(rep.witnesses) == 8


def test_bianchi_estimator(bianchi):
    assert bianchi.class_number_ == 2 and len(bianchi.ideal_points_) == 2
    assert bianchi.df_report().is_df
    rng = np.random.default_rng(0)
    X = np.column_stack([rng.uniform(-3, 3, 10), rng.uniform(-3, 3, 10), rng.uniform(0.2, 2, 10)])
    Y = bianchi.transform(X)
    assert Y.shape == X.shape
    assert np.all(bianchi.predict(Y) >= 0)
    # transform is a projection
    assert np.allclose(bianchi.transform(Y), Y, atol=1e-12)


def test_not_fitted():
    with pytest.raises(NotFittedError):
        DirichletDomain().predict([[0, 0, 1]])
    with pytest.raises(NotFittedError):
        BianchiDomain().df_report()
    with pytest.raises(NotFittedError):
        IsometryClassifier().predict([np.eye(2)])


def test_classifier():
    mats = [np.eye(2), [[1, 1], [0, 1]], [[2, 1], [1, 1]], [[1, -2], [1, -1]], [[2j, 0], [0, -0.5j]]]
    want = ["identity", "parabolic", "hyperbolic", "elliptic", "loxodromic"]
    assert IsometryClassifier().fit().predict(mats).tolist() == want
    assert IsometryClassifier(method="geometric").fit().predict(mats[1:]).tolist() == want[1:]
    with pytest.raises(ValueError):
        IsometryClassifier(method="vibes").fit()


def test_validation_helpers():
    assert check_matrix([1, 1, 0, 1]).isclose(MoebiusMatrix(1, 1, 0, 1))
    g = MoebiusMatrix(1, 1, 0, 1)
    assert check_matrix(g) is g and check_matrices(g) == [g]
    assert len(check_matrices(np.array([np.eye(2), np.eye(2)]))) == 2
    with pytest.raises(ValueError):
        check_matrix(np.eye(3))
    with pytest.raises(ValueError):
        check_matrix([[np.nan, 0], [0, 1]])
    with pytest.raises(DeterminantError):
        check_matrix([[1, 1], [0, 2]])
    z, r = check_points([[0.5, 0.25, 1.0]])
    assert z[0] == 0.5 + 0.25j and r[0] == 1.0
    with pytest.raises(ValueError):
        check_points([[0.0, 1.0]])
    with pytest.raises(DomainError):
        check_points([[0.0, 0.0, 0.0]])
    with pytest.raises(ValueError):
        DirichletDomain(max_word_len=0).fit([[1, 1], [0, 1]])
