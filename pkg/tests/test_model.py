import numpy as np
import pytest

from trajmine.model import (
    BASKETBALL_ROLES,
    Dataset,
    Point2D,
    SubMatrixRef,
    TrajectoryMatrix,
    crop_attack,
    extract_submatrix,
    generic_roles,
    make_dataset,
    validate_dataset,
)

from conftest import build_matrix


def _matrix(length=10, agents=2, label=1, attack_id="a", fill=None):
    coords = np.arange(length * agents * 2, dtype=float).reshape(length, agents, 2)
    if fill is not None:
        coords[:] = fill
    return build_matrix(attack_id, label, coords)


def test_point_rejects_non_finite():
    with pytest.raises(ValueError):
        Point2D(float("nan"), 0.0)
    with pytest.raises(ValueError):
        Point2D(0.0, float("inf"))
    assert tuple(Point2D(1.0, 2.0)) == (1.0, 2.0)


def test_matrix_validation():
    with pytest.raises(ValueError):
        _matrix(label=0)
    with pytest.raises(ValueError):
        build_matrix("a", 1, np.zeros((0, 2, 2)))
    with pytest.raises(ValueError):
        build_matrix("a", 1, np.zeros((3, 2, 3)))


def test_matrix_is_frozen():
    m = _matrix()
    with pytest.raises(ValueError):
        m.coords[0, 0, 0] = 99.0
    # constructing from a caller array must not alias it
    src = np.zeros((3, 1, 2))
    m2 = build_matrix("b", 1, src)
    src[0, 0, 0] = 42.0
    assert m2.coords[0, 0, 0] == 0.0


def test_extract_full_window_is_identity():
    m = _matrix(length=10)
    view = extract_submatrix(m, 0, 9)
    assert view.shape == (m.n_agents, 10, 2)
    assert (view.transpose(1, 0, 2) == m.coords).all()


def test_extract_interior_window():
    m = _matrix(length=10)
    view = extract_submatrix(m, 3, 7)
    assert view.shape == (m.n_agents, 5, 2)
    assert (view[:, 0] == m.coords[3]).all()


def test_extract_out_of_range():
    m = _matrix(length=10)
    with pytest.raises(IndexError, match="12"):
        extract_submatrix(m, 7, 12)
    with pytest.raises(IndexError):
        extract_submatrix(m, -1, 3)


def test_extract_suffix_consistency(rng):
    # window [s, e] restricted to offsets [t-s .. e-s] equals window [t, e]
    m = build_matrix("a", 1, rng.normal(size=(12, 3, 2)))
    for _ in range(50):
        s = int(rng.integers(0, 10))
        e = int(rng.integers(s, 12))
        t = int(rng.integers(s, e + 1))
        whole = extract_submatrix(m, s, e)
        assert (whole[:, t - s :] == extract_submatrix(m, t, e)).all()


def test_crop_examples():
    m = _matrix(length=50)
    cropped = crop_attack(m, 10, 40)
    assert cropped.n_frames == 31
    assert cropped.attack_id == m.attack_id and cropped.label == m.label
    assert (cropped.coords == m.coords[10:41]).all()

    unchanged = crop_attack(m, 0, 49)
    assert (unchanged.coords == m.coords).all()

    with pytest.raises(IndexError):
        crop_attack(m, 30, 20)
    with pytest.raises(IndexError):
        crop_attack(m, 0, 50)


def test_crop_idempotent():
    m = _matrix(length=20)
    once = crop_attack(m, 5, 15)
    twice = crop_attack(once, 0, once.n_frames - 1)
    assert (once.coords == twice.coords).all()


def test_submatrix_ref_invariants():
    r = SubMatrixRef("a", 2, 5)
    assert r.length == 4
    with pytest.raises(ValueError):
        SubMatrixRef("a", 5, 2)
    with pytest.raises(ValueError):
        SubMatrixRef("a", -1, 2)


def test_dataset_counts_and_lookup():
    ds = make_dataset([_matrix(attack_id="x", label=1), _matrix(attack_id="y", label=-1)])
    assert len(ds) == 2 and ds.n_pos == 1 and ds.n_neg == 1
    assert ds.matrix("y").attack_id == "y"
    with pytest.raises(KeyError):
        ds.matrix("zz")
    assert ds.roles == generic_roles(2)


def test_dataset_role_inference():
    five = make_dataset([build_matrix("a", 1, np.zeros((3, 5, 2)))])
    assert five.roles == BASKETBALL_ROLES
    with pytest.raises(ValueError):
        Dataset(
            matrices=(build_matrix("a", 1, np.zeros((3, 2, 2))),),
            roles=("only_one",),
        )


def test_validate_duplicate_id():
    ds = make_dataset([_matrix(attack_id="dup"), _matrix(attack_id="dup", label=-1)])
    report = validate_dataset(ds)
    assert len(report) == 1
    assert report[0].rule == "duplicate-id" and report[0].attack_id == "dup"


def test_validate_non_finite():
    coords = np.zeros((4, 2, 2))
    coords[2, 1, 0] = np.nan
    ds = make_dataset([build_matrix("bad", 1, coords), _matrix(attack_id="ok", label=-1)])
    report = validate_dataset(ds)
    assert len(report) == 1
    assert report[0].rule == "non-finite-coordinate" and report[0].attack_id == "bad"


def test_validate_figure_like_dataset_clean(rng):
    # well-formed 12-attack dataset with 5 positive / 7 negative labels
    mats = [
        build_matrix(f"m{i}", 1 if i < 5 else -1, rng.normal(size=(8 + i, 5, 2)))
        for i in range(12)
    ]
    ds = make_dataset(mats)
    assert ds.n_pos == 5 and ds.n_neg == 7
    assert validate_dataset(ds) == []


def test_validate_short_attacks_flagged():
    ds = make_dataset([_matrix(length=3, attack_id="short"), _matrix(attack_id="long", label=-1)])
    assert validate_dataset(ds) == []
    report = validate_dataset(ds, min_length=5)
    assert [v.rule for v in report] == ["short-attack"]
    assert report[0].attack_id == "short"
