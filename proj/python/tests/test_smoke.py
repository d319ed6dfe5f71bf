import numpy as np
import pytest

try:
    import zonoreach as zr
    zr.Zonotope
except (ImportError, AttributeError):
    import _zonoreach as zr


def interval(lo, hi):
    return zr.Zonotope.box(np.array([lo]), np.array([hi]))


def scalar_system(w=0.1):
    one = np.eye(1)
    return zr.SystemModel(one, one, one, np.zeros(1), interval(-1.0, 1.0), np.array([-w]), np.array([w]))


def test_zonotope_basics():
    Z = zr.Zonotope(np.array([[1.0, 0.0, 1.0], [0.0, 1.0, 1.0]]), np.zeros(2))
    assert Z.dim == 2
    assert Z.num_generators == 3
    assert Z.order == pytest.approx(1.5)
    assert Z.volume() == pytest.approx(12.0)
    assert Z.support(np.array([1.0, 0.0])) == pytest.approx(2.0)
    assert Z.contains(np.array([1.9, 1.9]))
    assert not Z.contains(np.array([2.1, 0.0]))


def test_box_difference_is_exact():
    Z = zr.Zonotope.box(np.array([-1.0, -2.0]), np.array([1.0, 2.0]))
    res = zr.minkowski_difference(Z, np.eye(2), np.array([-0.25, -0.5]), np.array([0.25, 0.5]))
    lo, hi = res.under.bounding_box()
    np.testing.assert_allclose(hi, [0.75, 1.5], atol=1e-7)
    np.testing.assert_allclose(lo, [-0.75, -1.5], atol=1e-7)
    assert zr.support_dominates(res.under, res.over)
    sa = zr.sadraddini_under(Z, np.eye(2), np.array([-0.25, -0.5]), np.array([0.25, 0.5]))
    assert sa.volume() == pytest.approx(res.under.volume(), rel=1e-7)


def test_reduction_is_contained():
    rng = np.random.default_rng(3)
    Z = zr.Zonotope(rng.normal(size=(2, 8)), np.zeros(2))
    R = zr.reduce_to_order(Z, 2.0)
    assert R.num_generators == 4
    assert zr.support_dominates(R, Z)
    _, merge = zr.reduce_once(Z)
    assert merge.i < merge.j


def test_scalar_chain_and_controller():
    sys = scalar_system()
    seq = zr.compute_brs(sys, interval(-1.0, 1.0), 3)
    assert seq.empty_from is None
    radii = [Z.bounding_box()[1][0] for Z in seq.under]
    np.testing.assert_allclose(radii, [1.0, 1.9, 2.8, 3.7], atol=1e-7)

    ctrl = zr.Controller(sys, seq)
    u = ctrl.input(np.array([1.5]), 0)
    assert -1.0 - 1e-9 <= u[0] <= -0.6 + 1e-9
    with pytest.raises(zr.NotInBrs):
        ctrl.input(np.array([5.0]), 2)

    traj = ctrl.simulate(np.array([3.6]), "vertex", 11)
    assert traj.success
    assert len(traj.states) == 4


def test_problem_round_trip():
    assert "lateral" in zr.builtin_case_names()
    p = zr.builtin_case("lateral")
    q = zr.parse_problem(p.to_json())
    assert q.to_json() == p.to_json()
    with pytest.raises(zr.SchemaError):
        zr.parse_problem('{"schema": "zonoreach/9"}')


def test_bench_is_deterministic():
    a = zr.minkdiff_bench_csv(6, seed=3, threads=1)
    b = zr.minkdiff_bench_csv(6, seed=3, threads=2)
    assert a == b
    assert a.startswith("instance,n,N,M,N_W,method,status")
