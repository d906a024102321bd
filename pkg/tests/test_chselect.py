"""Cluster-head selection: threshold scheme and benchmark selectors."""
import numpy as np
import pytest

from uavclust.chselect import (cluster_avg_speed, select_ch,
                               select_ch_random, select_ch_vmasc)

from conftest import make_cam


def test_cluster_avg_speed_oracle():
    assert cluster_avg_speed([10.0, 12.0, 14.0]) == pytest.approx(12.0)
    assert cluster_avg_speed([7.5]) == pytest.approx(7.5)
    with pytest.raises(ValueError):
        cluster_avg_speed([])


def test_select_ch_picks_min_speed_difference_when_all_pass():
    cams = [make_cam(0, 12.0, neighbors={1, 2}),
            make_cam(1, 13.0, neighbors={0, 2}),
            make_cam(2, 20.0, neighbors={0, 1})]
    decision = select_ch(cams, v_cl=15.0, r_u=500.0, dt=10.0,
                         eps_distance=100.0, eps_neighbors=1)
    assert decision.chosen == 1  # v_d = 2, minimal
    assert not decision.degraded
    assert decision.examined[0][0] == 1


def test_select_ch_skips_candidate_failing_residual():
    cams = [make_cam(0, 12.0, neighbors={1, 2}),
            make_cam(1, 13.0, neighbors={0, 2}),
            make_cam(2, 20.0, neighbors={0, 1})]
    # force a failing residual for the closest-speed candidate only
    residuals = {0: 400.0, 1: -50.0, 2: 400.0}
    decision = select_ch(cams, v_cl=15.0, r_u=500.0, dt=10.0,
                         eps_distance=100.0, eps_neighbors=1,
                         residual_fn=lambda cam: residuals[cam.vehicle_id])
    assert decision.chosen == 0  # next in v_d order after the reject
    assert not decision.degraded
    assert [e[0] for e in decision.examined] == [1, 0]


def test_select_ch_singleton_degraded_fallback():
    cams = [make_cam(5, 4.0, neighbors=set())]
    decision = select_ch(cams, v_cl=4.0, r_u=500.0, dt=10.0,
                         eps_distance=100.0, eps_neighbors=1)
    assert decision.chosen == 5
    assert decision.degraded


def test_select_ch_degraded_picks_min_vd():
    cams = [make_cam(0, 10.0), make_cam(1, 12.0), make_cam(2, 30.0)]
    decision = select_ch(cams, v_cl=13.0, r_u=100.0, dt=70.0,
                         eps_distance=1e9, eps_neighbors=0)
    assert decision.degraded
    assert decision.chosen == 1  # closest to the cluster average


def test_select_ch_empty_cluster_rejected():
    with pytest.raises(ValueError):
        select_ch([], v_cl=0.0, r_u=500.0, dt=10.0,
                  eps_distance=100.0, eps_neighbors=1)


def test_select_ch_random_singleton_and_determinism():
    assert select_ch_random([7], np.random.default_rng(0)) == 7
    picks_a = [select_ch_random([3, 1, 2], np.random.default_rng(9))
               for _ in range(5)]
    picks_b = [select_ch_random([1, 2, 3], np.random.default_rng(9))
               for _ in range(5)]
    assert picks_a == picks_b  # member order does not matter, seed does
    with pytest.raises(ValueError):
        select_ch_random([], np.random.default_rng(0))


def test_select_ch_random_covers_all_members():
    rng = np.random.default_rng(4)
    seen = {select_ch_random([0, 1, 2], rng) for _ in range(200)}
    assert seen == {0, 1, 2}


def test_select_ch_vmasc_oracle():
    cams = [make_cam(0, 10.0), make_cam(1, 11.0), make_cam(2, 20.0)]
    # mean relative speeds: 5.5, 5.0, 9.5
    assert select_ch_vmasc(cams) == 1


def test_select_ch_vmasc_tie_and_singleton():
    cams = [make_cam(2, 15.0), make_cam(0, 15.0), make_cam(1, 15.0)]
    assert select_ch_vmasc(cams) == 0  # tie breaks to lowest id
    assert select_ch_vmasc([make_cam(9, 12.0)]) == 9
    with pytest.raises(ValueError):
        select_ch_vmasc([])


def test_select_ch_vmasc_matches_brute_force():
    rng = np.random.default_rng(11)
    for _ in range(200):
        n = int(rng.integers(1, 12))
        speeds = rng.uniform(5.0, 25.0, size=n).round(3)
        cams = [make_cam(i, float(speeds[i])) for i in range(n)]
        if n == 1:
            expect = {0}
        else:
            mat = np.abs(speeds[:, None] - speeds[None, :])
            means = mat.sum(axis=1) / (n - 1)
            # tolerance absorbs summation-order rounding between oracles
            near_min = means <= means.min() + 1e-9
            expect = {int(np.flatnonzero(near_min)[0])}
            if near_min.sum() > 1:
                expect = set(np.flatnonzero(near_min).tolist())
        assert select_ch_vmasc(cams) in expect
