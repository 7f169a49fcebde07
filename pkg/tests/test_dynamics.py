"""Closed-form sums, trajectories, and the configuration-sum cross-check."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from xychain import (
    CapExceededError,
    ChainParams,
    ConfigError,
    FermionConfig,
    MatElemKind,
    Parity,
    Trajectory,
    ab_sums,
    build_sectors,
    matelem_diagonal,
    matelem_offdiag,
    pz_closed_form,
    pz_config_sum,
    pz_trajectory,
    spectral_table,
)


def _tables(params):
    odd, even = build_sectors(params)
    return spectral_table(params, odd), spectral_table(params, even)


def test_ab_sums_frozen_values():
    # mpmath dps=40 re-summation of the sector averages
    t_odd, t_even = _tables(ChainParams(N=8, kappa=1.0, gamma=0.5, h=2.0))
    s = ab_sums(t_odd, t_even, 3.7)
    assert abs(s.A_odd - (-0.17072209073296224)) < 1e-12
    assert abs(s.B_odd - (-0.34323769258978512)) < 1e-12
    assert abs(s.A_even - (-0.16941187358111526)) < 1e-12
    assert abs(s.B_even - (-0.34849037192146825)) < 1e-12


def test_ab_sums_at_time_zero_exact():
    t_odd, t_even = _tables(ChainParams(N=6, kappa=1.0, gamma=1.0, h=2.0))
    s = ab_sums(t_odd, t_even, 0.0)
    assert (s.A_odd, s.A_even, s.B_odd, s.B_even) == (1.0, 1.0, 0.0, 0.0)
    assert s.sum_of_squares == 2.0


def test_ab_sums_table_validation():
    t_odd, t_even = _tables(ChainParams(N=6, h=2.0))
    o2, e2 = _tables(ChainParams(N=6, h=3.0))
    with pytest.raises(ConfigError):
        ab_sums(t_even, t_odd, 1.0)  # swapped order
    with pytest.raises(ConfigError):
        ab_sums(t_odd, e2, 1.0)  # mixed parameters


def test_pz_frozen_values():
    # mpmath dps=40 closed-form reference values
    assert abs(pz_closed_form(ChainParams(N=4, h=5.0), 1.0, 1.0) - 0.58555232287418215) < 1e-12
    p = ChainParams(N=6, kappa=1.0, gamma=0.5, h=3.0)
    assert abs(pz_closed_form(p, 0.8, 2.5) - 0.0019800876281502892) < 1e-12


def test_pz_at_time_zero_and_linearity():
    p = ChainParams(N=10, kappa=1.0, gamma=0.7, h=4.0)
    assert pz_closed_form(p, 0.37, 0.0) == 0.37
    base = pz_closed_form(p, 0.5, 2.2)
    assert pz_closed_form(p, 1.0, 2.2) == 2.0 * base  # doubling is exact
    third = pz_closed_form(p, 0.3, 2.2)
    assert abs(third - 0.6 * base) / abs(third) < 1e-13


params_strategy = st.builds(
    lambda n2, kappa, gamma, ratio: ChainParams(
        N=2 * n2, kappa=kappa, gamma=gamma, h=kappa * (1.0 + ratio)
    ),
    st.integers(min_value=2, max_value=20),
    st.floats(min_value=0.2, max_value=3.0),
    st.floats(min_value=0.0, max_value=1.0),
    st.floats(min_value=0.05, max_value=8.0),
)


@settings(max_examples=80, deadline=None)
@given(params_strategy, st.floats(min_value=0.0, max_value=100.0))
def test_time_reversal_and_bounds(params, t):
    assert pz_closed_form(params, 1.0, -t) == pz_closed_form(params, 1.0, t)
    val = pz_closed_form(params, 1.0, t)
    assert 0.0 <= val <= 1.0 + 1e-9
    t_odd, t_even = _tables(params)
    s = ab_sums(t_odd, t_even, t)
    for a in (s.A_odd, s.A_even):
        assert abs(a) <= 1.0 + 1e-12
    for b in (s.B_odd, s.B_even):
        assert abs(b) <= 1.0 + 1e-12


def test_trajectory_bit_identical_to_scalar():
    params = ChainParams(N=14, kappa=0.9, gamma=0.4, h=3.0)
    grid = np.array([0.0, 0.31, 1.7, 2.9, 14.242, 77.1])
    traj = pz_trajectory(params, 0.7, grid)
    assert traj.method == "closed_form"
    assert traj.meta["bath"] == "infinite_T"
    for i, t in enumerate(grid):
        assert traj.samples[i] == pz_closed_form(params, 0.7, float(t))


def test_trajectory_validation():
    params = ChainParams(N=4, h=5.0)
    with pytest.raises(ConfigError):
        Trajectory(np.array([0.0, 0.0]), np.array([1.0, 1.0]), params, "closed_form")
    with pytest.raises(ConfigError):
        Trajectory(np.array([0.0, 1.0]), np.array([1.0]), params, "closed_form")
    with pytest.raises(ConfigError):
        Trajectory(np.array([0.0]), np.array([1.5]), params, "closed_form")
    with pytest.raises(ConfigError):
        Trajectory(np.array([0.0]), np.array([1.0]), params, "guesswork")
    traj = Trajectory(np.array([0.0, 1.0]), np.array([[0.6, 0.0, 0.8]] * 2), params, "ed_oracle")
    assert traj.is_vector and traj.n_samples == 2


def test_regular_stage_agreement_large_ring():
    # pz hugs p0z J0^2(kappa t) until t ~ N/2 on a big ring
    from xychain import regular_stage_pz

    params = ChainParams(N=100, kappa=1.0, gamma=0.0, h=5.0)
    grid = np.array([0.5, 2.0, 17.3, 50.0])
    traj = pz_trajectory(params, 1.0, grid)
    ref = regular_stage_pz(1.0, 1.0, grid)
    assert np.abs(traj.samples - ref).max() < 0.02
    # J0(2)^2 = 0.050127080984469569 (mpmath)
    assert abs(traj.samples[1] - 0.050127080984469569) < 0.01


def test_fermion_config_validation():
    cfg = FermionConfig.from_momenta([-1, 0, 1])
    assert cfg.parity is Parity.ODD and cfg.occupied_q2 == (-2, 0, 2) and cfg.M == 3
    cfg2 = FermionConfig.from_momenta([])
    assert cfg2.parity is Parity.EVEN
    with pytest.raises(ConfigError):
        FermionConfig(Parity.ODD, (0, 2))  # even count in odd sector
    with pytest.raises(ConfigError):
        FermionConfig(Parity.EVEN, (2, 0))  # not increasing
    with pytest.raises(ConfigError):
        FermionConfig(Parity.EVEN, (0, 1))  # mixed momentum grids


def test_matelem_isotropic_values():
    params = ChainParams(N=6, kappa=1.0, gamma=0.0, h=2.5)
    t_odd, _ = _tables(params)
    # gamma = 0: all theta vanish, so the diagonal is (2M - N)/N exactly
    assert matelem_diagonal(FermionConfig.from_momenta([-1, 0, 1]), t_odd) == 0.0
    assert matelem_diagonal(FermionConfig.from_momenta([0]), t_odd) == (2 - 6) / 6
    assert matelem_offdiag(MatElemKind.SWAP, 0, 1, t_odd) == 2.0 / 6.0
    assert matelem_offdiag(MatElemKind.PAIR_CREATE, 0, 1, t_odd) == 0.0
    with pytest.raises(ConfigError):
        matelem_offdiag(MatElemKind.SWAP, 1, 1, t_odd)
    with pytest.raises(ConfigError):
        matelem_diagonal(FermionConfig.from_momenta([0]), _tables(params)[1])


def test_matelem_membership_checked():
    params = ChainParams(N=4, h=5.0)
    t_odd, _ = _tables(params)
    with pytest.raises(ConfigError):
        matelem_diagonal(FermionConfig.from_momenta([7]), t_odd)  # q=7 not on the N=4 ring
    with pytest.raises(ConfigError):
        matelem_offdiag(MatElemKind.SWAP, 0, 9, t_odd)


def test_config_sum_matches_closed_form():
    for N in (4, 6):
        for gamma in (0.0, 0.5, 1.0):
            for h in (2.0, 5.0):
                params = ChainParams(N=N, kappa=1.0, gamma=gamma, h=h)
                # t = 0 is the sum rule: every configuration pair must add to p0z
                assert abs(pz_config_sum(params, 0.9, 0.0) - 0.9) < 1e-12
                for t in (0.7, 3.3):
                    a = pz_closed_form(params, 1.0, t)
                    b = pz_config_sum(params, 1.0, t)
                    assert abs(a - b) < 1e-12


def test_config_sum_cap():
    params = ChainParams(N=12, h=5.0)
    with pytest.raises(CapExceededError):
        pz_config_sum(params, 1.0, 1.0)
    assert pz_config_sum(ChainParams(N=4, h=5.0), 1.0, 1.0, cap=4) > 0.0
