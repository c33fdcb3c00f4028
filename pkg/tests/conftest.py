"""Shared fixtures: tiny domains sized for exact oracles."""

import numpy as np
import pytest

from reconplan.belief import ParticleBelief
from reconplan.hvac import HvacConfig, HvacState, Status

# Single location, single worker, all outcome probabilities on quarter-grain
# boundaries so 4 strata per draw cover the randomness exactly.
QUARTER_CFG = HvacConfig(
    n_locations=1,
    n_workers=1,
    avail_horizon=2,
    horizon=3,
    r_l=(-100.0,),
    x_l=(1,),
    r_w=(-10.0,),
    p_fix=((0.75, 0.5, 1.0),),
    ok_status_row=(0.5, 0.25, 0.25, 0.0),
    obs_rows=(
        (0.5, 0.25, 0.25, 0.0),
        (0.25, 0.5, 0.25, 0.0),
        (0.25, 0.25, 0.5, 0.0),
        (0.0, 0.0, 0.0, 1.0),
    ),
    p_avail=0.75,
    discount=0.9,
)

# Single location with the default probability tables, for filter tests.
FILTER_CFG = HvacConfig(
    n_locations=1,
    n_workers=1,
    avail_horizon=2,
    horizon=4,
    r_l=(-100.0,),
    x_l=(2,),
    r_w=(-5.0,),
    p_fix=((0.8, 0.9, 1.0),),
)

# Two-feature domain (1 location + 1 worker) with a longer horizon, for
# reconciliation problems that have non-trivial feasible regions.
TWO_FEATURE_CFG = HvacConfig(
    n_locations=1,
    n_workers=1,
    avail_horizon=2,
    horizon=6,
    r_l=(-60.0,),
    x_l=(2,),
    r_w=(-8.0,),
    p_fix=((0.8, 0.9, 1.0),),
)


def quarter_start_state() -> HvacState:
    return HvacState(
        statuses=(int(Status.MECH),),
        onsets=(1,),
        availability=((True,), (True,)),
        t=1,
    )


def point_mass_belief(state: HvacState) -> ParticleBelief:
    return ParticleBelief((state,), np.array([1.0]))


@pytest.fixture
def quarter_cfg():
    return QUARTER_CFG


@pytest.fixture
def filter_cfg():
    return FILTER_CFG
