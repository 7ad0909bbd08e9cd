import random

import pytest
from hypothesis import HealthCheck, settings

from toricnl.catalog import NAMES, catalog

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

WPS_EXAMPLES = ("wps:1,1,2,3", "wps:1,1,2,2", "wps:3,3,4,4", "wps:1,2,2,3")
ALL_VARIETIES = NAMES + WPS_EXAMPLES


@pytest.fixture(params=ALL_VARIETIES)
def variety(request):
    return catalog(request.param)


@pytest.fixture
def rng():
    return random.Random(12345)
