import os
import sys

import pytest
from hypothesis import HealthCheck, settings

from qbcn.qnum import PrecisionContext

settings.register_profile(
    "default",
    max_examples=int(os.environ.get("QBCN_EXAMPLES", "25")),
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

sys.path.insert(0, os.path.dirname(__file__))


@pytest.fixture
def ctx():
    return PrecisionContext("0.35", 256)

