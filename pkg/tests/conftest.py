import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from frame4.frames import FramePath
from frame4.linalg import orthonormality_defect

settings.register_profile(
    "frame4", deadline=None, max_examples=25,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("frame4")

ACCEPTANCE_LINES = []

# largest orthonormality defect of any FramePath built during the session
FRAME_DEFECTS = {"max": 0.0, "count": 0}
_post_init = FramePath.__post_init__


def _recording_post_init(self):
    _post_init(self)
    FRAME_DEFECTS["max"] = max(FRAME_DEFECTS["max"], orthonormality_defect(self.Z))
    FRAME_DEFECTS["count"] += 1


FramePath.__post_init__ = _recording_post_init


def record_acceptance(number, passed, detail):
    ACCEPTANCE_LINES.append(
        (number, f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}"))


def pytest_collection_modifyitems(items):
    # acceptance checks read the suite-wide frame record, so run them last
    items.sort(key=lambda it: it.nodeid.startswith("tests/test_acceptance.py")
               or "test_acceptance.py" in it.nodeid)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def bump_sweeps():
    from frame4.gallery import BUMP_NO_C, BUMP_YES_C, empirical_type_c_sweep
    return {"bumpNoC": empirical_type_c_sweep(BUMP_NO_C),
            "bumpYesC": empirical_type_c_sweep(BUMP_YES_C)}


def random_skew(rng, scale=1.0):
    from frame4.linalg import skew_from_upper
    return scale * skew_from_upper(rng.normal(size=6))
