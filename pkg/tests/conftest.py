import os

import gin
import hypothesis
import pytest

from tsif.catalog.loader import default_catalog

# Function-scoped fixtures only reset gin bindings.
shared = [hypothesis.HealthCheck.function_scoped_fixture]
hypothesis.settings.register_profile("dev", max_examples=30, deadline=None, suppress_health_check=shared)
hypothesis.settings.register_profile(
    "ci", max_examples=200, deadline=None, derandomize=True, suppress_health_check=shared
)
hypothesis.settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "dev"))


@pytest.fixture(scope="session")
def catalog():
    return default_catalog()


@pytest.fixture
def peaks_valleys(catalog):
    return catalog.parse_pair("nb_peak,nb_valley")


@pytest.fixture(autouse=True)
def clean_gin():
    gin.clear_config()
    yield
    gin.clear_config()
