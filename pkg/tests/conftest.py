import warnings

import pytest
from scipy.integrate import IntegrationWarning


@pytest.fixture(autouse=True)
def _quiet_quadpack():
    # oscillatory QUADPACK rules warn noisily while still hitting tolerance;
    # accuracy is asserted explicitly wherever it matters
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        yield
