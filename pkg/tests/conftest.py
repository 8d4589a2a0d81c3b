import pytest

from toriclg import RunConfig, set_config


@pytest.fixture(autouse=True)
def _fresh_config():
    # several code paths (the CLI in particular) mutate the process-wide
    # configuration; keep tests independent of each other
    set_config(RunConfig())
    yield
    set_config(RunConfig())
