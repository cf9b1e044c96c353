import pytest
from hypothesis import HealthCheck, settings

from services.prelude import prelude_term

settings.register_profile(
    "default",
    deadline=None,
    suppress_health_check=[
        HealthCheck.too_slow,
        HealthCheck.data_too_large,
        HealthCheck.large_base_example,
        HealthCheck.function_scoped_fixture,
    ],
)
settings.load_profile("default")


@pytest.fixture
def gate():
    """Look up an elaborated prelude gate by name."""
    return prelude_term


@pytest.fixture
def write_program(tmp_path):
    """Write source text to a temporary .qph file and return its path."""
    def _write(text: str, name: str = "program.qph") -> str:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)
    return _write
