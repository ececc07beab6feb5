import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from detdag import load_fixture  # noqa: E402


@pytest.fixture(scope="session")
def fixtures():
    """All bundled graphs, parsed once per session."""
    from detdag import FIXTURE_NAMES

    return {name: load_fixture(name) for name in FIXTURE_NAMES}
