import pytest

from dirichlet_morse import Point, build_stable_dirichlet, get_preset


@pytest.fixture(scope="session")
def modular():
    return build_stable_dirichlet(get_preset("modular"), Point.from_half_plane(2j))


@pytest.fixture(scope="session")
def ideal_square():
    return build_stable_dirichlet(get_preset("ideal-square"), Point.from_half_plane(1j))


@pytest.fixture(scope="session")
def gamma2():
    return build_stable_dirichlet(get_preset("gamma2"), Point.from_half_plane(2j))


@pytest.fixture
def verdict(capsys):
    """Print a single PASS/FAIL line past pytest's capture, then assert."""

    def _verdict(number, name, ok, detail=""):
        with capsys.disabled():
            print(f"\n[criterion {number}] {'PASS' if ok else 'FAIL'} {name} {detail}".rstrip())
        assert ok, f"criterion {number} failed: {detail}"

    return _verdict
