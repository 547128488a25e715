import pytest

from bdyqft.catalog import localize, standard_catalog
from bdyqft.fixtures import char_catalog, ext_catalog

ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, text = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {text}")


@pytest.fixture
def record():
    def _record(k, ok, text):
        ACCEPTANCE[k] = (bool(ok), text)
        print(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {text}")
        return ok

    return _record


@pytest.fixture(scope="session")
def std():
    C = standard_catalog()
    L, D = localize(C)
    return C, L, D


@pytest.fixture(scope="session")
def ext_L():
    return ext_catalog()


@pytest.fixture(scope="session")
def char_full():
    return char_catalog(full=True)


@pytest.fixture(scope="session")
def kg():
    from bdyqft.kgtheory import build_interior_theory, build_kext, default_setup

    S = default_setup()
    K = build_interior_theory(S)
    Kext = build_kext(K, S)
    return S, K, Kext
