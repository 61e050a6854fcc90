import hypothesis
import pytest

from coarsekit import (make_cluster_space, make_free_group, make_grid,
                       make_paired_columns, make_square_tuples, make_ternary)

hypothesis.settings.register_profile(
    "suite", max_examples=40, deadline=None,
    suppress_health_check=[hypothesis.HealthCheck.too_slow])
hypothesis.settings.load_profile("suite")


@pytest.fixture(scope="session")
def n_window():
    return make_grid(False, 1, 120)


@pytest.fixture(scope="session")
def z_window():
    return make_grid(True, 1, 60)


@pytest.fixture(scope="session")
def z2_window():
    return make_grid(True, 2, 10)


@pytest.fixture(scope="session")
def n2_window():
    return make_grid(False, 2, 12)


@pytest.fixture(scope="session")
def f2_window():
    return make_free_group(2, 5)


@pytest.fixture(scope="session")
def m_window():
    return make_ternary(7)


@pytest.fixture(scope="session")
def m1_window():
    return make_square_tuples(1, 10000)


@pytest.fixture(scope="session")
def m2_window():
    return make_square_tuples(2, 7500)


@pytest.fixture(scope="session")
def m32_window():
    return make_paired_columns(2000)


@pytest.fixture(scope="session")
def cluster_window():
    # unit-diameter pattern, gap(n) = 2n, six clusters
    return make_cluster_space([[0, 1], [1, 0]], lambda n: 2 * n, 6)


@pytest.fixture(scope="session")
def far_cluster_window():
    # gaps far beyond every detector bound used in the tests
    return make_cluster_space([[0, 1], [1, 0]], lambda n: 100 * n, 5)


@pytest.fixture(scope="session")
def zoo(n_window, z_window, z2_window, f2_window, m_window, m2_window,
        m32_window, cluster_window):
    return {
        "N": n_window, "Z": z_window, "Z2": z2_window, "F2": f2_window,
        "M": m_window, "M2": m2_window, "M32": m32_window,
        "clusters": cluster_window,
    }
