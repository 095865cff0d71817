import pytest


def pytest_addoption(parser):
    parser.addoption(
        "--seed",
        type=int,
        default=0xC0FFEE,
        help="base seed for the randomized property suites",
    )


@pytest.fixture
def seed(request) -> int:
    return request.config.getoption("--seed")
