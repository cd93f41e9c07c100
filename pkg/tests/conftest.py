import numpy as np
import pytest

_ACCEPTANCE_LINES: list[str] = []


def integer_sum_instance(rng: np.random.Generator, n: int, high: float = 10.0) -> np.ndarray:
    """Uniform values in [0, high] with one component bumped so the sum is an integer."""
    x = rng.uniform(0.0, high, n)
    total = x.sum()
    x[rng.integers(n)] += np.ceil(total) - total
    return x


def random_corpus(size: int, seed: int) -> list[np.ndarray]:
    rng = np.random.default_rng(seed)
    return [integer_sum_instance(rng, int(rng.integers(2, 11))) for _ in range(size)]


@pytest.fixture(scope="session")
def corpus():
    """The 1000-instance corpus shared by several acceptance criteria."""
    return random_corpus(1000, seed=20141201)


@pytest.fixture
def make_instance():
    return integer_sum_instance


@pytest.fixture(scope="session")
def acceptance_log():
    def log(number: int, title: str, ok: bool, detail: str = "") -> None:
        status = "PASS" if ok else "FAIL"
        line = f"[{status}] criterion {number:>2}: {title}"
        if detail:
            line += f" ({detail})"
        _ACCEPTANCE_LINES.append(line)
        print(line)

    return log


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
