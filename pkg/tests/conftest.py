import random
from pathlib import Path

import pytest
from hypothesis import strategies as st

from rulebases.dataset import Dataset, ItemSet, parse_transactions

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def example():
    return parse_transactions((DATA / "example12.dat").read_bytes())


def rules_of(d, *texts):
    return [d.parse_rule(t) for t in texts]


def random_dataset(rng: random.Random, n_items: int, n_rows: int, density: float = 0.5) -> Dataset:
    rows = [ItemSet(i for i in range(n_items) if rng.random() < density) for _ in range(n_rows)]
    return Dataset([chr(ord("a") + i) for i in range(n_items)], rows)


@st.composite
def datasets(draw, max_items=6, max_rows=12, min_rows=0):
    n = draw(st.integers(1, max_items))
    rows = draw(st.lists(st.integers(0, (1 << n) - 1), min_size=min_rows, max_size=max_rows))
    return Dataset([chr(ord("a") + i) for i in range(n)], [ItemSet.from_mask(m) for m in rows])


def itemsets(n_items):
    return st.integers(0, (1 << n_items) - 1).map(ItemSet.from_mask)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
