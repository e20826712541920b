import random

import pytest

from probtree import CategoricalTable, build_tree

# Three-row micro fixture exercised throughout: equal root frequencies whose
# ordering is decided purely by the ascending-value tie break.
MICRO_COLUMNS = ("Q1", "Q2", "Q3")
MICRO_ROWS = ((1, 2, 3), (5, 4, 4), (2, 2, 2))

# Two-column survey stand-in: 672 records, first column values 1..5.
# Cell counts were fixed once; first-column totals are 229/180/121/87/55.
SURVEY_CELL_COUNTS = {
    (1, 1): 92, (1, 2): 63, (1, 3): 46, (1, 4): 28,
    (2, 1): 40, (2, 2): 70, (2, 3): 45, (2, 4): 25,
    (3, 1): 30, (3, 2): 25, (3, 3): 41, (3, 4): 25,
    (4, 1): 20, (4, 2): 22, (4, 3): 18, (4, 4): 27,
    (5, 1): 9,  (5, 2): 14, (5, 3): 12, (5, 4): 20,
}
SURVEY_ROWS = tuple(cell for cell, k in SURVEY_CELL_COUNTS.items() for _ in range(k))
SURVEY_COLUMNS = ("Q1", "Q2")
SURVEY_TOTAL = sum(SURVEY_CELL_COUNTS.values())

SURVEY_ROOT_PROBS = {}
for (a, _), k in SURVEY_CELL_COUNTS.items():
    SURVEY_ROOT_PROBS[a] = SURVEY_ROOT_PROBS.get(a, 0) + k
SURVEY_ROOT_PROBS = {a: k / SURVEY_TOTAL for a, k in SURVEY_ROOT_PROBS.items()}


def random_table(rng: random.Random, min_cols=2, max_cols=6, min_rows=5,
                 max_rows=50, max_distinct=8) -> CategoricalTable:
    ncols = rng.randint(min_cols, max_cols)
    nrows = rng.randint(min_rows, max_rows)
    alphabet = [rng.randint(2, max_distinct) for _ in range(ncols)]
    rows = [tuple(rng.randrange(alphabet[j]) for j in range(ncols))
            for _ in range(nrows)]
    return CategoricalTable(tuple(f"c{j}" for j in range(ncols)), rows)


@pytest.fixture(scope="session")
def micro_table():
    return CategoricalTable(MICRO_COLUMNS, MICRO_ROWS)


@pytest.fixture(scope="session")
def micro_tree(micro_table):
    return build_tree(micro_table)


@pytest.fixture(scope="session")
def survey_table():
    return CategoricalTable(SURVEY_COLUMNS, SURVEY_ROWS)


@pytest.fixture(scope="session")
def survey_tree(survey_table):
    return build_tree(survey_table)
