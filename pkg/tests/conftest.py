import pytest

from helpers import dataset_from_samples

from semgraph.probgraph import build_probability_graph


@pytest.fixture
def tree_car_dataset():
    """Two samples disagreeing on the relation between the same pair."""
    return dataset_from_samples(
        [
            [("Tree", "in front of", "Car")],
            [("Tree", "behind", "Car")],
        ]
    )


@pytest.fixture
def tree_car_graph(tree_car_dataset):
    return build_probability_graph(tree_car_dataset)


@pytest.fixture
def skewed_dataset():
    """One pair where 'likes' holds in 3 of 5 samples and 'hates' in 2."""
    samples = [[("A", "likes", "B")]] * 3 + [[("A", "hates", "B")]] * 2
    return dataset_from_samples(samples)


@pytest.fixture
def skewed_graph(skewed_dataset):
    return build_probability_graph(skewed_dataset)
