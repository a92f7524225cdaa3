import json

import pytest

from contauth.cli.experiment import ExperimentConfig, run_experiment


@pytest.fixture(scope="session")
def small_experiment(tmp_path_factory):
    """A cheap dataset-4 experiment shared by CLI/service integration tests."""
    out = tmp_path_factory.mktemp("exp-small")
    config = ExperimentConfig(
        dataset="4",
        output_dir=str(out),
        seed=1,
        n_users=3,
        days=2,
        selection_rows=1500,
        selection_rounds=3,
        selection_depth=3,
        selection_trees=10,
        family="gbt",
        hyperparameters={"lr": 0.25, "max_depth": 4, "min_child_weight": 1.0,
                         "gamma": 0.0, "colsample_bytree": 0.7, "n_rounds": 6},
        max_rows=2500,
    )
    report = run_experiment(config)
    return config, report


@pytest.fixture(scope="session")
def small_bundle(small_experiment):
    _, report = small_experiment
    return json.loads(open(report.artifacts["schema_bundle"]).read())
