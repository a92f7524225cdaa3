from .spec import DEFAULTS, ENGINE_DEFAULTS, FAMILIES, SEARCH_RANGES, ModelSpec
from .base import Prediction, TrainedModel, finalize_scores
from .metrics import ClassCounts, ConfusionMatrix, Metrics, evaluate, macro_f1
from .tree import ClassificationTree, RegressionTree, best_gain_split, best_gini_split
from .naive_bayes import NaiveBayesModel, fit_naive_bayes
from .knn import KnnModel, fit_knn
from .forest import RandomForestModel, fit_random_forest
from .gbt import GbtModel, fit_gbt
from .mlp import MlpModel, fit_mlp, init_mlp_params, mlp_loss_and_grads
from .lstm import LstmModel, fit_lstm, init_lstm_params, lstm_loss_and_grads
from .gradcheck import gradient_check
from .train import feature_importances, load_model, save_model, train
from .search import SearchEntry, enumerate_grid, grid_search, leaderboard_csv

__all__ = [
    "DEFAULTS",
    "ENGINE_DEFAULTS",
    "FAMILIES",
    "SEARCH_RANGES",
    "ModelSpec",
    "Prediction",
    "TrainedModel",
    "finalize_scores",
    "ClassCounts",
    "ConfusionMatrix",
    "Metrics",
    "evaluate",
    "macro_f1",
    "ClassificationTree",
    "RegressionTree",
    "best_gain_split",
    "best_gini_split",
    "NaiveBayesModel",
    "fit_naive_bayes",
    "KnnModel",
    "fit_knn",
    "RandomForestModel",
    "fit_random_forest",
    "GbtModel",
    "fit_gbt",
    "MlpModel",
    "fit_mlp",
    "init_mlp_params",
    "mlp_loss_and_grads",
    "LstmModel",
    "fit_lstm",
    "init_lstm_params",
    "lstm_loss_and_grads",
    "gradient_check",
    "feature_importances",
    "load_model",
    "save_model",
    "train",
    "SearchEntry",
    "enumerate_grid",
    "grid_search",
    "leaderboard_csv",
]
