from .forest import ForestClassifier, ForestRegressor
from .kmeans import KMeansModel, fit_kmeans
from .neighbors import KnnIndex
from .preprocess import Preprocessor, fit_variance_threshold

__all__ = [
    "ForestClassifier",
    "ForestRegressor",
    "KMeansModel",
    "fit_kmeans",
    "KnnIndex",
    "Preprocessor",
    "fit_variance_threshold",
]
