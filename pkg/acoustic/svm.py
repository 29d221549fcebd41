"""Binary SVM (TV vs rest) trained with sequential minimal optimization.

The trainer works on the signed dual variables beta_i = y_i * alpha_i with
box constraints A_i <= beta_i <= B_i (A = 0, B = C for positives and
A = -C, B = 0 for negatives) and sum(beta) = 0. Every step moves the
maximal violating pair, so the KKT gap shrinks monotonically.
"""

import logging
import struct
from enum import Enum
from pathlib import Path
from typing import Iterable, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from scipy.spatial.distance import cdist

from core import config
from core.errors import (
    ConvergenceError,
    DegenerateTrainingError,
    InsufficientDataError,
    InvalidConfigurationError,
    ModelFormatError,
    ShapeError,
    WriteError,
)

from .validators import FEATURE_NAMES, FeatureVector, Label, LabeledSample

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

MODEL_MAGIC = b"TVSV"
MODEL_VERSION = 1
_HEADER = struct.Struct("<4sHBxIIIddd")


class Kernel(str, Enum):
    """Kernel function family."""
    LINEAR = "linear"
    RBF = "rbf"


_KERNEL_IDS = {Kernel.LINEAR: 0, Kernel.RBF: 1}


class Standardization(BaseModel):
    """Per-dimension mean and standard deviation of the training set."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    mean: np.ndarray
    std: np.ndarray

    @field_validator("mean", "std", mode="before")
    @classmethod
    def as_float_array(cls, v) -> np.ndarray:
        return np.array(v, dtype=np.float64)

    @model_validator(mode="after")
    def check_stats(self) -> "Standardization":
        if self.mean.shape != self.std.shape or self.mean.ndim != 1:
            raise ValueError("mean and std must be vectors of equal length")
        if np.any(self.std <= 0):
            raise ValueError("std entries must be positive")
        return self

    def apply(self, x: np.ndarray) -> np.ndarray:
        return (x - self.mean) / self.std


class SvmModel(BaseModel):
    """Trained, immutable SVM.

    Support vectors are stored in standardized coordinates over the selected
    feature columns; ``alphas`` hold the signed weights alpha_i * y_i.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    kernel: Kernel = Kernel.RBF
    gamma: float = Field(..., gt=0)
    c: float = Field(..., gt=0)
    bias: float
    support_vectors: np.ndarray
    alphas: np.ndarray
    standardization: Standardization
    feature_indices: Tuple[int, ...]
    n_inputs: int = Field(..., gt=0)

    @field_validator("support_vectors", "alphas", mode="before")
    @classmethod
    def as_float_array(cls, v) -> np.ndarray:
        arr = np.array(v, dtype=np.float64)
        if not np.all(np.isfinite(arr)):
            raise ValueError("model parameters must be finite")
        return arr

    @field_validator("feature_indices")
    @classmethod
    def check_indices(cls, v: Tuple[int, ...]) -> Tuple[int, ...]:
        if not v:
            raise ValueError("at least one feature column is required")
        return v

    @model_validator(mode="after")
    def check_shapes(self) -> "SvmModel":
        d = len(self.feature_indices)
        if max(self.feature_indices) >= self.n_inputs or min(self.feature_indices) < 0:
            raise ValueError("feature index out of range")
        if self.support_vectors.ndim != 2 or self.support_vectors.shape[1] != d:
            raise ValueError(f"support vectors must have {d} columns")
        if self.alphas.shape != (self.support_vectors.shape[0],):
            raise ValueError("one alpha per support vector")
        if self.standardization.mean.size != d:
            raise ValueError("standardization does not match the feature columns")
        if np.any(np.abs(self.alphas) > self.c * (1 + 1e-9)):
            raise ValueError("alphas exceed the box constraint")
        return self

    @property
    def n_support(self) -> int:
        return int(self.alphas.size)

    @property
    def feature_names(self) -> Tuple[str, ...]:
        if self.n_inputs != len(FEATURE_NAMES):
            return tuple(f"x{i}" for i in self.feature_indices)
        return tuple(FEATURE_NAMES[i] for i in self.feature_indices)


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------

def kernel_matrix(kernel: Kernel, gamma: float, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Gram matrix K[i, j] = k(a_i, b_j)."""
    if kernel is Kernel.LINEAR:
        return a @ b.T
    return np.exp(-gamma * cdist(a, b, "sqeuclidean"))


def resolve_feature_subset(names: Optional[Iterable[str]]) -> Tuple[int, ...]:
    """Map feature names to column indices, in canonical column order.

    None or an empty selection means all 17 columns.

    Raises:
        InvalidConfigurationError: Unknown feature name.
    """
    if not names:
        return tuple(range(len(FEATURE_NAMES)))
    wanted = {n.strip() for n in names if n.strip()}
    unknown = sorted(wanted - set(FEATURE_NAMES))
    if unknown:
        raise InvalidConfigurationError(f"unknown feature(s): {', '.join(unknown)}", stage="features")
    return tuple(i for i, name in enumerate(FEATURE_NAMES) if name in wanted)


def _as_matrix(samples: Sequence[LabeledSample]) -> Tuple[np.ndarray, np.ndarray]:
    x = np.vstack([s.features for s in samples])
    y = np.array([s.label.sign for s in samples])
    return x, y


def standardize_fit(samples: Union[Sequence[LabeledSample], np.ndarray]) -> Standardization:
    """Per-dimension mean and population standard deviation.

    Zero-variance dimensions get a standard deviation of 1.

    Raises:
        InsufficientDataError: Fewer than 2 samples.
    """
    x = samples if isinstance(samples, np.ndarray) else _as_matrix(samples)[0]
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    if x.shape[0] < 2:
        raise InsufficientDataError("standardization needs at least 2 samples", stage="train")
    mean = x.mean(axis=0)
    std = x.std(axis=0)
    std = np.where(std > 0, std, 1.0)
    return Standardization(mean=mean, std=std)


# ---------------------------------------------------------------------------
# Training
# ---------------------------------------------------------------------------

def _smo(
    k: np.ndarray,
    y: np.ndarray,
    c: float,
    tol: float,
    max_iter: int,
) -> Tuple[np.ndarray, float, int]:
    """Maximal-violating-pair SMO on the signed dual.

    Returns:
        (beta, bias, iterations)
    """
    n = y.size
    positive = y > 0
    lower = np.where(positive, 0.0, -c)
    upper = np.where(positive, c, 0.0)
    snap = 1e-12 * c

    beta = np.zeros(n)
    grad = y.astype(np.float64).copy()
    diag = np.diag(k)

    for iteration in range(max_iter + 1):
        up = beta < upper
        down = beta > lower
        i = int(np.argmax(np.where(up, grad, -np.inf)))
        j = int(np.argmin(np.where(down, grad, np.inf)))
        gap = grad[i] - grad[j]
        if gap < tol:
            break
        if iteration == max_iter:
            raise ConvergenceError(
                f"SMO did not converge in {max_iter} iterations",
                worst_violation=float(gap),
                stage="train",
            )

        curvature = max(diag[i] + diag[j] - 2.0 * k[i, j], 1e-12)
        step = min(upper[i] - beta[i], beta[j] - lower[j], gap / curvature)

        grad += step * (k[j] - k[i])
        beta[i] += step
        beta[j] -= step

        for idx in (i, j):
            if abs(beta[idx] - upper[idx]) <= snap:
                beta[idx] = upper[idx]
            elif abs(beta[idx] - lower[idx]) <= snap:
                beta[idx] = lower[idx]

    free = (beta > lower) & (beta < upper)
    if np.any(free):
        bias = float(np.mean(grad[free]))
    else:
        bias = float((grad[i] + grad[j]) / 2.0)
    return beta, bias, iteration


def train_arrays(
    x: np.ndarray,
    y: np.ndarray,
    kernel: Kernel = Kernel.RBF,
    c: float = config.SVM_C,
    tol: float = config.SVM_TOL,
    gamma: Optional[float] = None,
    feature_indices: Optional[Tuple[int, ...]] = None,
    max_iter: int = config.SVM_MAX_ITER,
) -> SvmModel:
    """Train on a raw feature matrix and a +1/-1 label vector.

    Args:
        x: Array of shape (n_samples, n_inputs).
        y: Labels, +1 for TV and -1 otherwise.
        kernel: Kernel family.
        c: Box constraint.
        tol: KKT tolerance.
        gamma: RBF width; defaults to 1 / number of selected features.
        feature_indices: Columns of x to train on; all columns when None.
        max_iter: SMO iteration cap.

    Raises:
        DegenerateTrainingError: Only one class present.
        ConvergenceError: Iteration cap reached; carries the worst KKT violation.
    """
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    y = np.asarray(y, dtype=np.float64).ravel()
    if x.shape[0] != y.size:
        raise ShapeError(f"{x.shape[0]} samples but {y.size} labels", stage="train")
    if c <= 0 or tol <= 0:
        raise InvalidConfigurationError("c and tol must be positive", stage="train")
    if not np.all(np.isin(y, (-1.0, 1.0))):
        raise InvalidConfigurationError("labels must be +1 or -1", stage="train")
    if np.all(y > 0) or np.all(y < 0):
        raise DegenerateTrainingError("training set holds a single class", stage="train")

    n_inputs = x.shape[1]
    indices = tuple(feature_indices) if feature_indices else tuple(range(n_inputs))
    if max(indices) >= n_inputs:
        raise ShapeError(f"feature index {max(indices)} outside {n_inputs} input columns", stage="train")
    selected = x[:, list(indices)]

    stats = standardize_fit(selected)
    z = stats.apply(selected)
    gamma = float(gamma) if gamma is not None else 1.0 / len(indices)
    if gamma <= 0:
        raise InvalidConfigurationError("gamma must be positive", stage="train")

    k = kernel_matrix(kernel, gamma, z, z)
    beta, bias, iterations = _smo(k, y, c, tol, max_iter)

    support = beta != 0
    logger.info(
        "SMO converged in %d iterations: %d support vectors of %d samples (%s, c=%g)",
        iterations, int(np.count_nonzero(support)), y.size, kernel.value, c,
    )
    return SvmModel(
        kernel=kernel,
        gamma=gamma,
        c=c,
        bias=bias,
        support_vectors=z[support],
        alphas=beta[support],
        standardization=stats,
        feature_indices=indices,
        n_inputs=n_inputs,
    )


def train(
    samples: Sequence[LabeledSample],
    kernel: Kernel = Kernel.RBF,
    c: float = config.SVM_C,
    tol: float = config.SVM_TOL,
    gamma: Optional[float] = None,
    feature_subset: Optional[Iterable[str]] = None,
    max_iter: int = config.SVM_MAX_ITER,
) -> SvmModel:
    """Train the TV-vs-rest classifier on labeled feature windows.

    Args:
        samples: Labeled 17-column feature points.
        kernel: Kernel family (rbf by default).
        c: Box constraint.
        tol: KKT tolerance.
        gamma: RBF width; defaults to 1 / feature dimension.
        feature_subset: Feature names to train on; all when None.
        max_iter: SMO iteration cap.

    Returns:
        Trained SvmModel.
    """
    if len(samples) < 2:
        raise InsufficientDataError("training needs at least 2 samples", stage="train")
    x, y = _as_matrix(samples)
    if x.shape[1] == len(FEATURE_NAMES):
        indices = resolve_feature_subset(feature_subset)
    elif feature_subset:
        raise ShapeError("feature names apply only to 17-column feature vectors", stage="train")
    else:
        indices = None
    return train_arrays(x, y, kernel=kernel, c=c, tol=tol, gamma=gamma, feature_indices=indices, max_iter=max_iter)


def dual_objective(model: SvmModel) -> float:
    """Dual objective sum(alpha) - 1/2 * sum_ij beta_i beta_j K(sv_i, sv_j).

    Non-support points have beta = 0 and drop out of both terms; sum(alpha)
    equals sum(|beta|) because each beta carries its label's sign.
    """
    k = kernel_matrix(model.kernel, model.gamma, model.support_vectors, model.support_vectors)
    return float(np.sum(np.abs(model.alphas)) - 0.5 * model.alphas @ k @ model.alphas)


# ---------------------------------------------------------------------------
# Prediction
# ---------------------------------------------------------------------------

def _features_matrix(model: SvmModel, features) -> np.ndarray:
    if isinstance(features, FeatureVector):
        features = features.to_array()
    elif isinstance(features, (list, tuple)) and features and isinstance(features[0], FeatureVector):
        features = np.vstack([f.to_array() for f in features])
    x = np.atleast_2d(np.asarray(features, dtype=np.float64))
    if x.shape[1] != model.n_inputs:
        raise ShapeError(f"model expects {model.n_inputs} features, got {x.shape[1]}", stage="classify")
    return x


def decision_values(model: SvmModel, features) -> np.ndarray:
    """f(x) = sum_i alpha_i * K(sv_i, standardize(x)) + bias for every row."""
    x = _features_matrix(model, features)
    z = model.standardization.apply(x[:, list(model.feature_indices)])
    return kernel_matrix(model.kernel, model.gamma, z, model.support_vectors) @ model.alphas + model.bias


def decision_value(model: SvmModel, features) -> float:
    """Signed margin of a single feature point; positive means TV.

    Raises:
        ShapeError: Feature dimension does not match the model.
    """
    values = decision_values(model, features)
    if values.size != 1:
        raise ShapeError(f"expected one feature point, got {values.size}", stage="classify")
    return float(values[0])


def classify_clip(model: SvmModel, windows) -> Tuple[Label, float]:
    """Majority vote over per-window decisions.

    A window votes TV when its decision value is non-negative. The clip is
    TV when at least half of its windows vote TV.

    Returns:
        (label, fraction of windows voting TV)

    Raises:
        InsufficientDataError: No windows.
    """
    if windows is None or len(windows) == 0:
        raise InsufficientDataError("no feature windows to classify", stage="classify")
    votes = decision_values(model, windows) >= 0.0
    score = float(np.count_nonzero(votes)) / votes.size
    return (Label.TV if score >= 0.5 else Label.NON_TV), score


# ---------------------------------------------------------------------------
# Persistence
# ---------------------------------------------------------------------------

def save_model(model: SvmModel, path: PathLike) -> None:
    """Write the versioned little-endian model file.

    Layout: header (magic, version, kernel id, input dims, selected dims,
    support vector count, gamma, c, bias), then selected column indices as
    u32, then mean, std, alphas and support vectors as f8.
    """
    path = Path(path)
    d = len(model.feature_indices)
    header = _HEADER.pack(
        MODEL_MAGIC,
        MODEL_VERSION,
        _KERNEL_IDS[model.kernel],
        model.n_inputs,
        d,
        model.n_support,
        model.gamma,
        model.c,
        model.bias,
    )
    payload = b"".join([
        header,
        np.asarray(model.feature_indices, dtype="<u4").tobytes(),
        np.asarray(model.standardization.mean, dtype="<f8").tobytes(),
        np.asarray(model.standardization.std, dtype="<f8").tobytes(),
        np.asarray(model.alphas, dtype="<f8").tobytes(),
        np.ascontiguousarray(model.support_vectors, dtype="<f8").tobytes(),
    ])
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(payload)
    except OSError as e:
        raise WriteError(f"cannot write model: {e}", path=str(path), stage="save_model") from e
    logger.debug("Saved %d support vectors to %s", model.n_support, path)


def load_model(path: PathLike) -> SvmModel:
    """Read a model written by save_model.

    Raises:
        ModelFormatError: Bad magic, unknown version or kernel, or a truncated body.
    """
    path = Path(path)
    where = {"path": str(path), "stage": "load_model"}
    try:
        data = path.read_bytes()
    except OSError as e:
        raise ModelFormatError(f"cannot read model: {e}", **where) from e

    if len(data) < _HEADER.size:
        raise ModelFormatError("truncated header", **where)
    magic, version, kernel_id, n_inputs, d, n_sv, gamma, c, bias = _HEADER.unpack_from(data)
    if magic != MODEL_MAGIC:
        raise ModelFormatError("not a model file (bad magic)", **where)
    if version != MODEL_VERSION:
        raise ModelFormatError(f"unsupported model version {version}", **where)
    kernels = {v: k for k, v in _KERNEL_IDS.items()}
    if kernel_id not in kernels:
        raise ModelFormatError(f"unknown kernel id {kernel_id}", **where)

    expected = _HEADER.size + 4 * d + 8 * (2 * d + n_sv + n_sv * d)
    if len(data) != expected:
        raise ModelFormatError(f"expected {expected} bytes, found {len(data)}", **where)

    offset = _HEADER.size
    indices = np.frombuffer(data, dtype="<u4", count=d, offset=offset)
    offset += 4 * d
    floats = np.frombuffer(data, dtype="<f8", offset=offset).astype(np.float64)
    mean, std = floats[:d], floats[d: 2 * d]
    alphas = floats[2 * d: 2 * d + n_sv]
    support_vectors = floats[2 * d + n_sv:].reshape(n_sv, d)

    try:
        return SvmModel(
            kernel=kernels[kernel_id],
            gamma=gamma,
            c=c,
            bias=bias,
            support_vectors=support_vectors,
            alphas=alphas,
            standardization=Standardization(mean=mean, std=std),
            feature_indices=tuple(int(i) for i in indices),
            n_inputs=n_inputs,
        )
    except ValueError as e:
        raise ModelFormatError(f"inconsistent model contents: {e}", **where) from e
