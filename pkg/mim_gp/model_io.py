"""Versioned flat-text serialization of fitted models."""

from __future__ import annotations

import io
from pathlib import Path

import numpy as np
import pandas as pd

from .errors import DesignFormatError
from .kernels import KernelSpec
from .kriging import GPModel, fit_fixed

FORMAT_TAG = "gpmodel"
FORMAT_VERSION = "v1"
_SCALARS = ("alpha", "nugget", "mu", "sigma2", "jitter")


def _g(value: float) -> str:
    return format(float(value), ".17g")


def dumps_model(model: GPModel) -> str:
    """Render ``model`` as text: header, hyperparameter lines, then design and y as CSV."""

    spec = model.spec
    lines = [
        f"{FORMAT_TAG} {FORMAT_VERSION} family={spec.family.value} d={model.d} n={model.n}",
        "theta=" + ",".join(_g(t) for t in spec.theta),
        f"alpha={_g(spec.alpha)}",
        f"nugget={_g(spec.nugget)}",
        f"mu={_g(model.mu)}",
        f"sigma2={_g(model.sigma2)}",
        f"jitter={_g(model.chol.jitter_used)}",
    ]
    columns = [f"x{k + 1}" for k in range(model.d)] + ["y"]
    frame = pd.DataFrame(np.column_stack([model.design, model.y]), columns=columns)
    body = frame.to_csv(index=False, float_format="%.17g", lineterminator="\n")
    return "\n".join(lines) + "\n" + body


def loads_model(text: str) -> GPModel:
    """Parse :func:`dumps_model` output and rebuild the model."""

    lines = text.splitlines()
    if not lines:
        raise DesignFormatError("empty model file")
    header = lines[0].split()
    if len(header) < 2 or header[0] != FORMAT_TAG or header[1] != FORMAT_VERSION:
        raise DesignFormatError(f"unsupported model header: {lines[0]!r}")
    meta = dict(part.split("=", 1) for part in header[2:])
    try:
        d, n = int(meta["d"]), int(meta["n"])
        fields = dict(line.split("=", 1) for line in lines[1:7])
        theta = [float(t) for t in fields["theta"].split(",")]
        scalars = {key: float(fields[key]) for key in _SCALARS}
    except (KeyError, ValueError) as exc:
        raise DesignFormatError(f"malformed model file: {exc}") from exc
    frame = pd.read_csv(io.StringIO("\n".join(lines[7:])), float_precision="round_trip")
    if frame.shape != (n, d + 1):
        raise DesignFormatError(f"expected {n} rows of {d + 1} columns, got {frame.shape}")
    spec = KernelSpec(
        family=meta["family"], theta=theta, alpha=scalars["alpha"], nugget=scalars["nugget"]
    )
    values = frame.to_numpy(dtype=float)
    model = fit_fixed(values[:, :d], values[:, d], spec, mu=scalars["mu"], sigma2=scalars["sigma2"])
    if model.chol.jitter_used != scalars["jitter"]:
        raise DesignFormatError(
            f"stored jitter {scalars['jitter']} differs from refactored {model.chol.jitter_used}"
        )
    return model


def save_model(model: GPModel, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps_model(model), encoding="utf-8")
    return path


def load_model(path: str | Path) -> GPModel:
    return loads_model(Path(path).read_text(encoding="utf-8"))
