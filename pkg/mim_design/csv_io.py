"""Design CSV import/export plus the ``.meta`` provenance sidecar."""

from __future__ import annotations

from pathlib import Path

import numpy as np
import pandas as pd

from mim_gp.errors import DesignFormatError

from .matrix import DesignGenerator, DesignMatrix
from .ofat import infer_ofat_blocks


def meta_path(path: str | Path) -> Path:
    path = Path(path)
    if path.suffix != ".csv":
        return path.with_name(path.name + ".meta")
    return path.with_suffix(".meta")


def write_design_csv(D: DesignMatrix, path: str | Path) -> Path:
    """Write ``x1..xd`` columns at 17 significant digits and a key=value ``.meta`` file."""

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame = pd.DataFrame(D.points, columns=[f"x{k + 1}" for k in range(D.d)])
    frame.to_csv(path, index=False, float_format="%.17g", lineterminator="\n")
    meta = {
        "generator": D.generator.value,
        "seed": "" if D.seed is None else str(D.seed),
        "n": str(D.n),
        "d": str(D.d),
    }
    if D.blocks:
        meta["l"] = str(len(D.blocks))
    meta_path(path).write_text(
        "".join(f"{key}={value}\n" for key, value in meta.items()), encoding="utf-8"
    )
    return path


def _read_meta(path: Path) -> dict[str, str]:
    sidecar = meta_path(path)
    if not sidecar.exists():
        return {}
    out: dict[str, str] = {}
    for line in sidecar.read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#") and "=" in line:
            key, value = line.split("=", 1)
            out[key.strip()] = value.strip()
    return out


def read_design_csv(path: str | Path) -> DesignMatrix:
    """Read a design written by :func:`write_design_csv` or by an external tool.

    Columns must be ``x1..xd``; every cell must be a real in [0, 1]. Block metadata is
    recovered from a block-major OFAT layout when the sidecar names an OFAT generator or
    when none is present.
    """

    path = Path(path)
    try:
        frame = pd.read_csv(path, float_precision="round_trip", comment="#")
    except pd.errors.EmptyDataError as exc:
        raise DesignFormatError(f"{path}: file is empty") from exc
    except pd.errors.ParserError as exc:
        raise DesignFormatError(f"{path}: malformed CSV ({exc})") from exc
    expected = [f"x{k + 1}" for k in range(frame.shape[1])]
    columns = [str(c).strip() for c in frame.columns]
    if columns != expected:
        raise DesignFormatError(f"{path}: header must be {','.join(expected)}, got {columns}")
    if frame.shape[0] == 0:
        raise DesignFormatError("design must have at least one row")
    values = frame.apply(pd.to_numeric, errors="coerce").to_numpy(dtype=float)
    bad = np.argwhere(~np.isfinite(values) | (values < 0.0) | (values > 1.0))
    if bad.size:
        row, col = (int(v) for v in bad[0])
        raise DesignFormatError(
            f"{path}: row {row + 1}, column x{col + 1}: value {frame.iat[row, col]!r} "
            "is not a real in [0, 1]"
        )

    meta = _read_meta(path)
    generator = DesignGenerator(meta.get("generator", DesignGenerator.IMPORTED.value))
    seed = int(meta["seed"]) if meta.get("seed") else None
    blocks = None
    if generator.ofat_family or generator is DesignGenerator.IMPORTED:
        blocks = infer_ofat_blocks(values)
    return DesignMatrix(points=values, generator=generator, seed=seed, blocks=blocks or ())
