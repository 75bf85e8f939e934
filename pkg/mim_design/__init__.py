"""Initial-design generators and design IO."""

from .csv_io import read_design_csv, write_design_csv
from .factory import default_size, make_design, n_rows
from .lhd import (
    log_maxpro_criterion,
    maximin_criterion,
    maximin_lhd,
    maxpro_criterion,
    maxpro_design,
    uniform_design,
)
from .matrix import BlockIndex, DesignGenerator, DesignMatrix, OFATBlock, min_distance
from .ofat import infer_ofat_blocks, level_grid, mofat_heuristic, ofat_design, random_ofat_design
from .sobol import sobol_points, sobol_sequence

__all__ = [
    "BlockIndex",
    "DesignGenerator",
    "DesignMatrix",
    "OFATBlock",
    "default_size",
    "infer_ofat_blocks",
    "level_grid",
    "log_maxpro_criterion",
    "make_design",
    "maximin_criterion",
    "maximin_lhd",
    "maxpro_criterion",
    "maxpro_design",
    "min_distance",
    "mofat_heuristic",
    "n_rows",
    "ofat_design",
    "random_ofat_design",
    "read_design_csv",
    "sobol_points",
    "sobol_sequence",
    "uniform_design",
    "write_design_csv",
]
