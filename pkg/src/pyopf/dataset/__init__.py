"""Loading, splitting and converting datasets."""

from pyopf.dataset.dataset import Dataset
from pyopf.dataset.formats import FORMATS, convert, infer_format, load, save
from pyopf.dataset.opf_binary import read_opf_binary, write_opf_binary
from pyopf.dataset.splitter import split, split_arrays

__all__ = [
    "FORMATS",
    "Dataset",
    "convert",
    "infer_format",
    "load",
    "read_opf_binary",
    "save",
    "split",
    "split_arrays",
    "write_opf_binary",
]
