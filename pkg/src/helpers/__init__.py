import logging
from typing import Optional, Sequence, Union

from src.helpers.cubic.curve import ProjPoint
from src.helpers.cubic.errors import CurveError


def print_h_bar():
    logging.info("--------------------------------------------------------------------")


def parse_point(value: Union[str, Sequence[Union[int, str]], ProjPoint], p: Optional[int] = None) -> ProjPoint:
    """Read '[1:-1:0]', '1:-1:0', '1,-1,0' or a coordinate list as a normalized point"""
    if isinstance(value, ProjPoint):
        return value
    if isinstance(value, str):
        text = value.strip().strip("[]")
        parts = text.replace(",", ":").split(":")
    else:
        parts = list(value)
    try:
        return ProjPoint(tuple(int(str(part).strip()) for part in parts), p)
    except ValueError:
        raise CurveError(f"Cannot read a projective point from {value!r}")
