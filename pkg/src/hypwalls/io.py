"""Matrix and group literals.

A matrix is ``[[a],[b],[c],[d]]`` with every complex entry written as
``[re, im]``.  A group file is either a JSON list of matrices or an object
``{"generators": [...], "names": [...], "stabilizer": [...]}``.
"""

import json

from .exceptions import ParseError
from .models import MoebiusMatrix

__all__ = ["parse_matrix", "parse_group", "parse_input", "matrix_to_json", "complex_to_json"]


def _loads(text):
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        # json reports a character index; convert to a byte offset
        offset = len(text[: exc.pos].encode("utf-8"))
        raise ParseError(f"malformed JSON: {exc.msg}", offset) from None


def _number(x, where):
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ParseError(f"{where}: expected a number, got {json.dumps(x)}")
    return float(x)


def _complex(entry, where):
    # accept [[re, im]] (the documented shape) and [re, im]
    if isinstance(entry, list) and len(entry) == 1 and isinstance(entry[0], list):
        entry = entry[0]
    if not isinstance(entry, list) or len(entry) != 2:
        raise ParseError(f"{where}: complex numbers are written [re, im]")
    return complex(_number(entry[0], where), _number(entry[1], where))


def matrix_from_obj(obj, where="matrix"):
    if not isinstance(obj, list) or len(obj) != 4:
        raise ParseError(f"{where}: expected four entries [[a],[b],[c],[d]]")
    entries = [_complex(e, f"{where} entry {'abcd'[i]}") for i, e in enumerate(obj)]
    return MoebiusMatrix(*entries)


def parse_matrix(text):
    return matrix_from_obj(_loads(text))


def _looks_like_matrix(obj):
    try:
        return isinstance(obj, list) and len(obj) == 4 and all(
            isinstance(_complex(e, "probe"), complex) for e in obj
        )
    except ParseError:
        return False


def parse_group(text):
    from .domains import GroupSpec

    obj = _loads(text)
    names = stabilizer = None
    if isinstance(obj, dict):
        if "generators" not in obj:
            raise ParseError("group object needs a 'generators' list")
        names = obj.get("names")
        stabilizer = obj.get("stabilizer")
        obj = obj["generators"]
    if not isinstance(obj, list) or not obj:
        raise ParseError("expected a non-empty list of matrices")
    gens = [matrix_from_obj(m, f"generator {i}") for i, m in enumerate(obj)]
    stab = [matrix_from_obj(m, f"stabilizer {i}") for i, m in enumerate(stabilizer or [])]
    return GroupSpec(gens, stab, names=names)


def parse_input(text):
    """A single matrix literal becomes a MoebiusMatrix; anything else is read as a group."""
    obj = _loads(text)
    if _looks_like_matrix(obj):
        return matrix_from_obj(obj)
    return parse_group(text)


def complex_to_json(z):
    return [float(z.real), float(z.imag)]


def matrix_to_json(g):
    return [[complex_to_json(e)] for e in g.entries()]
