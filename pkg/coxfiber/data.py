"""
This module reads and writes fans and morphisms as JSON, and turns reports
into JSON-ready values.

A fan file is an object with ``rank``, ``rays`` (arrays of integers),
``max_cones`` (arrays of 0-based ray indices) and an optional ``name``. A
morphism file has a ``matrix`` (target-rank rows, acting on column vectors)
and ``source`` and ``target``, each either a path relative to the morphism
file or an inline fan object. Integers outside the 64-bit range are written as
decimal strings and accepted back in that form; floats are rejected.
"""

import json
import os

from coxfiber.exceptions import MalformedInput
from coxfiber.toric.fan import Fan, ToricMorphism
from coxfiber.toric.intlin import IntMatrix

INT64_MIN = -(2 ** 63)
INT64_MAX = 2 ** 63 - 1


def _integer(value, what):
    if isinstance(value, bool):
        raise MalformedInput("{0} must be an integer, got {1!r}.".format(what, value))
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        try:
            return int(value.strip(), 10)
        except ValueError:
            pass
    raise MalformedInput("{0} must be an integer, got {1!r}.".format(what, value))


def _integer_rows(rows, what):
    if not isinstance(rows, list) or any(not isinstance(row, list) for row in rows):
        raise MalformedInput("{0} must be an array of integer arrays.".format(what))
    return [[_integer(x, what) for x in row] for row in rows]


def _field(data, key, what):
    if not isinstance(data, dict):
        raise MalformedInput("{0} must be a JSON object.".format(what))
    if key not in data:
        raise MalformedInput("{0} is missing {1!r}.".format(what, key))
    return data[key]


def fan_from_dict(data):
    """
    Builds and validates a :class:`Fan <coxfiber.toric.fan.Fan>` from a
    decoded fan object.
    """
    rank = _integer(_field(data, "rank", "Fan"), "rank")
    rays = _integer_rows(_field(data, "rays", "Fan"), "rays")
    max_cones = _integer_rows(_field(data, "max_cones", "Fan"), "max_cones")
    name = data.get("name")
    if name is not None and not isinstance(name, str):
        raise MalformedInput("Fan name must be a string.")
    return Fan(rank, rays, max_cones, name=name)


def read_json(path):
    try:
        with open(path, encoding="utf-8") as handle:
            return json.load(handle)
    except OSError as exc:
        raise MalformedInput("Cannot read {0}: {1}.".format(path, exc.strerror))
    except ValueError as exc:
        raise MalformedInput("{0} is not valid JSON: {1}.".format(path, exc))


def load_fan(source):
    """Loads a fan from a path or a decoded JSON object."""
    if isinstance(source, dict):
        return fan_from_dict(source)
    return fan_from_dict(read_json(source))


def morphism_from_dict(data, base_dir="."):
    def side(key):
        value = _field(data, key, "Morphism")
        if isinstance(value, str):
            return load_fan(os.path.join(base_dir, value))
        return load_fan(value)

    source, target = side("source"), side("target")
    rows = _integer_rows(_field(data, "matrix", "Morphism"), "matrix")
    matrix = IntMatrix(rows, shape=(len(rows), len(rows[0]) if rows else source.rank))
    return ToricMorphism(source, target, matrix)


def load_morphism(source):
    """
    Loads a morphism from a path or a decoded JSON object. Fan paths inside a
    morphism file are resolved relative to that file.
    """
    if isinstance(source, dict):
        return morphism_from_dict(source)
    return morphism_from_dict(read_json(source), os.path.dirname(os.path.abspath(source)))


def to_json_value(value):
    """
    Converts results to plain JSON values: tuples become arrays, matrices
    become arrays of rows and integers beyond 64 bits become strings.
    """
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, int):
        return value if INT64_MIN <= value <= INT64_MAX else str(value)
    if isinstance(value, IntMatrix):
        return to_json_value(value.tolist())
    if isinstance(value, dict):
        return {str(k): to_json_value(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_json_value(v) for v in value]
    if hasattr(value, "to_dict"):
        return to_json_value(value.to_dict())
    return str(value)


def dumps(value):
    return json.dumps(to_json_value(value), indent=2, sort_keys=False)


def write_json(value, path):
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(dumps(value))
        handle.write("\n")


def write_fan(fan, path):
    write_json(fan.to_dict(), path)


def write_morphism(morphism, path, source_path=None, target_path=None):
    """
    Writes a morphism file. When fan paths are given they are stored relative
    to the morphism file; otherwise the fans are inlined.
    """
    base_dir = os.path.dirname(os.path.abspath(path))
    data = {"matrix": morphism.matrix.tolist()}
    for key, fan, fan_path in (
        ("source", morphism.source, source_path),
        ("target", morphism.target, target_path),
    ):
        if fan_path is None:
            data[key] = fan.to_dict()
        else:
            data[key] = os.path.relpath(os.path.abspath(fan_path), base_dir)
    write_json(data, path)
