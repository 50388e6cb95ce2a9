"""Problem and result files.

Both are JSON documents.  Matrix entries are exact rationals written as
strings such as ``"3"`` or ``"-1/2"``; JSON integers are accepted on input,
floats never are.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ProblemFormatError
from .exact_linalg import canonical
from .lattice import Lattice
from .nilpotent import Flag, LieAlgebraRep


def parse_rational(value):
    if isinstance(value, bool):
        raise ProblemFormatError(f"expected a rational, got {value!r}")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        text = value.strip()
        if any(ch in text for ch in ".eE") or not text:
            raise ProblemFormatError(f"rational {value!r} must have the form p or p/q")
        try:
            return canonical(Fraction(text))
        except (ValueError, ZeroDivisionError):
            raise ProblemFormatError(f"cannot parse rational {value!r}") from None
    raise ProblemFormatError(f"expected a rational string, got {value!r}")


def format_rational(x):
    x = canonical(x)
    return str(x)


def parse_matrix(data, rows=None, cols=None, what="matrix"):
    if not isinstance(data, list) or any(not isinstance(r, list) for r in data):
        raise ProblemFormatError(f"{what} must be a list of rows")
    if rows is not None and len(data) != rows:
        raise ProblemFormatError(f"{what} has {len(data)} rows, expected {rows}")
    for r in data:
        if cols is not None and len(r) != cols:
            raise ProblemFormatError(f"{what} has a row of length {len(r)}, expected {cols}")
    return [[parse_rational(v) for v in r] for r in data]


def format_matrix(M):
    return [[format_rational(v) for v in row] for row in M]


@dataclass
class ProblemFile:
    dimension: int
    lie_algebra: list
    lattice: list = None
    flag: list = None
    support_optimization: bool = True
    verify: bool = False
    name: str = None

    def algebra(self):
        return LieAlgebraRep(self.dimension, self.lie_algebra)

    def lattice_object(self):
        return Lattice.standard(self.dimension) if self.lattice is None else Lattice(self.lattice)

    def flag_object(self):
        return None if self.flag is None else Flag.from_bases(self.flag)

    def to_dict(self):
        out = {}
        if self.name:
            out["name"] = self.name
        out["dimension"] = self.dimension
        out["lie_algebra"] = [format_matrix(X) for X in self.lie_algebra]
        if self.lattice is not None:
            out["lattice"] = format_matrix(self.lattice)
        if self.flag is not None:
            out["flag"] = [format_matrix(b) for b in self.flag]
        out["options"] = {
            "support_optimization": self.support_optimization,
            "verify": self.verify,
        }
        return out

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict):
            raise ProblemFormatError("a problem must be a JSON object")
        dim = data.get("dimension")
        if isinstance(dim, bool) or not isinstance(dim, int) or dim <= 0:
            raise ProblemFormatError("'dimension' must be a positive integer")
        alg = data.get("lie_algebra")
        if not isinstance(alg, list):
            raise ProblemFormatError("'lie_algebra' must be a list of matrices")
        mats = [parse_matrix(X, dim, dim, f"lie_algebra[{i}]") for i, X in enumerate(alg)]
        lattice = data.get("lattice")
        if lattice is not None:
            lattice = parse_matrix(lattice, dim, dim, "lattice")
            try:
                Lattice(lattice)
            except ValueError as exc:
                raise ProblemFormatError(f"lattice: {exc}") from None
        flag = data.get("flag")
        if flag is not None:
            if not isinstance(flag, list) or not flag:
                raise ProblemFormatError("'flag' must be a non-empty list of subspace bases")
            flag = [parse_matrix(b, None, dim, f"flag[{i}]") for i, b in enumerate(flag)]
        opts = data.get("options", {}) or {}
        if not isinstance(opts, dict):
            raise ProblemFormatError("'options' must be an object")
        for key in opts:
            if key not in ("support_optimization", "verify"):
                raise ProblemFormatError(f"unknown option {key!r}")
            if not isinstance(opts[key], bool):
                raise ProblemFormatError(f"option {key!r} must be true or false")
        return cls(
            dimension=dim,
            lie_algebra=mats,
            lattice=lattice,
            flag=flag,
            support_optimization=opts.get("support_optimization", True),
            verify=opts.get("verify", False),
            name=data.get("name"),
        )


@dataclass
class ResultFile:
    problem: ProblemFile
    generators: list
    levels: list = field(default_factory=list)
    verification: dict = None
    timing: dict = field(default_factory=dict)

    @property
    def hirsch_length(self):
        return len(self.generators)

    def to_dict(self):
        return {
            "problem": self.problem.to_dict(),
            "hirsch_length": self.hirsch_length,
            "generators": [format_matrix(g) for g in self.generators],
            "levels": self.levels,
            "verification": self.verification,
            "timing": self.timing,
        }

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict) or "problem" not in data:
            raise ProblemFormatError("a result must be a JSON object with a 'problem'")
        problem = ProblemFile.from_dict(data["problem"])
        dim = problem.dimension
        gens = data.get("generators")
        if not isinstance(gens, list):
            raise ProblemFormatError("'generators' must be a list of matrices")
        gens = [parse_matrix(g, dim, dim, f"generators[{i}]") for i, g in enumerate(gens)]
        if data.get("hirsch_length", len(gens)) != len(gens):
            raise ProblemFormatError("'hirsch_length' does not match the number of generators")
        levels = data.get("levels", [])
        if not isinstance(levels, list):
            raise ProblemFormatError("'levels' must be a list")
        return cls(
            problem=problem,
            generators=gens,
            levels=levels,
            verification=data.get("verification"),
            timing=data.get("timing", {}),
        )


def _format(value, indent):
    pad = " " * indent
    inner = " " * (indent + 2)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [f"{inner}{json.dumps(k)}: {_format(v, indent + 2)}" for k, v in value.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(value, list):
        if all(not isinstance(v, (list, dict)) for v in value):
            return json.dumps(value)
        items = [inner + _format(v, indent + 2) for v in value]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    return json.dumps(value)


def dumps(obj):
    """JSON text for a problem or result, one matrix row per line."""
    return _format(obj.to_dict(), 0) + "\n"


def _load(path_or_text, kind):
    try:
        data = json.loads(path_or_text)
    except json.JSONDecodeError as exc:
        raise ProblemFormatError(f"invalid JSON: {exc}") from None
    return kind.from_dict(data)


def loads_problem(text):
    return _load(text, ProblemFile)


def loads_result(text):
    return _load(text, ResultFile)


def read_problem(path):
    with open(path, encoding="utf-8") as fh:
        return loads_problem(fh.read())


def read_result(path):
    with open(path, encoding="utf-8") as fh:
        return loads_result(fh.read())
