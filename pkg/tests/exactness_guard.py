"""Shared checks that no floating-point value reaches a result of the exact modules."""
import ast
import dataclasses
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

import concordsim
from concordsim.exactnum import ExactMatrix, GaussianRational

PKG = Path(concordsim.__file__).parent
GUARDED = ("concordsim.exactnum", "concordsim.frase", "concordsim.lbf", "concordsim.simulator",
           "concordsim.circuit", "concordsim.cliffordsym", "concordsim.oracle", "concordsim.dense")
# the only sanctioned float producer: an explicit, opt-in display conversion
ALLOWED_FUNCTIONS = {"__float__"}


def _guarded_files():
    for mod in GUARDED:
        rel = mod.split(".")[1:]
        path = PKG.joinpath(*rel)
        yield from (sorted(path.glob("*.py")) if path.is_dir() else [path.with_suffix(".py")])


def source_offenders() -> list[str]:
    """Float literals, float/complex names and float-ish attributes in the guarded modules."""
    offenders = []
    for path in _guarded_files():
        tree = ast.parse(path.read_text())
        allowed_nodes = set()
        for node in ast.walk(tree):
            if isinstance(node, ast.FunctionDef) and node.name in ALLOWED_FUNCTIONS:
                allowed_nodes.update(id(n) for n in ast.walk(node))
        for node in ast.walk(tree):
            if id(node) in allowed_nodes:
                continue
            if isinstance(node, ast.Constant) and isinstance(node.value, (float, complex)):
                offenders.append(f"{path.name}:{node.lineno} literal {node.value!r}")
            if isinstance(node, ast.Name) and node.id in ("float", "complex"):
                offenders.append(f"{path.name}:{node.lineno} uses {node.id}")
            if isinstance(node, ast.Attribute) and node.attr.startswith(("float", "complex", "sqrt", "log")):
                offenders.append(f"{path.name}:{node.lineno} uses .{node.attr}")
    return offenders


class FloatFound(AssertionError):
    pass


def walk(value, where, seen):
    if id(value) in seen:
        return
    seen.add(id(value))
    if isinstance(value, (bool, int, Fraction, str, bytes, type(None))):
        return
    if isinstance(value, (float, complex, np.floating, np.complexfloating)):
        raise FloatFound(f"{where} produced {type(value).__name__} {value!r}")
    if isinstance(value, np.ndarray):
        if value.dtype != object:
            raise FloatFound(f"{where} produced a {value.dtype} array")
        for v in value.flat:
            walk(v, where, seen)
        return
    if isinstance(value, ExactMatrix):
        for arr in (value.re, value.im):
            walk(arr, where, seen)
        return
    if isinstance(value, GaussianRational):
        return
    if isinstance(value, dict):
        for k, v in value.items():
            walk(k, where, seen)
            walk(v, where, seen)
        return
    if isinstance(value, (list, tuple, set, frozenset)):
        for v in value:
            walk(v, where, seen)
        return
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        for f in dataclasses.fields(value):
            walk(getattr(value, f.name), where, seen)


def float_returns(fn) -> list[str]:
    """Run fn; report every call inside the guarded modules whose return value holds a float."""
    errors = []

    def prof(frame, event, arg):
        if event == "return" and not errors:
            mod = frame.f_globals.get("__name__", "")
            if mod.startswith(GUARDED) and frame.f_code.co_name not in ALLOWED_FUNCTIONS:
                try:
                    walk(arg, f"{mod}.{frame.f_code.co_name}", set())
                except FloatFound as e:
                    errors.append(str(e))

    sys.setprofile(prof)
    try:
        fn()
    finally:
        sys.setprofile(None)
    return errors


