"""JSON run configurations.

Top-level keys: ``system``, ``command``, ``mode``, ``output``, ``budget``,
``seed`` and optionally ``selector``. Rationals are written as ``"p/q"``
strings (integers are accepted too).

``system`` is either a catalog entry::

    {"catalog": "prepend", "m": 2, "K": 4}

or an inline system::

    {"coords": [0, 1, 2], "generators": [[0, 1, 2], [0, 0, 0]]}
    {"table": [["0", "1/2"], ["1/2", "0"]], "generators": [[1, 0]]}

``command`` is a string such as ``"potp delta=1/8 eps=1/4"`` or a dict
``{"verb": "potp", "delta": "1/8", "eps": "1/4"}``.
"""

from __future__ import annotations

import json
import shlex
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

from .action import SELECTOR_MODES, SemigroupSystem
from .catalog import prepend_system, random_system, sys3_full, sys3_identity
from .metric import MODES, build_space
from .skew import example_rotation_product
from .symbolic import DEFAULT_POINT_BUDGET

CATALOG = ("prepend", "rotation-pair", "sys3-identity", "sys3-full", "random")
KEYS = {"system", "command", "mode", "output", "budget", "seed", "selector"}
OUTPUT_KEYS = {"csv", "dot", "report"}


class ConfigError(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


@dataclass
class RunConfig:
    system: dict[str, Any]
    verb: str
    params: dict[str, str] = field(default_factory=dict)
    mode: str = "closed"
    selector: str = "shared"
    csv: str | None = None
    dot: str | None = None
    report: str | None = None
    budget: int = DEFAULT_POINT_BUDGET
    seed: int | None = None


def parse_rational(text: Any, path: str = "value") -> Fraction:
    if isinstance(text, bool) or isinstance(text, float):
        raise ConfigError(path, f"expected an integer or 'p/q' string, got {text!r}")
    try:
        return Fraction(text)
    except (ValueError, TypeError, ZeroDivisionError):
        raise ConfigError(path, f"not a rational: {text!r}") from None


def parse_kv(items, path: str = "params") -> dict[str, str]:
    out = {}
    for item in items:
        if "=" not in item:
            raise ConfigError(path, f"expected key=value, got {item!r}")
        k, v = item.split("=", 1)
        out[k] = v
    return out


def _int(value: Any, path: str) -> int:
    if isinstance(value, bool):
        raise ConfigError(path, f"expected an integer, got {value!r}")
    try:
        return int(value)
    except (TypeError, ValueError):
        raise ConfigError(path, f"expected an integer, got {value!r}") from None


def catalog_system(name: str, params: dict[str, Any], seed: int | None = None, path: str = "system",
                   budget: int = DEFAULT_POINT_BUDGET) -> SemigroupSystem:
    """Build a catalog system; ``random`` needs a seed from ``params`` or ``seed``."""
    p = dict(params)
    if name == "prepend":
        return prepend_system(_int(p.get("m", 2), f"{path}.m"), _int(p.get("K", 4), f"{path}.K"), budget)
    if name == "rotation-pair":
        q = _int(p.get("q", 4), f"{path}.q")
        a0 = _int(p.get("a0", 1), f"{path}.a0")
        a1 = _int(p.get("a1", 2), f"{path}.a1")
        try:
            return example_rotation_product(q, a0, a1).system
        except ValueError as e:
            raise ConfigError(path, str(e)) from None
    if name == "sys3-identity":
        return sys3_identity()
    if name == "sys3-full":
        return sys3_full()
    if name == "random":
        s = p.get("seed", seed)
        if s is None:
            raise ConfigError(f"{path}.seed", "random systems need a seed")
        n = _int(p.get("n", 4), f"{path}.n")
        m = _int(p.get("m", 2), f"{path}.m")
        model = p.get("model", "line")
        try:
            return random_system(_int(s, f"{path}.seed"), n, m, model)
        except ValueError as e:
            raise ConfigError(path, str(e)) from None
    raise ConfigError(f"{path}.catalog", f"unknown catalog name {name!r}; known: {', '.join(CATALOG)}")


def inline_system(spec: dict[str, Any], path: str = "system") -> SemigroupSystem:
    if "generators" not in spec:
        raise ConfigError(f"{path}.generators", "missing")
    has_coords, has_table = "coords" in spec, "table" in spec
    if has_coords == has_table:
        raise ConfigError(path, "give exactly one of 'coords' or 'table'")
    labels = spec.get("labels")
    try:
        if has_coords:
            coords = [
                [parse_rational(v, f"{path}.coords[{i}]") for v in c] if isinstance(c, list)
                else parse_rational(c, f"{path}.coords[{i}]")
                for i, c in enumerate(spec["coords"])
            ]
            space = build_space(coords=coords, norm=spec.get("norm", "abs"), labels=labels)
        else:
            table = [[parse_rational(v, f"{path}.table[{i}][{j}]") for j, v in enumerate(row)]
                     for i, row in enumerate(spec["table"])]
            space = build_space(table=table, labels=labels)
    except ConfigError:
        raise
    except ValueError as e:
        raise ConfigError(f"{path}.table" if has_table else f"{path}.coords", str(e)) from None
    gens = []
    for j, g in enumerate(spec["generators"]):
        if not isinstance(g, list):
            raise ConfigError(f"{path}.generators[{j}]", "expected a list of point indices")
        gens.append(tuple(_int(v, f"{path}.generators[{j}][{i}]") for i, v in enumerate(g)))
    try:
        return SemigroupSystem(space, tuple(gens), spec.get("name", "inline"))
    except ValueError as e:
        raise ConfigError(f"{path}.generators", str(e)) from None


def resolve_system(cfg: RunConfig) -> SemigroupSystem:
    spec = cfg.system
    if "catalog" in spec:
        params = {k: v for k, v in spec.items() if k != "catalog"}
        return catalog_system(spec["catalog"], params, cfg.seed, budget=cfg.budget)
    return inline_system(spec)


def _command(raw: Any) -> tuple[str, dict[str, str]]:
    if isinstance(raw, str):
        words = shlex.split(raw)
        if not words:
            raise ConfigError("command", "empty command")
        # Leading bare words form the verb ("sets r", "verify lemma3.3").
        n = next((i for i, w in enumerate(words) if "=" in w), len(words))
        return " ".join(words[:n]), parse_kv(words[n:], "command")
    if isinstance(raw, dict):
        if "verb" not in raw:
            raise ConfigError("command.verb", "missing")
        return str(raw["verb"]), {k: str(v) for k, v in raw.items() if k != "verb"}
    raise ConfigError("command", "expected a string or an object")


def config_from_dict(data: Any) -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError("<root>", "expected a JSON object")
    unknown = set(data) - KEYS
    if unknown:
        raise ConfigError(sorted(unknown)[0], "unknown key")
    for key in ("system", "command"):
        if key not in data:
            raise ConfigError(key, "missing")
    system = data["system"]
    if not isinstance(system, dict):
        raise ConfigError("system", "expected an object")
    if ("catalog" in system) == ("generators" in system):
        raise ConfigError("system", "give exactly one of a catalog name or inline generators")
    verb, params = _command(data["command"])
    mode = data.get("mode", "closed")
    if mode not in MODES:
        raise ConfigError("mode", f"expected one of {MODES}, got {mode!r}")
    selector = data.get("selector", "shared")
    if selector not in SELECTOR_MODES:
        raise ConfigError("selector", f"expected one of {SELECTOR_MODES}, got {selector!r}")
    output = data.get("output", {})
    if not isinstance(output, dict):
        raise ConfigError("output", "expected an object")
    for k in output:
        if k not in OUTPUT_KEYS:
            raise ConfigError(f"output.{k}", "unknown output target")
    budget = _int(data.get("budget", DEFAULT_POINT_BUDGET), "budget")
    if budget <= 0:
        raise ConfigError("budget", "must be positive")
    seed = data.get("seed")
    if seed is not None:
        seed = _int(seed, "seed")
    if system.get("catalog") == "random" and seed is None and "seed" not in system:
        raise ConfigError("seed", "random systems need a seed")
    if "random" in params and seed is None and "seed" not in params:
        raise ConfigError("seed", "random sweeps need a seed")
    return RunConfig(system, verb, params, mode, selector, output.get("csv"), output.get("dot"),
                     output.get("report"), budget, seed)


def load_config(path: str | Path) -> RunConfig:
    """Parse and validate a JSON config; the system is built once to surface metric errors."""
    try:
        data = json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise ConfigError(str(path), "file not found") from None
    except json.JSONDecodeError as e:
        raise ConfigError(str(path), f"invalid JSON: {e}") from None
    cfg = config_from_dict(data)
    resolve_system(cfg)
    return cfg
