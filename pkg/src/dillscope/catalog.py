"""The built-in rule files shipped with the package."""
from __future__ import annotations

from importlib import resources

from .dillmap import DillMap, parse_rule

BUILTIN_NAMES = (
    "thue_morse", "fibonacci", "doubling", "cantor", "xor", "min",
    "min_doubling", "one_to_1_00", "zero_keep",
)


def builtin_text(name: str) -> str:
    if name not in BUILTIN_NAMES:
        raise KeyError(f"unknown built-in rule {name!r}")
    return resources.files("dillscope").joinpath("rules", f"{name}.rule").read_text()


def builtin(name: str) -> DillMap:
    return parse_rule(builtin_text(name), f"{name}.rule", name)


def all_builtins() -> dict[str, DillMap]:
    return {name: builtin(name) for name in BUILTIN_NAMES}
