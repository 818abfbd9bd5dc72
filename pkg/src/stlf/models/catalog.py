"""Built-in benchmark models with requirements and seeded faults.

The models are small reimplementations in the model DSL; parameters are
chosen so that every check runs in seconds. Each fault is a one-line text
patch of the healthy model that breaks exactly one named requirement.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from stlf.models.dsl import parse_model
from stlf.models.ir import ModelIR
from stlf.models.sim import InputAssignment, SimConfig
from stlf.stl.reqfile import Requirement, parse_requirements


@dataclass(frozen=True)
class FaultVariant:
    name: str
    description: str
    model: ModelIR
    violates: str
    witness: InputAssignment


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    model: ModelIR
    requirements: tuple  # Requirement
    faults: tuple  # FaultVariant
    nsteps: int
    segments: int
    grid: dict  # input name -> list of values for exhaustive checks

    @property
    def sim_config(self) -> SimConfig:
        return SimConfig(self.nsteps)

    def requirement(self, name) -> Requirement:
        for r in self.requirements:
            if r.name == name:
                return r
        raise KeyError(f"{self.name} has no requirement {name!r}")

    def fault(self, name) -> FaultVariant:
        for f in self.faults:
            if f.name == name:
                return f
        raise KeyError(f"{self.name} has no fault {name!r}")


def _read(name):
    return resources.files("stlf.catalog").joinpath(name).read_text()


def apply_patch(text: str, old: str, new: str) -> str:
    if text.count(old) != 1:
        raise ValueError(f"patch target must occur exactly once: {old!r}")
    return text.replace(old, new)


@lru_cache(maxsize=None)
def builtin_models() -> dict:
    """Catalog name -> :class:`CatalogEntry`, in manifest order."""
    manifest = json.loads(_read("manifest.json"))
    out = {}
    for name, spec in manifest.items():
        text = _read(spec["model"])
        faults = tuple(
            FaultVariant(
                name=f["name"],
                description=f["description"],
                model=parse_model(apply_patch(text, *f["replace"])),
                violates=f["violates"],
                witness=InputAssignment(f["witness"]),
            )
            for f in spec.get("faults", ())
        )
        out[name] = CatalogEntry(
            name=name,
            model=parse_model(text),
            requirements=tuple(parse_requirements(_read(spec["requirements"]))),
            faults=faults,
            nsteps=spec["nsteps"],
            segments=spec["segments"],
            grid=spec["grid"],
        )
    return out


def resolve_builtin(ref: str):
    """``NAME`` or ``NAME/FAULT`` -> ``(entry, model)``."""
    name, _, fault = ref.partition("/")
    cat = builtin_models()
    if name not in cat:
        raise KeyError(f"unknown built-in model {name!r}; choose from {sorted(cat)}")
    entry = cat[name]
    return entry, (entry.fault(fault).model if fault else entry.model)
