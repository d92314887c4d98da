"""JSON model files: one ambient structure, optionally one submanifold point.

Floats are written with Python's shortest round-trip representation, so a
save/load cycle reproduces every array bit for bit. Matrices are row-major
nested lists and ``sigma`` is indexed ``[r][i][j]``.

A model may carry a ``claims`` object with values asserted about it
(``delta``, ``delta_D``, ``tau``, ``min_K``, ``theorem1_equality``,
``theorem2_equality``); ``kmu-verify check`` tests each one.
"""

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .contact import KMuStructure
from .errors import KMuError, ModelFormatError
from .submanifold import SubmanifoldPoint

FORMAT = "kmu-verify-model"
VERSION = 1
CLAIM_KEYS = ("delta", "delta_D", "tau", "min_K", "theorem1_equality", "theorem2_equality")


def structure_to_dict(S):
    return {
        "m": S.m,
        "kappa": S.kappa,
        "mu": S.mu,
        "c": S.c,
        "phi": S.phi.tolist(),
        "xi": S.xi.tolist(),
        "h": S.h.tolist(),
    }


def structure_from_dict(data):
    try:
        return KMuStructure(
            m=int(data["m"]),
            kappa=float(data["kappa"]),
            mu=float(data["mu"]),
            c=float(data["c"]),
            phi=np.array(data["phi"], dtype=float),
            xi=np.array(data["xi"], dtype=float),
            h=np.array(data["h"], dtype=float),
        )
    except KeyError as exc:
        raise ModelFormatError(f"ambient structure is missing field {exc}") from None
    except (TypeError, ValueError) as exc:
        if isinstance(exc, KMuError):
            raise
        raise ModelFormatError(f"ambient structure is malformed: {exc}") from None


def submanifold_to_dict(sub, include_normal=True):
    out = {"n": sub.n, "mode": sub.mode, "tangent": sub.tangent.tolist(), "sigma": sub.sigma.tolist()}
    if include_normal:
        out["normal"] = sub.normal.tolist()
    return out


def submanifold_from_dict(data, structure):
    try:
        tangent = np.array(data["tangent"], dtype=float)
        normal = data.get("normal")
        if normal is not None:
            normal = np.array(normal, dtype=float)
        sigma = np.array(data["sigma"], dtype=float)
        mode = data.get("mode", "contact")
    except KeyError as exc:
        raise ModelFormatError(f"submanifold is missing field {exc}") from None
    except (TypeError, ValueError) as exc:
        raise ModelFormatError(f"submanifold is malformed: {exc}") from None
    if "n" in data and tangent.ndim == 2 and int(data["n"]) != tangent.shape[0]:
        raise ModelFormatError(f"declared n={data['n']} but the tangent frame has {tangent.shape[0]} rows")
    return SubmanifoldPoint(structure, tangent, normal, sigma, mode)


@dataclass
class ModelFile:
    structure: KMuStructure
    submanifold: SubmanifoldPoint = None
    meta: dict = field(default_factory=dict)
    claims: dict = field(default_factory=dict)

    def to_dict(self):
        out = {"format": FORMAT, "version": VERSION, "meta": dict(self.meta)}
        out["ambient"] = structure_to_dict(self.structure)
        if self.submanifold is not None:
            out["submanifold"] = submanifold_to_dict(self.submanifold)
        if self.claims:
            out["claims"] = dict(self.claims)
        return out

    def to_json(self):
        return json.dumps(self.to_dict(), indent=1)

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict):
            raise ModelFormatError("model file must be a JSON object")
        if data.get("format", FORMAT) != FORMAT:
            raise ModelFormatError(f"unknown format {data.get('format')!r}")
        if "ambient" not in data:
            raise ModelFormatError("model file has no 'ambient' section")
        S = structure_from_dict(data["ambient"])
        sub = None
        if data.get("submanifold") is not None:
            sub = submanifold_from_dict(data["submanifold"], S)
        claims = data.get("claims") or {}
        unknown = set(claims) - set(CLAIM_KEYS)
        if unknown:
            raise ModelFormatError(f"unknown claims {sorted(unknown)}")
        return cls(S, sub, dict(data.get("meta") or {}), dict(claims))

    @classmethod
    def from_json(cls, text):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ModelFormatError(f"not valid JSON: {exc}") from None
        return cls.from_dict(data)

    def save(self, path):
        Path(path).write_text(self.to_json() + "\n")

    @classmethod
    def load(cls, path):
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ModelFormatError(f"cannot read {path}: {exc}") from None
        return cls.from_json(text)
