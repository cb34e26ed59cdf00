"""Model configuration files: parsing, validation and canonical re-emission.

A config is a JSON object.  Integers may be written as JSON numbers or as
decimal strings (needed above 2**53 for lossless transport); rational matrix
entries are "num/den" strings.  Example::

    {"kind": "torus", "q": 2, "matrix": [[2, 3], [1, 2]]}
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Optional

from . import matrices as mx
from .errors import ConfigError, PreconditionError
from .exact_arith import format_rational, parse_rational
from .finite_field import prime_power
from .models import (
    AbelianProductModel,
    GradedAction,
    GradedPiece,
    TorusModel,
    abelian_graded_action,
    constant_map_action,
    frob_trace_from_curve,
    torus_graded_action,
)

KINDS = ("torus", "abelian_product", "constant", "custom_graded")
JSON_SAFE_INT = 2**53


@dataclass(frozen=True)
class PieceConfig:
    degree: int
    weight: int
    f_action: tuple
    frob_action: tuple


@dataclass(frozen=True)
class ModelConfig:
    kind: str
    q: int
    matrix: Optional[tuple] = None
    frob_trace: Optional[int] = None
    pieces: Optional[tuple] = None
    iterate: int = 1
    terms: Optional[int] = None
    curve: Optional[tuple] = None  # (a4, a6) of y^2 = x^3 + a4 x + a6, abelian only
    dim: Optional[int] = None  # custom_graded only
    proper: bool = False  # custom_graded only

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"kind must be one of {', '.join(KINDS)}; got {self.kind!r}")
        if self.q < 2:
            raise ConfigError("q must be >= 2")
        try:
            prime_power(self.q)
        except PreconditionError as exc:
            raise ConfigError(str(exc)) from None
        if self.iterate < 1:
            raise ConfigError("iterate must be >= 1")
        if self.terms is not None and self.terms < 1:
            raise ConfigError("terms must be >= 1")
        need = {
            "torus": ("matrix",),
            "abelian_product": ("matrix",),
            "constant": (),
            "custom_graded": ("pieces",),
        }[self.kind]
        for name in need:
            if getattr(self, name) is None:
                raise ConfigError(f"kind {self.kind!r} requires {name!r}")
        if self.kind == "abelian_product" and self.frob_trace is None and self.curve is None:
            raise ConfigError("abelian_product requires 'frob_trace' or 'curve'")
        if self.curve is not None:
            if self.kind != "abelian_product":
                raise ConfigError("'curve' only applies to abelian_product")
            self.effective_frob_trace()  # validates the curve against frob_trace

    def with_iterate(self, r: int) -> "ModelConfig":
        return replace(self, iterate=r)

    def with_terms(self, n: Optional[int]) -> "ModelConfig":
        return replace(self, terms=n)

    # --- model construction ------------------------------------------------

    def effective_frob_trace(self) -> Optional[int]:
        if self.curve is None:
            return self.frob_trace
        try:
            a = frob_trace_from_curve(self.q, *self.curve)
        except PreconditionError as exc:
            raise ConfigError(f"curve: {exc}") from None
        if self.frob_trace is not None and self.frob_trace != a:
            raise ConfigError(f"frob_trace {self.frob_trace} disagrees with the curve (a = {a})")
        return a

    def model(self):
        """TorusModel / AbelianProductModel at this iterate, or None for other kinds."""
        try:
            if self.kind == "torus":
                return TorusModel(self.q, mx.matpow(self.matrix, self.iterate))
            if self.kind == "abelian_product":
                m = mx.matpow(self.matrix, self.iterate)
                return AbelianProductModel(self.q, self.effective_frob_trace(), mx.size(m), m)
        except PreconditionError as exc:
            raise ConfigError(str(exc)) from None
        return None

    def graded_action(self) -> GradedAction:
        try:
            if self.kind == "torus":
                return torus_graded_action(self.model())
            if self.kind == "abelian_product":
                return abelian_graded_action(self.model())
            if self.kind == "constant":
                return constant_map_action(self.q)
            pieces = tuple(
                GradedPiece(p.degree, p.weight, p.f_action, p.frob_action) for p in self.pieces
            )
            dim = self.dim
            if dim is None:
                dim = max(((max(p.degree, p.weight) + 1) // 2 for p in pieces), default=0)
            action = GradedAction(pieces, self.q, proper=self.proper, dim=dim)
        except PreconditionError as exc:
            raise ConfigError(str(exc)) from None
        return action.iterate(self.iterate)

    # --- serialization -----------------------------------------------------

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "q": encode_int(self.q), "iterate": encode_int(self.iterate)}
        if self.matrix is not None:
            out["matrix"] = encode_matrix(self.matrix)
        if self.frob_trace is not None:
            out["frob_trace"] = encode_int(self.frob_trace)
        if self.curve is not None:
            out["curve"] = [encode_int(c) for c in self.curve]
        if self.terms is not None:
            out["terms"] = encode_int(self.terms)
        if self.pieces is not None:
            out["pieces"] = [
                {
                    "degree": p.degree,
                    "weight": p.weight,
                    "f_action": encode_matrix(p.f_action),
                    "frob_action": encode_matrix(p.frob_action),
                }
                for p in self.pieces
            ]
        if self.kind == "custom_graded":
            out["proper"] = self.proper
            if self.dim is not None:
                out["dim"] = self.dim
        return out

    @classmethod
    def from_dict(cls, data) -> "ModelConfig":
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        known = {
            "kind", "q", "matrix", "frob_trace", "pieces", "iterate", "terms", "curve",
            "dim", "proper",
        }
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown config fields: {', '.join(unknown)}")
        if "kind" not in data or "q" not in data:
            raise ConfigError("config needs 'kind' and 'q'")
        kind = data["kind"]
        if not isinstance(kind, str):
            raise ConfigError("'kind' must be a string")
        kwargs = {"kind": kind, "q": decode_int(data["q"], "q")}
        if "matrix" in data:
            kwargs["matrix"] = decode_matrix(data["matrix"], "matrix", integral=True)
        if "frob_trace" in data:
            kwargs["frob_trace"] = decode_int(data["frob_trace"], "frob_trace")
        if "iterate" in data:
            kwargs["iterate"] = decode_int(data["iterate"], "iterate")
        if "terms" in data and data["terms"] is not None:
            kwargs["terms"] = decode_int(data["terms"], "terms")
        if "curve" in data:
            curve = data["curve"]
            if not isinstance(curve, list) or len(curve) != 2:
                raise ConfigError("'curve' must be [a4, a6]")
            kwargs["curve"] = tuple(decode_int(c, "curve") for c in curve)
        if "pieces" in data:
            kwargs["pieces"] = _decode_pieces(data["pieces"])
        if "dim" in data:
            kwargs["dim"] = decode_int(data["dim"], "dim")
        if "proper" in data:
            if not isinstance(data["proper"], bool):
                raise ConfigError("'proper' must be true or false")
            kwargs["proper"] = data["proper"]
        return cls(**kwargs)


def _decode_pieces(raw) -> tuple:
    if not isinstance(raw, list) or not raw:
        raise ConfigError("'pieces' must be a nonempty list")
    out = []
    for i, p in enumerate(raw):
        where = f"pieces[{i}]"
        if not isinstance(p, dict):
            raise ConfigError(f"{where} must be an object")
        missing = [k for k in ("degree", "weight", "f_action", "frob_action") if k not in p]
        if missing:
            raise ConfigError(f"{where} is missing {', '.join(missing)}")
        out.append(
            PieceConfig(
                degree=decode_int(p["degree"], f"{where}.degree"),
                weight=decode_int(p["weight"], f"{where}.weight"),
                f_action=decode_matrix(p["f_action"], f"{where}.f_action"),
                frob_action=decode_matrix(p["frob_action"], f"{where}.frob_action"),
            )
        )
    return tuple(out)


# --- scalar codecs ---------------------------------------------------------


def encode_int(n: int):
    return n if abs(n) < JSON_SAFE_INT else str(n)


def decode_int(value, name: str) -> int:
    if isinstance(value, bool):
        raise ConfigError(f"{name}: expected an integer, got a boolean")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        try:
            return int(value.strip())
        except ValueError:
            pass
    raise ConfigError(f"{name}: expected an integer, got {value!r}")


def encode_scalar(x):
    x = Fraction(x)
    if x.denominator == 1:
        return encode_int(x.numerator)
    return format_rational(x)


def encode_matrix(m: tuple) -> list:
    return [[encode_scalar(x) for x in row] for row in m]


def decode_matrix(value, name: str, integral: bool = False) -> tuple:
    if not isinstance(value, list) or not all(isinstance(r, list) for r in value):
        raise ConfigError(f"{name}: expected a list of rows")
    rows = []
    for row in value:
        entries = []
        for x in row:
            if isinstance(x, (bool, float)) or not isinstance(x, (int, str)):
                raise ConfigError(f"{name}: entry {x!r} is not an exact number")
            try:
                entries.append(parse_rational(x))
            except (ValueError, ZeroDivisionError):
                raise ConfigError(f"{name}: cannot parse {x!r}") from None
        rows.append(entries)
    if integral and any(e.denominator != 1 for row in rows for e in row):
        raise ConfigError(f"{name}: entries must be integers")
    try:
        return mx.as_matrix(rows)
    except PreconditionError as exc:
        raise ConfigError(f"{name}: {exc}") from None


# --- files -----------------------------------------------------------------


def bundled_configs() -> list:
    return sorted(
        p.name[: -len(".json")]
        for p in resources.files("twistzeta").joinpath("data").iterdir()
        if p.name.endswith(".json")
    )


def resolve_config_path(name_or_path: str):
    """A filesystem path, or else the bundled config with the same base name."""
    path = Path(name_or_path)
    if path.is_file():
        return path
    name = path.name[: -len(".json")] if path.name.endswith(".json") else path.name
    bundled = resources.files("twistzeta").joinpath("data", f"{name}.json")
    if bundled.is_file():
        return bundled
    raise ConfigError(
        f"no config file {name_or_path!r} and no bundled config {name!r} "
        f"(bundled: {', '.join(bundled_configs())})"
    )


def load_config(name_or_path: str) -> ModelConfig:
    path = resolve_config_path(name_or_path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{name_or_path}: invalid JSON ({exc})") from None
    return ModelConfig.from_dict(data)


__all__ = [
    "KINDS",
    "ModelConfig",
    "PieceConfig",
    "load_config",
    "resolve_config_path",
    "bundled_configs",
    "encode_scalar",
    "encode_matrix",
    "decode_matrix",
    "decode_int",
]
