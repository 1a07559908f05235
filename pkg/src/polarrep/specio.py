"""JSON code-spec file: one portable artifact shared by design, simulate and verify.

Fields: ``n, N, K, rate, design, method, pe, llr_mean, info_set, frozen_set,
enlarged_set, blocks``. For a concatenated scheme ``info_set`` lists the first
index of every info-carrying unit, ``frozen_set`` the channels outside the
enlarged set, and ``enlarged_set``/``blocks`` the outer layout. ``enlarged_set``
is ``null`` when it equals ``info_set`` (no enlargement).
"""

from __future__ import annotations

import json
from pathlib import Path

from .design import CodeSpec, ConcatenatedCodeSpec, validate_scheme
from .reliability import DesignChannel, ReliabilityProfile
from .transform import PolarParams


class SpecFormatError(ValueError):
    """The file is not a usable code spec."""


_METHODS = {"ga": "ga", "genie": "genie", "bec": "bec"}


def spec_to_dict(spec: CodeSpec | ConcatenatedCodeSpec) -> dict:
    profile = spec.profile
    if profile is None:
        raise ValueError("only specs carrying their reliability profile can be serialized")
    if isinstance(spec, ConcatenatedCodeSpec) and not spec.blocks:
        spec = CodeSpec(spec.params, spec.enlarged_set, profile)
    out = {
        "n": spec.params.n,
        "N": spec.N,
        "K": spec.K,
        "rate": spec.rate,
        "design": profile.channel.to_dict(),
        "method": profile.method,
        "pe": [float(p) for p in profile.pe],
        "llr_mean": None if profile.llr_mean is None else [float(m) for m in profile.llr_mean],
        "info_set": list(spec.info_set),
        "frozen_set": list(spec.frozen_set),
        "enlarged_set": None,
        "blocks": [],
    }
    if isinstance(spec, ConcatenatedCodeSpec):
        out["enlarged_set"] = list(spec.enlarged_set)
        out["blocks"] = [list(b) for b in spec.blocks]
    if profile.method == "genie":
        out["genie_trials"] = profile.trials
        out["genie_seed"] = profile.seed
    return out


def save_spec(spec, path) -> None:
    Path(path).write_text(json.dumps(spec_to_dict(spec), indent=1) + "\n")


def format_problems(d: dict) -> list[str]:
    """Inconsistencies between the redundant fields of a spec dictionary."""
    problems = []
    for key in ("n", "N", "K", "rate", "design", "method", "pe", "info_set", "frozen_set", "blocks"):
        if key not in d:
            problems.append(f"format: missing field {key!r}")
    if problems:
        return problems
    n, N, K = d["n"], d["N"], d["K"]
    if N != 2**n:
        problems.append(f"length: N={N} is not 2**n with n={n}")
    if len(d["pe"]) != N:
        problems.append(f"profile: pe has {len(d['pe'])} entries, expected N={N}")
    if d.get("llr_mean") is not None and len(d["llr_mean"]) != N:
        problems.append("profile: llr_mean length differs from N")
    if len(d["info_set"]) != K:
        problems.append(f"dimension: info_set has {len(d['info_set'])} entries but K={K}")
    if abs(d["rate"] - K / N) > 1e-12:
        problems.append(f"rate: rate={d['rate']} differs from K/N={K / N}")
    used = d["enlarged_set"] if d.get("enlarged_set") is not None else d["info_set"]
    if sorted(set(used) | set(d["frozen_set"])) != list(range(N)) or set(used) & set(d["frozen_set"]):
        problems.append("frozen set: frozen_set must be the complement of the used channels")
    return problems


def spec_from_dict(d: dict) -> CodeSpec | ConcatenatedCodeSpec:
    problems = format_problems(d)
    if problems:
        raise SpecFormatError("; ".join(problems))
    method = d["method"]
    if method not in _METHODS:
        raise SpecFormatError(f"unknown method {method!r}")
    profile = ReliabilityProfile(
        DesignChannel.from_dict(d["design"]),
        method,
        d["pe"],
        d.get("llr_mean"),
        d.get("genie_trials"),
        d.get("genie_seed"),
    )
    params = PolarParams(int(d["n"]))
    if d.get("enlarged_set") is None and not d["blocks"]:
        return CodeSpec(params, tuple(d["info_set"]), profile)
    enlarged = d["enlarged_set"] if d.get("enlarged_set") is not None else d["info_set"]
    return ConcatenatedCodeSpec(params, tuple(enlarged), tuple(tuple(b) for b in d["blocks"]), int(d["K"]), profile)


def load_spec(path) -> CodeSpec | ConcatenatedCodeSpec:
    try:
        d = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise SpecFormatError(f"cannot read code spec {path}: {exc}") from exc
    return spec_from_dict(d)


def check_spec_file(path) -> list[str]:
    """Every invariant the file violates (empty when the spec is sound)."""
    try:
        d = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        return [f"format: cannot read {path}: {exc}"]
    problems = format_problems(d)
    if problems:
        return problems
    try:
        spec = spec_from_dict(d)
    except (SpecFormatError, ValueError) as exc:
        return [str(exc)]
    if isinstance(spec, ConcatenatedCodeSpec):
        problems += validate_scheme(spec, spec.profile)
        if list(spec.info_set) != list(d["info_set"]):
            problems.append("info set: info_set does not list the first index of every unit")
    return problems
