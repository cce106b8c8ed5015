"""Run configuration: strict JSON parsing and the two built-in presets."""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field, replace
from pathlib import Path

from .ahlwb import AuxStrategy
from .errors import InputError
from .geometry import HalfSpace, Polyhedron
from .schedule import LambdaSchedule, SweepSchedule

FIELDS = ("dimension", "A", "B", "start", "lambda", "sweeps", "num_sweeps", "aux",
          "control_offset_A", "control_offset_B", "output")
REQUIRED = ("dimension", "A", "B", "start")
OUTPUT_FIELDS = ("dir", "formats", "prefix")

# Experiment polyhedra: A is a region toward the lower left, B toward the upper right.
EXPERIMENT_A = (((4.0, -3.0), 17.0), ((1.0, 0.0), -4.0), ((1.0, 1.0), -11.0), ((0.0, 1.0), -5.0))
EXPERIMENT_B = (((5.0, -4.0), 30.0), ((1.0, -2.0), 0.0), ((-1.0, -4.0), -24.0), ((-2.0, -1.0), -13.0))


@dataclass(frozen=True)
class OutputOptions:
    dir: str | None = None
    formats: tuple[str, ...] = ("csv", "json")
    prefix: str = "trace"

    def to_dict(self) -> dict:
        return {"dir": self.dir, "formats": list(self.formats), "prefix": self.prefix}


@dataclass(frozen=True)
class RunConfig:
    dimension: int
    A: Polyhedron
    B: Polyhedron
    start: tuple[float, ...]
    lam: LambdaSchedule = field(default_factory=LambdaSchedule)
    sweeps: SweepSchedule = field(default_factory=SweepSchedule)
    num_sweeps: int = 50
    aux: AuxStrategy = AuxStrategy.FIXED_ANCHOR
    control_offset_A: int = 0
    control_offset_B: int = 0
    output: OutputOptions = field(default_factory=OutputOptions)
    name: str = field(default="custom", compare=False)

    def with_sweeps(self, num_sweeps: int) -> "RunConfig":
        if num_sweeps < 1:
            raise InputError("num_sweeps must be at least 1")
        return replace(self, num_sweeps=num_sweeps)

    def to_dict(self) -> dict:
        return {
            "dimension": self.dimension,
            "A": self.A.to_list(),
            "B": self.B.to_list(),
            "start": list(self.start),
            "lambda": self.lam.to_dict(),
            "sweeps": self.sweeps.to_dict(),
            "num_sweeps": self.num_sweeps,
            "aux": self.aux.value,
            "control_offset_A": self.control_offset_A,
            "control_offset_B": self.control_offset_B,
            "output": self.output.to_dict(),
        }


def _polyhedron(rows, name: str, dim: int, problems: list[str]) -> Polyhedron | None:
    if not isinstance(rows, list) or not rows:
        problems.append(f"{name}: expected a non-empty list of half-spaces")
        return None
    hs = []
    for i, row in enumerate(rows):
        where = f"{name}[{i}]"
        if not isinstance(row, dict):
            problems.append(f"{where}: expected an object with 'normal' and 'offset'")
            continue
        extra = set(row) - {"normal", "offset"}
        if extra:
            problems.append(f"{where}: unknown field(s) {sorted(extra)}")
        normal, offset = row.get("normal"), row.get("offset")
        if not isinstance(normal, list) or not all(isinstance(v, (int, float)) for v in normal):
            problems.append(f"{where}.normal: expected a list of numbers")
            continue
        if not isinstance(offset, (int, float)) or isinstance(offset, bool):
            problems.append(f"{where}.offset: expected a number")
            continue
        if len(normal) != dim:
            problems.append(f"{where}.normal: has {len(normal)} coordinates, dimension is {dim}")
            continue
        try:
            hs.append(HalfSpace(tuple(normal), offset))
        except InputError as exc:
            problems.append(f"{where}: {exc}")
    if len(hs) != len(rows):
        return None
    return Polyhedron(tuple(hs))


def parse_config(data: dict, name: str = "custom") -> RunConfig:
    """Validate a config mapping, reporting every problem at once."""
    if not isinstance(data, dict):
        raise InputError("config must be a JSON object")
    problems = []
    extra = set(data) - set(FIELDS)
    if extra:
        problems.append(f"unknown field(s): {sorted(extra)}")
    for key in REQUIRED:
        if key not in data:
            problems.append(f"missing required field {key!r}")
    if problems and any(k not in data for k in REQUIRED):
        raise InputError("invalid config:\n  " + "\n  ".join(problems))

    dim = data["dimension"]
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        problems.append("dimension: expected a positive integer")
        raise InputError("invalid config:\n  " + "\n  ".join(problems))

    A = _polyhedron(data["A"], "A", dim, problems)
    B = _polyhedron(data["B"], "B", dim, problems)

    start = data["start"]
    if not isinstance(start, list) or not all(isinstance(v, (int, float)) for v in start):
        problems.append("start: expected a list of numbers")
    elif len(start) != dim:
        problems.append(f"start: has {len(start)} coordinates, dimension is {dim}")

    kwargs = {}
    for key, cls, attr in (("lambda", LambdaSchedule, "lam"), ("sweeps", SweepSchedule, "sweeps")):
        if key in data:
            try:
                kwargs[attr] = cls.from_dict(data[key])
            except (InputError, TypeError, ValueError) as exc:
                problems.append(f"{key}: {exc}")

    num = data.get("num_sweeps", 50)
    if not isinstance(num, int) or isinstance(num, bool) or num < 1:
        problems.append("num_sweeps: expected an integer >= 1")
    try:
        aux = AuxStrategy(data.get("aux", "fixed-anchor"))
    except ValueError:
        problems.append(f"aux: expected one of {[s.value for s in AuxStrategy]}")
        aux = AuxStrategy.FIXED_ANCHOR
    for key in ("control_offset_A", "control_offset_B"):
        v = data.get(key, 0)
        if not isinstance(v, int) or isinstance(v, bool):
            problems.append(f"{key}: expected an integer")

    output = OutputOptions()
    if "output" in data:
        out = data["output"]
        if not isinstance(out, dict) or set(out) - set(OUTPUT_FIELDS):
            problems.append(f"output: expected an object with fields {list(OUTPUT_FIELDS)}")
        else:
            formats = tuple(out.get("formats", ("csv", "json")))
            bad = set(formats) - {"csv", "json", "svg"}
            if bad:
                problems.append(f"output.formats: unknown format(s) {sorted(bad)}")
            output = OutputOptions(out.get("dir"), formats, out.get("prefix", "trace"))

    if problems:
        raise InputError("invalid config:\n  " + "\n  ".join(problems))
    return RunConfig(
        dimension=dim, A=A, B=B, start=tuple(float(v) for v in start),
        num_sweeps=num, aux=aux,
        control_offset_A=data.get("control_offset_A", 0),
        control_offset_B=data.get("control_offset_B", 0),
        output=output, name=name, **kwargs,
    )


def preset(name: str) -> RunConfig:
    """The two experiment presets: ``exp1`` (fixed anchor) and ``exp2`` (warm start)."""
    if name not in PRESETS:
        raise InputError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
    return PRESETS[name]


def _experiment(name: str, aux: AuxStrategy) -> RunConfig:
    return RunConfig(
        dimension=2,
        A=Polyhedron.from_rows(EXPERIMENT_A),
        B=Polyhedron.from_rows(EXPERIMENT_B),
        start=(8.0, -13.0),
        num_sweeps=50,
        aux=aux,
        name=name,
    )


PRESETS = {
    "exp1": _experiment("exp1", AuxStrategy.FIXED_ANCHOR),
    "exp2": _experiment("exp2", AuxStrategy.WARM_START),
}


def load_config(source: str | Path) -> RunConfig:
    """Load a preset by name or a JSON config file by path."""
    if isinstance(source, str) and source in PRESETS:
        return PRESETS[source]
    path = Path(source)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"cannot read config {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    return parse_config(data, name=path.stem)


def dump_config(cfg: RunConfig, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(cfg.to_dict(), indent=2) + "\n")
    return path


def config_digest(cfg: RunConfig) -> str:
    """SHA-256 of the canonical JSON form (output options excluded)."""
    data = cfg.to_dict()
    data.pop("output")
    blob = json.dumps(data, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()
