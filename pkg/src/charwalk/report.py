"""Experiment configs, reports, and their CSV/JSON encodings."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field

from . import __version__
from .errors import InvalidInputError

SPEC_VERSION = "1.0"
DEFAULT_SEED = 0xC0FFEE
COMMANDS = ("walk-exact", "walk-mc", "char-dist", "block-census", "prime-walk",
            "weil-check", "verify")
FORMATS = ("csv", "json")


def round12(x):
    """Round floats to 12 significant digits, recursively; non-finite become None."""
    if isinstance(x, bool) or x is None:
        return x
    if isinstance(x, float):
        if not math.isfinite(x):
            return None
        return float(f"{x:.12g}")
    if isinstance(x, dict):
        return {k: round12(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [round12(v) for v in x]
    if hasattr(x, "item"):  # numpy scalar
        return round12(x.item())
    return x


@dataclass
class ExperimentConfig:
    command: str
    parameters: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise InvalidInputError(f"unknown command {self.command!r}")
        params = dict(self.parameters)
        params.setdefault("seed", DEFAULT_SEED)
        params.setdefault("format", "csv")
        if params["format"] not in FORMATS:
            raise InvalidInputError(f"format must be one of {FORMATS}")
        self.parameters = params

    def to_dict(self) -> dict:
        return {"command": self.command, "parameters": dict(self.parameters)}

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        return cls(d["command"], dict(d.get("parameters", {})))


@dataclass
class Verdict:
    criterion: str
    passed: bool
    measured: float | None
    threshold: float | None
    note: str = ""


@dataclass
class ExperimentReport:
    command: str
    inputs: dict
    outputs: dict
    verdicts: list = field(default_factory=list)
    wall_time: float = 0.0
    spec_version: str = SPEC_VERSION
    package_version: str = __version__
    timings: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.verdicts)

    def to_dict(self, wall_time: bool = True) -> dict:
        d = {
            "spec_version": self.spec_version,
            "package_version": self.package_version,
            "command": self.command,
            "inputs": self.inputs,
            "outputs": round12(self.outputs),
            "verdicts": [round12(asdict(v)) for v in self.verdicts],
        }
        if wall_time:
            d["wall_time"] = round12(float(self.wall_time))
            d["timings"] = round12(self.timings)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentReport":
        return cls(
            command=d["command"], inputs=d["inputs"], outputs=d["outputs"],
            verdicts=[Verdict(**v) for v in d["verdicts"]],
            wall_time=d.get("wall_time", 0.0), spec_version=d["spec_version"],
            package_version=d.get("package_version", __version__),
            timings=d.get("timings", {}),
        )

    def normalized(self) -> "ExperimentReport":
        """The report as it reads back after a JSON round trip."""
        return ExperimentReport.from_dict(json.loads(self.to_json()))

    def to_json(self, wall_time: bool = True) -> str:
        return json.dumps(self.to_dict(wall_time), indent=2, allow_nan=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "ExperimentReport":
        return cls.from_dict(json.loads(text))

    def tables(self) -> dict:
        return {k: v for k, v in self.outputs.items()
                if isinstance(v, list) and v and isinstance(v[0], dict)}

    def to_csv(self, table: str | None = None) -> str:
        """One table as CSV: header row, comma separators, CRLF line ends."""
        tables = self.tables()
        if table is None:
            if "criteria" in tables:
                table = "criteria"
            elif not tables:
                raise InvalidInputError("report has no tabular output")
            else:
                table = next(iter(tables))
        return rows_to_csv(round12(tables[table]))


def _cell(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (list, tuple)):
        return " ".join(str(x) for x in v)
    return str(v)


def rows_to_csv(rows: list) -> str:
    buf = io.StringIO()
    header = list(rows[0].keys())
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_cell(r.get(h)) for h in header])
    return buf.getvalue()
