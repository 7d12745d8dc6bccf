"""The WitnessReport record returned by verification and search routines."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .algebra import AlgebraSpec, Element, element_from_json, element_to_json
from .errors import InvalidInput

PASS = "PASS"
FAIL = "FAIL"
WITNESS_FOUND = "WITNESS_FOUND"
NO_WITNESS = "NO_WITNESS"
VERDICTS = (PASS, FAIL, WITNESS_FOUND, NO_WITNESS)


def _float_out(x: float):
    # JSON has no inf/nan literals
    return x if math.isfinite(x) else repr(x)


def _float_in(x) -> float:
    return float(x)


@dataclass
class WitnessReport:
    """Outcome of a search or verification run.

    ``search`` holds everything needed to replay the run (type, parameters,
    seed, inputs).  ``NO_WITNESS`` only states that ``samples_used`` samples
    produced no violation; ``bounded_search`` flags this.
    """

    verdict: str
    witnesses: list[Element] = field(default_factory=list)
    gap: float = 0.0
    samples_used: int = 0
    residuals: list[float] = field(default_factory=list)
    search: dict = field(default_factory=dict)
    message: str = ""

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise InvalidInput(f"unknown verdict {self.verdict!r}")

    @property
    def bounded_search(self) -> bool:
        return self.verdict == NO_WITNESS

    @property
    def ok(self) -> bool:
        return self.verdict in (PASS, WITNESS_FOUND, NO_WITNESS)

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "gap": _float_out(self.gap),
            "samples_used": self.samples_used,
            "bounded_search": self.bounded_search,
            "residuals": [_float_out(r) for r in self.residuals],
            "witnesses": [
                {"algebra": w.spec.to_json(), **element_to_json(w)} for w in self.witnesses
            ],
            "search": self.search,
            "message": self.message,
        }

    @classmethod
    def from_json(cls, data: dict) -> "WitnessReport":
        try:
            witnesses = [
                element_from_json(AlgebraSpec.from_json(w["algebra"]), w) for w in data["witnesses"]
            ]
            return cls(
                verdict=data["verdict"],
                witnesses=witnesses,
                gap=_float_in(data["gap"]),
                samples_used=int(data["samples_used"]),
                residuals=[_float_in(r) for r in data.get("residuals", [])],
                search=dict(data.get("search", {})),
                message=data.get("message", ""),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInput(f"malformed witness report: {exc}") from exc

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)

    def save(self, path) -> None:
        Path(path).write_text(self.dumps() + "\n")

    @classmethod
    def load(cls, path) -> "WitnessReport":
        try:
            return cls.from_json(json.loads(Path(path).read_text()))
        except json.JSONDecodeError as exc:
            raise InvalidInput(f"{path}: {exc}") from exc
