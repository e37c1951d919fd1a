"""Scale-certified answers."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Mapping


class Answer(str, Enum):
    YES = "YES"
    NO = "NO"
    UNKNOWN = "UNKNOWN"


def jsonable(v: Any) -> Any:
    """Exact values to JSON: integral rationals as ints, others as ``"p/q"``.

    Tuples (lattice points, free-group words as signed letter indices) become
    lists; sets become sorted lists.
    """
    if v is None or isinstance(v, (bool, str)):
        return v
    if isinstance(v, int):
        return v
    if isinstance(v, Fraction):
        return int(v) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(v, Enum):
        return v.value
    if isinstance(v, Mapping):
        return {str(k): jsonable(x) for k, x in v.items()}
    if isinstance(v, (set, frozenset)):
        items = [jsonable(x) for x in v]
        return sorted(items, key=_sort_key)
    if isinstance(v, (list, tuple)):
        return [jsonable(x) for x in v]
    if hasattr(v, "to_json"):
        return v.to_json()
    return str(v)


def _sort_key(x: Any) -> Any:
    if isinstance(x, str) and "/" in x:
        p, q = x.split("/")
        return (0, Fraction(int(p), int(q)), "")
    if isinstance(x, (int, Fraction)):
        return (0, Fraction(x), "")
    return (1, 0, repr(x))


@dataclass(frozen=True)
class Certificate:
    """``kind`` is one of WitnessPoint, WitnessBall, Cover, EscapeSample,
    Companion, Chain, Family; ``data`` holds raw points and scales."""

    kind: str
    data: Mapping[str, Any] = field(default_factory=dict)

    def __getitem__(self, name: str) -> Any:
        return self.data[name]

    def get(self, name: str, default: Any = None) -> Any:
        return self.data.get(name, default)

    def to_json(self) -> dict:
        return {"kind": self.kind, **{k: jsonable(v) for k, v in self.data.items()}}


@dataclass(frozen=True)
class Verdict:
    answer: Answer
    test: str
    scales: Mapping[str, Any] = field(default_factory=dict)
    window: Any = None
    certificate: Certificate | None = None
    narrative: str = ""
    label: str | None = None
    reason: str | None = None

    @property
    def yes(self) -> bool:
        return self.answer is Answer.YES

    @property
    def no(self) -> bool:
        return self.answer is Answer.NO

    @property
    def unknown(self) -> bool:
        return self.answer is Answer.UNKNOWN

    def to_json(self) -> dict:
        out: dict[str, Any] = {"test": self.test, "answer": self.answer.value}
        if self.label:
            out["label"] = self.label
        if self.reason:
            out["reason"] = self.reason
        out["scales"] = {k: jsonable(v) for k, v in self.scales.items()}
        if self.window is not None:
            out["window"] = self.window.to_json()
        out["certificate"] = None if self.certificate is None else self.certificate.to_json()
        out["narrative"] = self.narrative
        return out


def unknown(test: str, window: Any, scales: Mapping[str, Any], reason: str = "core-empty") -> Verdict:
    return Verdict(
        Answer.UNKNOWN,
        test,
        dict(scales),
        window,
        None,
        f"window core too small for the requested scales ({reason})",
        reason=reason,
    )


class PreconditionError(ValueError):
    """An operation was called outside its precondition."""
