from typing import (
    Any,
    Literal,
    Optional,
    TypedDict,
)


Status = Literal["pass", "fail"]


class ReportDict(TypedDict):
    name: str
    statement: str
    status: Status
    witness: Optional[dict]
    details: dict


class DegreeDict(TypedDict):
    degree: int
    dim: int
    representatives: list[list[int]]


class RegistryEntry(TypedDict):
    value: Any
    oracle: str
    command: str


class CoefficientSpec(TypedDict, total=False):
    type: Literal["constant", "permutation", "explicit"]
    dim: int
    subgroup: str
    dims: dict[str, int]
    matrices: dict[str, list[list[int]]]
