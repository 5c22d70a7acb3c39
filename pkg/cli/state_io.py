"""
JSON state files.

    {"amplitudes": [[re, im], ... 16 pairs]}   four-qubit state, index 8a+4b+2c+d
    {"z": [[re, im], ... 4 pairs]}             coordinates in the u-basis of A
"""

import json
import logging
from typing import List

from pydantic import BaseModel, ConfigDict, ValidationError, field_validator

from core.qstate import AVector, QuartState
from utils.errors import StateFileError
from utils.helpers import complex_to_pair, pairs_to_complex

logger = logging.getLogger(__name__)


def _check_pairs(value: List[List[float]], expected: int, label: str) -> List[List[float]]:
    if len(value) != expected:
        raise ValueError(f"{label} must hold {expected} [re, im] pairs, got {len(value)}")
    for i, pair in enumerate(value):
        if len(pair) != 2:
            raise ValueError(f"{label}[{i}] must be an [re, im] pair")
    return value


class StateFile(BaseModel):
    model_config = ConfigDict(extra="forbid")

    amplitudes: List[List[float]]

    @field_validator("amplitudes")
    @classmethod
    def _sixteen(cls, value):
        return _check_pairs(value, 16, "amplitudes")

    def to_state(self) -> QuartState:
        return QuartState(pairs_to_complex(self.amplitudes))


class AVectorFile(BaseModel):
    model_config = ConfigDict(extra="forbid")

    z: List[List[float]]

    @field_validator("z")
    @classmethod
    def _four(cls, value):
        return _check_pairs(value, 4, "z")

    def to_avector(self) -> AVector:
        return AVector(pairs_to_complex(self.z))


def _load(path: str, model):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = fh.read()
    except FileNotFoundError:
        raise
    except OSError as e:
        raise StateFileError(f"Cannot read {path}: {e}", path=path, diagnostics=[str(e)])

    try:
        data = json.loads(raw)
    except json.JSONDecodeError as e:
        raise StateFileError(
            f"Malformed JSON in {path}",
            path=path,
            diagnostics=[f"line {e.lineno} column {e.colno}: {e.msg}"],
        )

    try:
        return model.model_validate(data)
    except ValidationError as e:
        diagnostics = [f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in e.errors()]
        raise StateFileError(f"Invalid state file {path}", path=path, diagnostics=diagnostics)


def load_state(path: str) -> QuartState:
    return _load(path, StateFile).to_state()


def load_avector(path: str) -> AVector:
    return _load(path, AVectorFile).to_avector()


def state_to_json(psi: QuartState) -> dict:
    return {"amplitudes": [complex_to_pair(a) for a in psi.amp]}


def avector_to_json(z: AVector) -> dict:
    return {"z": [complex_to_pair(c) for c in z.z]}


def write_json(payload, path: str = None) -> str:
    """Sorted-key JSON; written to path when given, returned either way."""
    text = json.dumps(payload, sort_keys=True, indent=2)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        logger.info(f"Wrote {path}")
    return text
