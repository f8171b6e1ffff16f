# src/cli/state_io.py
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np

from src.separability.werner_ensemble import ProductEnsemble
from src.states.quantum_states import DimSpec, MixedState, PureState
from src.utils.errors import SeparabilityError, StateFileError

logger = logging.getLogger(__name__)

KINDS = ("pure", "mixed", "operator")


@dataclass
class StateFile:
    """
    On-disk state: dims, kind, complex data as [re, im] pairs and free-form metadata
    """
    dims: List[int]
    kind: str
    data: np.ndarray
    metadata: Dict[str, Any] = field(default_factory=dict)

    def to_state(self) -> Union[PureState, MixedState]:
        """Validated PureState or MixedState; operator files have no state form"""
        try:
            if self.kind == "pure":
                return PureState(DimSpec(tuple(self.dims)), self.data)
            if self.kind == "mixed":
                return MixedState(DimSpec(tuple(self.dims)), self.data)
        except SeparabilityError as exc:
            raise StateFileError(f"invalid {self.kind} state: {exc}") from exc
        raise StateFileError("operator files hold a plain matrix, not a state")

    def to_operator(self) -> np.ndarray:
        if self.kind == "pure":
            raise StateFileError("expected a matrix file, got a pure state")
        return self.data


class StateFileHandler:
    """
    Reads and writes StateFile JSON documents and product-ensemble records
    """

    @staticmethod
    def encode_complex(values: np.ndarray) -> list:
        """Nested lists with every complex entry as [re, im]"""
        values = np.asarray(values, dtype=complex)
        pairs = np.stack([values.real, values.imag], axis=-1)
        return pairs.tolist()

    @staticmethod
    def decode_complex(data, shape) -> np.ndarray:
        """
        Parse [re, im] pairs into a complex array of the given shape

        Matrices may be given as nested rows or as a flat row-major list.
        """
        try:
            pairs = np.asarray(data, dtype=float)
        except (TypeError, ValueError) as exc:
            raise StateFileError(f"data is not a numeric array of [re, im] pairs: {exc}") from exc
        if pairs.ndim < 2 or pairs.shape[-1] != 2:
            raise StateFileError(f"data must consist of [re, im] pairs, got array of shape {pairs.shape}")
        values = pairs[..., 0] + 1j * pairs[..., 1]
        if values.size != int(np.prod(shape)):
            raise StateFileError(f"data holds {values.size} entries, expected {int(np.prod(shape))}")
        if not np.all(np.isfinite(values)):
            raise StateFileError("data contains NaN or Inf")
        return values.reshape(shape)

    @staticmethod
    def parse(document: Dict[str, Any]) -> StateFile:
        """Validate a decoded JSON document"""
        if not isinstance(document, dict):
            raise StateFileError("state file must be a JSON object")
        missing = [key for key in ("dims", "kind", "data") if key not in document]
        if missing:
            raise StateFileError(f"state file is missing {', '.join(missing)}")

        dims = document["dims"]
        if not isinstance(dims, list) or not all(isinstance(d, int) and d >= 1 for d in dims):
            raise StateFileError(f"dims must be a list of positive integers, got {dims}")
        kind = document["kind"]
        if kind not in KINDS:
            raise StateFileError(f"kind must be one of {KINDS}, got {kind!r}")
        metadata = document.get("metadata") or {}
        if not isinstance(metadata, dict):
            raise StateFileError("metadata must be a JSON object")

        total = int(np.prod(dims)) if dims else 0
        shape = (total,) if kind == "pure" else (total, total)
        data = StateFileHandler.decode_complex(document["data"], shape)
        return StateFile(dims=list(dims), kind=kind, data=data, metadata=metadata)

    @staticmethod
    def read(path: Union[str, Path]) -> StateFile:
        """
        Load a StateFile; OSError propagates for I/O failures, StateFileError for bad content
        """
        text = Path(path).read_text(encoding="utf-8")
        try:
            document = json.loads(text)
        except json.JSONDecodeError as exc:
            raise StateFileError(f"{path}: not valid JSON ({exc})") from exc
        state_file = StateFileHandler.parse(document)
        logger.info("read %s state on dims %s from %s", state_file.kind, state_file.dims, path)
        return state_file

    @staticmethod
    def read_state(path: Union[str, Path]) -> Union[PureState, MixedState]:
        return StateFileHandler.read(path).to_state()

    @staticmethod
    def read_operator(path: Union[str, Path]) -> np.ndarray:
        return StateFileHandler.read(path).to_operator()

    @staticmethod
    def to_document(state: Union[PureState, MixedState, np.ndarray], dims: Optional[Sequence[int]] = None,
                    metadata: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
        if isinstance(state, PureState):
            dims, kind, data = list(state.dims.dims), "pure", state.amplitudes
        elif isinstance(state, MixedState):
            dims, kind, data = list(state.dims.dims), "mixed", state.matrix
        else:
            if dims is None:
                raise StateFileError("dims are required when writing a raw operator")
            dims, kind, data = [int(d) for d in dims], "operator", np.asarray(state, dtype=complex)
        return {
            "dims": dims,
            "kind": kind,
            "data": StateFileHandler.encode_complex(data),
            "metadata": dict(metadata or {})
        }

    @staticmethod
    def write(path: Union[str, Path], state, dims=None, metadata=None):
        document = StateFileHandler.to_document(state, dims=dims, metadata=metadata)
        Path(path).write_text(json.dumps(document, indent=2) + "\n", encoding="utf-8")
        logger.info("wrote %s state to %s", document["kind"], path)

    @staticmethod
    def write_ensemble(path: Union[str, Path], ensemble: ProductEnsemble,
                       metadata: Optional[Dict[str, Any]] = None):
        """Write every product term as {weight, a, b} with a, b encoded as [re, im] pairs"""
        document = {
            "dims": [int(d) for d in ensemble.dims],
            "kind": "product_ensemble",
            "terms": [
                {
                    "weight": float(term.weight),
                    "a": StateFileHandler.encode_complex(term.a),
                    "b": StateFileHandler.encode_complex(term.b)
                }
                for term in ensemble
            ],
            "metadata": dict(metadata or {})
        }
        Path(path).write_text(json.dumps(document, indent=2) + "\n", encoding="utf-8")
        logger.info("wrote %d product terms to %s", len(ensemble), path)
