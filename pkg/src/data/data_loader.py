import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np

from ..construction.paraunitary import ConstructionSpec, UnitCoeffPolyMatrix
from ..errors import DataFormatError
from ..hadamard.butson import ButsonMatrix, verify_butson
from ..analysis.sequence_analyzer import QarySequence, sequences_from_rows
from ..utils.reporting import to_serializable

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


class GolayDataLoader:
    """
    Reads and writes the JSON files every command works with.

    Hadamard matrix:  {"q": int, "N": int, "exps": [[int, ...], ...]}
    Construction spec: {"q", "N", "n", "perm": [...], "hadamards": [matrix, ...]}
    Set file:          {"label", "q", "N", "L", "rows": [[exp, ...], ...]}
    Sequence text:     "q=<q> L=<L>" then one line of exponents (*.txt, a singleton set)
    Construction output: {"q", "N", "L", "matrix", "sets": [set file, ...], "source"}
    """

    def __init__(self, data_dir: PathLike = "data/input"):
        """
        Initialize data loader.

        Args:
            data_dir: Directory holding the shipped fixtures
        """
        self.data_dir = Path(data_dir)

    def fixture_path(self, name: str) -> Path:
        return self.data_dir / name

    def read_json(self, file_path: PathLike) -> Any:
        try:
            with open(file_path, 'r') as f:
                return json.load(f)
        except json.JSONDecodeError as e:
            raise DataFormatError(f"{file_path} is not valid JSON: {e}")

    def write_json(self, data: Any, file_path: PathLike) -> Path:
        """Write data with a fixed layout so identical inputs give identical files."""
        path = Path(file_path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, 'w') as f:
            json.dump(to_serializable(data), f, indent=2)
            f.write('\n')
        logger.info("wrote %s", path)
        return path

    @staticmethod
    def _require(data: Dict[str, Any], keys: Tuple[str, ...], what: str):
        if not isinstance(data, dict):
            raise DataFormatError(f"{what} must be a JSON object")
        missing = [key for key in keys if key not in data]
        if missing:
            raise DataFormatError(f"{what} is missing {', '.join(missing)}")

    @staticmethod
    def _integer(data: Dict[str, Any], key: str, what: str) -> int:
        value = data[key]
        if isinstance(value, bool) or not isinstance(value, int):
            raise DataFormatError(f"{what} field '{key}' must be an integer, got {value!r}")
        return value

    def parse_hadamard(self, data: Dict[str, Any]) -> ButsonMatrix:
        self._require(data, ('q', 'exps'), "Hadamard matrix")
        H = verify_butson(data['exps'], self._integer(data, 'q', "Hadamard matrix"))
        if 'N' in data and data['N'] != H.size:
            raise DataFormatError(f"matrix declares N={data['N']} but has order {H.size}")
        return H

    def load_hadamard(self, file_path: PathLike) -> ButsonMatrix:
        """
        Load and validate a Butson matrix.

        Args:
            file_path: Matrix JSON file

        Returns:
            Validated ButsonMatrix
        """
        return self.parse_hadamard(self.read_json(file_path))

    def save_hadamard(self, H: ButsonMatrix, file_path: PathLike) -> Path:
        return self.write_json(H.to_dict(), file_path)

    def parse_spec(self, data: Dict[str, Any]) -> ConstructionSpec:
        self._require(data, ('q', 'N', 'n', 'perm', 'hadamards'), "construction spec")
        q, N, n = (self._integer(data, key, "construction spec") for key in ('q', 'N', 'n'))
        perm = data['perm']
        if not isinstance(perm, list) or any(isinstance(p, bool) or not isinstance(p, int) for p in perm):
            raise DataFormatError(f"'perm' must be a list of integers, got {perm!r}")
        if not isinstance(data['hadamards'], list):
            raise DataFormatError("'hadamards' must be a list of matrices")
        matrices = tuple(self.parse_hadamard(entry) for entry in data['hadamards'])
        return ConstructionSpec(q=q, N=N, n=n, perm=tuple(perm), hadamards=matrices)

    def load_spec(self, file_path: PathLike) -> ConstructionSpec:
        return self.parse_spec(self.read_json(file_path))

    def construction_output(self, spec: ConstructionSpec, M: UnitCoeffPolyMatrix) -> Dict[str, Any]:
        """Container written by the construct command: the matrix, its 2N sets and the input echo."""
        sets = []
        for i in range(M.N):
            sets.append(self._set_record(f"row {i}", M.q, M.row(i).tolist()))
        for j in range(M.N):
            sets.append(self._set_record(f"column {j}", M.q, M.column(j).tolist()))
        return {
            'q': M.q,
            'N': M.N,
            'L': M.L,
            'matrix': M.coeffs.tolist(),
            'sets': sets,
            'source': spec.to_dict(),
        }

    @staticmethod
    def _set_record(label: str, q: int, rows: List[List[int]]) -> Dict[str, Any]:
        return {'label': label, 'q': q, 'N': len(rows), 'L': len(rows[0]), 'rows': rows}

    def parse_sets(self, data: Dict[str, Any]) -> List[Tuple[str, List[QarySequence]]]:
        if isinstance(data, dict) and 'sets' in data:
            records = data['sets']
            if not isinstance(records, list) or not records:
                raise DataFormatError("'sets' must be a non-empty list")
        else:
            records = [data]

        families = []
        for index, record in enumerate(records):
            self._require(record, ('q', 'rows'), "set file")
            q = self._integer(record, 'q', "set file")
            rows = record['rows']
            if not isinstance(rows, list) or not rows or not all(isinstance(row, list) for row in rows):
                raise DataFormatError("'rows' must be a non-empty list of exponent lists")
            for key in ('N', 'L'):
                if key in record:
                    self._integer(record, key, "set file")
            sequences = sequences_from_rows(rows, q)
            if record.get('N', len(sequences)) != len(sequences):
                raise DataFormatError(f"set declares N={record['N']} but holds {len(sequences)} rows")
            if 'L' in record and any(s.L != record['L'] for s in sequences):
                raise DataFormatError(f"set declares L={record['L']} but rows differ in length")
            families.append((record.get('label', f"set {index}"), sequences))
        return families

    def load_sets(self, file_path: PathLike) -> List[Tuple[str, List[QarySequence]]]:
        """
        Load one set file, every set of a construction output, or a single
        sequence in the plain text format (files ending in .txt).

        Returns:
            (label, sequences) pairs in file order; a text file gives one
            singleton family labelled with the file stem
        """
        path = Path(file_path)
        if path.suffix == '.txt':
            return [(path.stem, [QarySequence.from_text(path.read_text())])]
        return self.parse_sets(self.read_json(path))

    def load_matrix(self, file_path: PathLike) -> Optional[UnitCoeffPolyMatrix]:
        """The full polynomial matrix of a construction output, or None for plain set files."""
        if Path(file_path).suffix == '.txt':
            return None
        data = self.read_json(file_path)
        if not (isinstance(data, dict) and 'matrix' in data):
            return None
        q = self._integer(data, 'q', "construction output")
        try:
            coeffs = np.asarray(data['matrix'])
        except ValueError as e:
            raise DataFormatError(f"'matrix' is not a rectangular array: {e}")
        if not np.issubdtype(coeffs.dtype, np.integer):
            raise DataFormatError(f"'matrix' must hold integer exponents, got dtype {coeffs.dtype}")
        return UnitCoeffPolyMatrix(q=q, coeffs=coeffs)

    def load_anf_listing(self, file_path: Optional[PathLike] = None) -> Dict[str, Any]:
        data = self.read_json(file_path or self.fixture_path("example7_anf.json"))
        self._require(data, ('q', 'v', 'functions'), "ANF listing")
        return data
