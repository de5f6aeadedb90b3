import hashlib
import logging
from pathlib import Path
from typing import Any, Dict, Iterable, List, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from ..analysis.sequence_analyzer import QarySequence, anf, pmepr_profile
from ..algebra.cyclotomic import CyclotomicInt

logger = logging.getLogger(__name__)


def to_serializable(obj: Any) -> Any:
    """Recursively convert numpy values, tuples and ring elements into JSON types."""
    if isinstance(obj, dict):
        return {str(k): to_serializable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_serializable(item) for item in obj]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, CyclotomicInt):
        return {'q': obj.q, 'coeffs': list(obj.coeffs), 'text': str(obj)}
    if isinstance(obj, Path):
        return str(obj)
    return obj


def file_digest(file_path: Union[str, Path]) -> str:
    sha = hashlib.sha256()
    with open(file_path, 'rb') as f:
        for chunk in iter(lambda: f.read(65536), b''):
            sha.update(chunk)
    return sha.hexdigest()


def input_digests(paths: Iterable[Union[str, Path]]) -> Dict[str, str]:
    return {str(path): file_digest(path) for path in paths}


def pmepr_table(families: Sequence[Tuple[str, List[QarySequence]]], oversample: int = 64) -> pd.DataFrame:
    """
    One row per sequence: family label, index, PMEPR and the grid point of the peak.

    Args:
        families: (label, sequences) pairs
        oversample: Grid oversampling factor K

    Returns:
        DataFrame with columns set, sequence, L, pmepr, argmax_index, argmax_angle
    """
    rows = []
    for label, sequences in families:
        for index, seq in enumerate(sequences):
            value, peak = pmepr_profile(seq, oversample)
            rows.append({
                'set': label,
                'sequence': index,
                'L': seq.L,
                'pmepr': value,
                'argmax_index': peak,
                'argmax_angle': 2 * np.pi * peak / (oversample * seq.L) if seq.L > 1 else 0.0,
            })
    return pd.DataFrame(rows, columns=['set', 'sequence', 'L', 'pmepr', 'argmax_index', 'argmax_angle'])


def degree_table(families: Sequence[Tuple[str, List[QarySequence]]], reverse: bool = False) -> pd.DataFrame:
    """Algebraic degree of every power-of-2-length sequence, with its ANF text."""
    rows = []
    for label, sequences in families:
        for index, seq in enumerate(sequences):
            if seq.L & (seq.L - 1):
                continue
            f = anf(seq, reverse=reverse)
            rows.append({'set': label, 'sequence': index, 'degree': f.degree, 'anf': f.to_text()})
    return pd.DataFrame(rows, columns=['set', 'sequence', 'degree', 'anf'])


def write_table(table: pd.DataFrame, file_path: Union[str, Path]) -> Path:
    path = Path(file_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    table.to_csv(path, index=False, float_format='%.12g')
    logger.info("wrote %d rows to %s", len(table), path)
    return path


def format_table(table: pd.DataFrame) -> str:
    if table.empty:
        return ''
    return table.to_string(index=False, float_format=lambda x: f'{x:.9f}')
