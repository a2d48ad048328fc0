"""Codes, words, coordinate sets, distances, restrictions, and the code-file formats.

A word is a plain tuple of alphabet indices in ``[0, q)``; a coordinate set is a
strictly increasing tuple of positions in ``[0, n)``.  Codes store explicit word
lists (the constructions here are combinatorial over unstructured alphabets, so
there is no generator-matrix representation).  Coordinates are 0-based
throughout.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import InputError, ParseError

Word = tuple  # tuple[int, ...]
CoordSet = tuple  # strictly increasing tuple[int, ...]


def as_word(symbols: Iterable[int]) -> Word:
    return tuple(int(s) for s in symbols)


def as_coordset(indices: Iterable[int], n: Optional[int] = None) -> CoordSet:
    """Normalize ``indices`` to a sorted tuple, rejecting duplicates and out-of-range values."""
    idx = sorted(int(i) for i in indices)
    for a, b in zip(idx, idx[1:]):
        if a == b:
            raise InputError(f"duplicate coordinate {a} in coordinate set")
    if idx and idx[0] < 0:
        raise InputError(f"negative coordinate {idx[0]}")
    if n is not None and idx and idx[-1] >= n:
        raise InputError(f"coordinate {idx[-1]} out of range for length {n}")
    return tuple(idx)


def hamming_distance(a: Word, b: Word) -> int:
    """Number of coordinates where ``a`` and ``b`` differ."""
    if len(a) != len(b):
        raise InputError(f"length mismatch: {len(a)} vs {len(b)}")
    return sum(1 for x, y in zip(a, b) if x != y)


def restrict(w: Word, s: CoordSet) -> Word:
    """The subword of ``w`` read off at the positions in ``s`` (ascending)."""
    if s and s[-1] >= len(w):
        raise InputError(f"coordinate {s[-1]} out of range for word of length {len(w)}")
    return tuple(w[i] for i in s)


def agreement_set(a: Word, b: Word) -> CoordSet:
    """Coordinates where ``a`` and ``b`` coincide; complements the Hamming distance."""
    if len(a) != len(b):
        raise InputError(f"length mismatch: {len(a)} vs {len(b)}")
    return tuple(i for i, (x, y) in enumerate(zip(a, b)) if x == y)


@dataclass(frozen=True)
class Code:
    """A set of distinct equal-length words over the alphabet ``{0, ..., q-1}``.

    Immutable after construction; safe to share across concurrent readers.
    """

    q: int
    n: int
    words: tuple  # tuple[Word, ...]

    def __post_init__(self):
        if self.q < 2:
            raise InputError(f"alphabet size must be >= 2, got {self.q}")
        if self.n < 1:
            raise InputError(f"block length must be >= 1, got {self.n}")
        words = tuple(as_word(w) for w in self.words)
        object.__setattr__(self, "words", words)
        seen = set()
        for i, w in enumerate(words):
            if len(w) != self.n:
                raise InputError(f"word {i} has length {len(w)}, expected {self.n}")
            if w in seen:
                raise InputError(f"duplicate word at index {i}")
            seen.add(w)
            for s in w:
                if not 0 <= s < self.q:
                    raise InputError(f"word {i} has symbol {s} outside [0, {self.q})")

    def __len__(self) -> int:
        return len(self.words)

    def __getitem__(self, i: int) -> Word:
        return self.words[i]

    def as_array(self) -> np.ndarray:
        return np.array(self.words, dtype=np.int32).reshape(len(self.words), self.n)


def distance_matrix(code: Code) -> np.ndarray:
    """All pairwise Hamming distances, as an ``MxM`` integer matrix."""
    arr = code.as_array()
    m = len(code)
    out = np.zeros((m, m), dtype=np.int32)
    # chunk rows to keep the boolean intermediate small for larger codes
    step = max(1, (1 << 24) // max(1, m * code.n))
    for lo in range(0, m, step):
        hi = min(m, lo + step)
        out[lo:hi] = (arr[lo:hi, None, :] != arr[None, :, :]).sum(axis=2)
    return out


def min_distance(code: Code) -> Optional[int]:
    """Exact minimum distance over all distinct pairs, or None when ``|C| < 2``."""
    if len(code) < 2:
        return None
    d = distance_matrix(code)
    m = len(code)
    return int(d[np.triu_indices(m, k=1)].min())


@dataclass(frozen=True)
class CodeStats:
    size: int
    dimension_k: float
    rate_R: float
    min_distance: Optional[int]
    mds: bool


def code_stats(code: Code) -> CodeStats:
    """Size, dimension ``k = log_q |C|``, rate ``k/n``, exact min distance, MDS flag.

    The MDS flag requires an integral dimension (``q^k == |C|`` exactly) together
    with ``d = n - k + 1``.
    """
    size = len(code)
    if size < 1:
        raise InputError("code_stats requires a nonempty code")
    k = math.log(size, code.q) if size > 1 else 0.0
    d = min_distance(code)
    k_int = round(k)
    integral = code.q ** k_int == size
    mds = bool(integral and d is not None and d == code.n - k_int + 1)
    return CodeStats(size=size, dimension_k=k, rate_R=k / code.n, min_distance=d, mds=mds)


# ---------------------------------------------------------------------------
# Code-file formats.
#
# Text (canonical for interchange): line 1 is "q n M", then M rows of n
# whitespace-separated integers in [0, q).  Lines starting with '#' are
# comments.  The structured variant is a JSON document with the same fields
# plus optional metadata (seed, construction name).
# ---------------------------------------------------------------------------


def save_code(code: Code, path, metadata: Optional[dict] = None) -> None:
    """Write ``code`` to ``path``; a ``.json`` suffix selects the structured variant."""
    path = Path(path)
    if path.suffix == ".json":
        doc = {"q": code.q, "n": code.n, "M": len(code),
               "words": [list(w) for w in code.words]}
        if metadata:
            doc["metadata"] = metadata
        path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
        return
    lines = []
    if metadata:
        for key in sorted(metadata):
            lines.append(f"# {key}: {metadata[key]}")
    lines.append(f"{code.q} {code.n} {len(code)}")
    for w in code.words:
        lines.append(" ".join(str(s) for s in w))
    path.write_text("\n".join(lines) + "\n")


def load_code(path):
    """Read a code file (text or structured); returns ``(Code, metadata_dict)``."""
    path = Path(path)
    text = path.read_text()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return _load_code_json(text, path)
    return _load_code_text(text, path)


def _load_code_json(text: str, path: Path):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}: invalid JSON: {e}") from e
    for field in ("q", "n", "words"):
        if field not in doc:
            raise ParseError(f"{path}: missing field {field!r}")
    words = [tuple(w) for w in doc["words"]]
    if "M" in doc and doc["M"] != len(words):
        raise ParseError(f"{path}: M={doc['M']} but {len(words)} words present")
    try:
        code = Code(q=int(doc["q"]), n=int(doc["n"]), words=tuple(words))
    except InputError as e:
        raise ParseError(f"{path}: {e}") from e
    return code, doc.get("metadata", {})


def _load_code_text(text: str, path: Path):
    metadata = {}
    rows = []
    header = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if ":" in body:
                key, _, val = body.partition(":")
                metadata[key.strip()] = val.strip()
            continue
        parts = line.split()
        try:
            values = [int(p) for p in parts]
        except ValueError:
            raise ParseError(f"{path}:{lineno}: non-integer token in {line!r}")
        if header is None:
            if len(values) != 3:
                raise ParseError(f"{path}:{lineno}: header must be 'q n M'")
            header = values
            continue
        rows.append((lineno, values))
    if header is None:
        raise ParseError(f"{path}: empty file, expected 'q n M' header")
    q, n, m = header
    if len(rows) != m:
        raise ParseError(f"{path}: header declares {m} words but {len(rows)} rows found")
    seen = {}
    words = []
    for lineno, values in rows:
        if len(values) != n:
            raise ParseError(f"{path}:{lineno}: expected {n} symbols, got {len(values)}")
        for s in values:
            if not 0 <= s < q:
                raise ParseError(f"{path}:{lineno}: symbol {s} outside [0, {q})")
        w = tuple(values)
        if w in seen:
            raise ParseError(f"{path}:{lineno}: duplicate of word on line {seen[w]}")
        seen[w] = lineno
        words.append(w)
    return Code(q=q, n=n, words=tuple(words)), metadata
