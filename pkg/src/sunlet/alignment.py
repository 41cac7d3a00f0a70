"""Aligned sequences, FASTA I/O and the purine/pyrimidine projection.

DNA is stored with the group coding A=0 (0,0), G=1 (0,1), C=2 (1,0),
T=3 (1,1) of Z/2 x Z/2. The high bit is the purine/pyrimidine bit, so
projecting to binary is a right shift.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = [
    "AlignmentError",
    "EmptyAlignmentError",
    "RaggedAlignmentError",
    "DuplicateLabelError",
    "UnknownCharacterError",
    "Alignment",
    "project_to_binary",
    "read_fasta",
    "format_fasta",
    "write_fasta",
]

DNA_CODE = {"A": 0, "G": 1, "C": 2, "T": 3}
DNA_CHARS = np.frombuffer(b"AGCT", dtype=np.uint8)
BINARY_CODE = {"0": 0, "1": 1}
BINARY_CHARS = np.frombuffer(b"01", dtype=np.uint8)
FASTA_WIDTH = 80


class AlignmentError(ValueError):
    """Malformed alignment data."""


class EmptyAlignmentError(AlignmentError):
    pass


class RaggedAlignmentError(AlignmentError):
    pass


class DuplicateLabelError(AlignmentError):
    pass


class UnknownCharacterError(AlignmentError):
    pass


def _lookup(alphabet: str):
    table = np.full(256, 255, dtype=np.uint8)
    codes = DNA_CODE if alphabet == "dna" else BINARY_CODE
    for ch, code in codes.items():
        table[ord(ch)] = code
        table[ord(ch.lower())] = code
    return table


def _encode(row: str, alphabet: str, label: str) -> np.ndarray:
    raw = np.frombuffer(row.encode("latin-1", errors="replace"), dtype=np.uint8)
    codes = _lookup(alphabet)[raw]
    bad = np.flatnonzero(codes == 255)
    if bad.size:
        pos = int(bad[0])
        raise UnknownCharacterError(f"unknown character {row[pos]!r} in {label!r} at position {pos + 1}")
    return codes


@dataclass(frozen=True, eq=False)
class Alignment:
    """n equal-length sequences over DNA (``"dna"``) or ``"binary"``.

    ``codes`` is an (n, L) uint8 array; use :meth:`from_strings` to build one
    from text.
    """

    labels: tuple[str, ...]
    codes: np.ndarray
    alphabet: str

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        if self.alphabet not in ("dna", "binary"):
            raise ValueError(f"unknown alphabet {self.alphabet!r}")
        codes = np.asarray(self.codes, dtype=np.uint8)
        if codes.ndim != 2 or codes.shape[0] != len(self.labels):
            raise ValueError("codes must be an (n, L) array with one row per label")
        if len(set(self.labels)) != len(self.labels):
            raise DuplicateLabelError("duplicate sequence labels")
        limit = 4 if self.alphabet == "dna" else 2
        if codes.size and codes.max() >= limit:
            raise ValueError(f"codes out of range for alphabet {self.alphabet!r}")
        codes.setflags(write=False)
        object.__setattr__(self, "codes", codes)

    @classmethod
    def from_strings(cls, labels: Sequence[str], rows: Sequence[str], alphabet: str | None = None) -> "Alignment":
        labels = list(labels)
        rows = [r.strip() for r in rows]
        if not rows:
            raise EmptyAlignmentError("alignment has no sequences")
        if len(labels) != len(rows):
            raise ValueError("one label per row required")
        if len({len(r) for r in rows}) != 1:
            raise RaggedAlignmentError("unequal sequence lengths")
        if len(set(labels)) != len(labels):
            dup = next(lab for lab in labels if labels.count(lab) > 1)
            raise DuplicateLabelError(f"duplicate label {dup!r}")
        if alphabet is None:
            alphabet = "binary" if all(set(r) <= {"0", "1"} for r in rows) else "dna"
        codes = np.vstack([_encode(r, alphabet, lab) for lab, r in zip(labels, rows)])
        return cls(tuple(labels), codes, alphabet)

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def length(self) -> int:
        return self.codes.shape[1]

    @property
    def rows(self) -> list[str]:
        chars = DNA_CHARS if self.alphabet == "dna" else BINARY_CHARS
        return [chars[r].tobytes().decode("ascii") for r in self.codes]

    def reorder(self, order: Sequence[int]) -> "Alignment":
        """Rows taken in ``order`` (0-based indices into the current rows)."""
        return Alignment(tuple(self.labels[i] for i in order), self.codes[list(order)], self.alphabet)

    def __eq__(self, other):
        if not isinstance(other, Alignment):
            return NotImplemented
        return (
            self.labels == other.labels
            and self.alphabet == other.alphabet
            and np.array_equal(self.codes, other.codes)
        )


def project_to_binary(aln: Alignment | str) -> Alignment | str:
    """Purines (A, G) to 0 and pyrimidines (C, T) to 1, site by site.

    Accepts an :class:`Alignment` or a single DNA string.
    """
    if isinstance(aln, str):
        codes = _encode(aln, "dna", "sequence")
        return BINARY_CHARS[codes >> 1].tobytes().decode("ascii")
    if aln.alphabet == "binary":
        return aln
    return Alignment(aln.labels, aln.codes >> 1, "binary")


def read_fasta(path: str | os.PathLike, alphabet: str | None = None) -> Alignment:
    labels: list[str] = []
    chunks: list[list[str]] = []
    with open(path, encoding="ascii", errors="replace") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            if line.startswith(">"):
                labels.append(line[1:].strip())
                chunks.append([])
            elif not labels:
                raise AlignmentError(f"{path}: sequence data before the first header (line {lineno})")
            else:
                chunks[-1].append(line)
    if not labels:
        raise EmptyAlignmentError(f"{path}: empty file")
    rows = ["".join(c).upper() for c in chunks]
    if any(not r for r in rows):
        raise EmptyAlignmentError(f"{path}: record with no sequence")
    return Alignment.from_strings(labels, rows, alphabet)


def format_fasta(aln: Alignment, width: int = FASTA_WIDTH) -> str:
    parts = []
    for label, row in zip(aln.labels, aln.rows):
        parts.append(f">{label}\n")
        parts.extend(row[start:start + width] + "\n" for start in range(0, len(row), width))
    return "".join(parts)


def write_fasta(aln: Alignment, path: str | os.PathLike, width: int = FASTA_WIDTH) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(format_fasta(aln, width))
