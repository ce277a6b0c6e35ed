"""Stable Marriage instances with complete, strict preference lists."""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, List, Sequence, Union

import numpy as np

_SEED_MASK = (1 << 64) - 1
_MEN, _WOMEN = 0, 1


class InstanceFormatError(ValueError):
    """Raised when an instance file cannot be parsed."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def _rank_table(prefs: np.ndarray) -> np.ndarray:
    n = prefs.shape[0]
    rank = np.full((n, n), -1, dtype=np.int64)
    rows = np.repeat(np.arange(n), n)
    cols = prefs.ravel()
    ok = (cols >= 0) & (cols < n)
    rank[rows[ok], cols[ok]] = np.tile(np.arange(n), n)[ok]
    return rank


@dataclass(frozen=True, eq=False)
class Instance:
    """n men and n women, each ranking every member of the other side.

    ``men_prefs[m]`` lists women from most to least preferred and
    ``men_rank[m, w]`` is the position of ``w`` in that list (0 = best).
    The women's tables mirror this. Arrays are read-only.
    """

    n: int
    men_prefs: np.ndarray
    women_prefs: np.ndarray
    men_rank: np.ndarray
    women_rank: np.ndarray

    @classmethod
    def from_prefs(
        cls,
        men_prefs: Sequence[Sequence[int]],
        women_prefs: Sequence[Sequence[int]],
    ) -> "Instance":
        men = np.array(men_prefs, dtype=np.int64)
        women = np.array(women_prefs, dtype=np.int64)
        if men.ndim != 2 or men.shape[0] != men.shape[1] or men.shape != women.shape:
            raise ValueError("preference tables must both be n x n")
        return cls(
            n=int(men.shape[0]),
            men_prefs=_readonly(men),
            women_prefs=_readonly(women),
            men_rank=_readonly(_rank_table(men)),
            women_rank=_readonly(_rank_table(women)),
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Instance):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.men_prefs, other.men_prefs)
            and np.array_equal(self.women_prefs, other.women_prefs)
            and np.array_equal(self.men_rank, other.men_rank)
            and np.array_equal(self.women_rank, other.women_rank)
        )

    __hash__ = None  # type: ignore[assignment]

    def swapped(self) -> "Instance":
        """The same instance with the roles of men and women exchanged."""
        return Instance(self.n, self.women_prefs, self.men_prefs, self.women_rank, self.men_rank)


def validate(inst: Instance) -> List[str]:
    """Return a list of invariant violations; empty means the instance is valid."""
    problems: List[str] = []
    n = inst.n
    if n < 1:
        return [f"n must be positive, got {n}"]
    expected = np.arange(n)
    for side, prefs, rank in (
        ("man", inst.men_prefs, inst.men_rank),
        ("woman", inst.women_prefs, inst.women_rank),
    ):
        if prefs.shape != (n, n) or rank.shape != (n, n):
            problems.append(f"{side} tables have shape {prefs.shape}/{rank.shape}, expected {(n, n)}")
            continue
        for i in range(n):
            row = prefs[i]
            if not np.array_equal(np.sort(row), expected):
                problems.append(f"{side} {i}: non-permutation row {row.tolist()}")
                continue
            if not np.array_equal(row[rank[i]], expected):
                problems.append(f"{side} {i}: rank table is not the inverse of the preference row")
    return problems


def generate_instance(n: int, seed: int) -> Instance:
    """Uniform random instance; identical ``(n, seed)`` gives an identical instance.

    Each row is an independent permutation drawn from its own PCG64 stream
    keyed on ``(seed, side, row)``.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    seed = int(seed) & _SEED_MASK
    tables = []
    for side in (_MEN, _WOMEN):
        rows = []
        for i in range(n):
            rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, side, i])))
            rows.append(rng.permutation(n))
        tables.append(rows)
    return Instance.from_prefs(tables[0], tables[1])


def format_instance(inst: Instance) -> str:
    lines = [str(inst.n)]
    lines += [" ".join(map(str, row)) for row in inst.men_prefs.tolist()]
    lines.append("")
    lines += [" ".join(map(str, row)) for row in inst.women_prefs.tolist()]
    return "\n".join(lines) + "\n"


def _parse_row(line: str, lineno: int, n: int) -> List[int]:
    try:
        row = [int(tok) for tok in line.split()]
    except ValueError:
        raise InstanceFormatError(f"non-integer entry in {line.strip()!r}", lineno) from None
    if len(row) != n:
        raise InstanceFormatError(f"expected {n} entries, found {len(row)}", lineno)
    for x in row:
        if not 0 <= x < n:
            raise InstanceFormatError(f"index {x} out of range 0..{n - 1}", lineno)
    if len(set(row)) != n:
        raise InstanceFormatError("non-permutation row", lineno)
    return row


def parse_instance(text: Union[str, Iterable[str]]) -> Instance:
    """Parse the plain-text instance format.

    Line 1 holds ``n``, then ``n`` men's rows, a blank line, and ``n``
    women's rows. Errors carry the 1-based line number.
    """
    lines = text.splitlines() if isinstance(text, str) else [ln.rstrip("\n") for ln in text]
    lines = [ln.rstrip() for ln in lines]
    while lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise InstanceFormatError("empty input", 1)
    try:
        n = int(lines[0])
    except ValueError:
        raise InstanceFormatError(f"malformed header {lines[0]!r}", 1) from None
    if n < 1:
        raise InstanceFormatError(f"malformed header: n must be positive, got {n}", 1)
    if len(lines) != 2 * n + 2:
        raise InstanceFormatError(
            f"wrong row count: expected {2 * n + 2} lines, found {len(lines)}",
            len(lines) + 1 if len(lines) < 2 * n + 2 else 2 * n + 3,
        )
    men = [_parse_row(lines[1 + i], 2 + i, n) for i in range(n)]
    if lines[n + 1] != "":
        raise InstanceFormatError("expected blank separator line", n + 2)
    women = [_parse_row(lines[n + 2 + i], n + 3 + i, n) for i in range(n)]
    return Instance.from_prefs(men, women)


def load_instance(path: Union[str, Path]) -> Instance:
    return parse_instance(Path(path).read_text(encoding="utf-8"))


def save_instance(inst: Instance, path: Union[str, Path]) -> None:
    Path(path).write_text(format_instance(inst), encoding="utf-8")
