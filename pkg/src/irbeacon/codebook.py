"""Beacon identifiers that stay unambiguous under endless cyclic repetition.

A beacon transmits its 12-bit identifier in a loop with no synchronization
symbol, so the receiver only ever sees an arbitrary rotation of the code.
Two identifiers are therefore interchangeable ("ambiguous") whenever one is
a cyclic shift of the other, and an identifier collides with itself if it
has a period shorter than its length.  The usable identifier set is the set
of aperiodic strings, one representative per cyclic equivalence class.
"""

from __future__ import annotations

from dataclasses import dataclass, field

CODE_LENGTH = 12

CODEBOOK_HEADER = "# beacon-codebook v1"


def _check_bits(bits: str, length: int = CODE_LENGTH) -> None:
    if len(bits) != length or any(c not in "01" for c in bits):
        raise ValueError(f"expected a {length}-character binary string, got {bits!r}")


def rotations(bits: str) -> list[str]:
    """All cyclic shifts of ``bits``, starting with the unshifted string."""
    return [bits[i:] + bits[:i] for i in range(len(bits))]


def canonical_rotation(bits: str) -> str:
    """Lexicographically smallest cyclic shift."""
    return min(rotations(bits))


def is_ambiguous(bits: str) -> bool:
    """True if a proper cyclic shift of ``bits`` reproduces ``bits`` itself.

    Such strings repeat with a period shorter than their length; their
    endless transmission cannot be distinguished from shifted copies of
    itself, so they are unusable as identifiers.
    """
    _check_bits(bits)
    return any(bits[i:] + bits[:i] == bits for i in range(1, len(bits)))


@dataclass(frozen=True, order=True)
class Codeword:
    """One beacon identifier, most-significant bit first."""

    bits: str

    def __post_init__(self):
        _check_bits(self.bits)

    @property
    def id_value(self) -> int:
        return int(self.bits, 2)

    def rotations(self) -> list[str]:
        return rotations(self.bits)

    def __str__(self) -> str:
        return self.bits


@dataclass(frozen=True)
class Codebook:
    """Set of identifiers, pairwise distinct under every cyclic shift.

    Entries are canonical representatives (the smallest rotation of their
    class) and are kept sorted ascending by integer value, which makes the
    serialized form deterministic.
    """

    entries: tuple[Codeword, ...]
    version: str = "v1"
    _by_canonical: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        index = {}
        for entry in self.entries:
            canon = canonical_rotation(entry.bits)
            if canon in index:
                raise ValueError(f"entries {index[canon]} and {entry} are cyclic shifts of each other")
            index[canon] = entry
        object.__setattr__(self, "_by_canonical", index)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def contains_cyclic(self, bits: str) -> Codeword | None:
        """The stored codeword cyclically equivalent to ``bits``, if any."""
        _check_bits(bits, len(bits))
        return self._by_canonical.get(canonical_rotation(bits))


def generate_codebook(length: int = CODE_LENGTH) -> Codebook:
    """Every usable identifier of the given length, canonically represented.

    Enumerates binary Lyndon words of exactly ``length`` bits with the
    Fredricksen-Kessler-Maiorana recursion.  A Lyndon word is strictly
    smaller than all of its proper rotations, so the output is precisely
    one aperiodic representative per cyclic class.
    """
    words: list[str] = []
    a = [0] * (length + 1)

    def extend(t: int, p: int) -> None:
        if t > length:
            if p == length:
                words.append("".join("01"[b] for b in a[1:]))
            return
        a[t] = a[t - p]
        extend(t + 1, p)
        if a[t - p] == 0:
            a[t] = 1
            extend(t + 1, t)

    extend(1, 1)
    return Codebook(tuple(Codeword(w) for w in sorted(words)))


def save_codebook(book: Codebook, path) -> None:
    """Write the line-oriented codebook file (header line, then one code per line)."""
    lines = [CODEBOOK_HEADER]
    lines.extend(entry.bits for entry in book.entries)
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def load_codebook(path) -> Codebook:
    """Read a codebook file, validating format and cyclic distinctness."""
    with open(path, "r", encoding="ascii") as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0] != CODEBOOK_HEADER:
        raise ValueError(f"{path}: missing codebook header {CODEBOOK_HEADER!r}")
    entries = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        try:
            entries.append(Codeword(line))
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: {exc}") from exc
    return Codebook(tuple(entries))
