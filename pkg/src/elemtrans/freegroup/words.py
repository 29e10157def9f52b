"""Freely and cyclically reduced words over a fixed free-group basis.

Letters are nonzero integers: ``k`` stands for the generator ``x_k`` and
``-k`` for its inverse.  A word is freely reduced when no adjacent pair of
letters cancels; a cyclic word is additionally reduced around the seam and
stored in a canonical rotation so it can be hashed and compared.
"""

from __future__ import annotations

from dataclasses import dataclass


class WordParseError(ValueError):
    """Raised on malformed word text; carries the offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


def _check_letters(letters, rank: int) -> None:
    if rank < 1:
        raise ValueError(f"rank must be at least 1, got {rank}")
    for a in letters:
        if a == 0 or abs(a) > rank:
            raise ValueError(f"letter {a} out of range for rank {rank}")


def _reduce(letters) -> tuple[int, ...]:
    out: list[int] = []
    for a in letters:
        if out and out[-1] == -a:
            out.pop()
        else:
            out.append(a)
    return tuple(out)


@dataclass(frozen=True, slots=True)
class FreeWord:
    """A freely reduced word; the empty tuple is the identity."""

    letters: tuple[int, ...]
    rank: int

    def __post_init__(self):
        _check_letters(self.letters, self.rank)
        for a, b in zip(self.letters, self.letters[1:]):
            if a == -b:
                raise ValueError("word is not freely reduced")

    def __len__(self) -> int:
        return len(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __mul__(self, other: "FreeWord") -> "FreeWord":
        if self.rank != other.rank:
            raise ValueError("rank mismatch")
        return FreeWord(_reduce(self.letters + other.letters), self.rank)

    def inverse(self) -> "FreeWord":
        return FreeWord(tuple(-a for a in reversed(self.letters)), self.rank)

    def __pow__(self, k: int) -> "FreeWord":
        base = self if k >= 0 else self.inverse()
        out = FreeWord((), self.rank)
        for _ in range(abs(k)):
            out = out * base
        return out

    def __str__(self) -> str:
        return format_word(self)


def free_reduce(raw, rank: int) -> FreeWord:
    """Cancel adjacent inverse pairs until none remain."""
    _check_letters(raw, rank)
    return FreeWord(_reduce(raw), rank)


def identity_word(rank: int) -> FreeWord:
    return FreeWord((), rank)


def generator(i: int, rank: int) -> FreeWord:
    return FreeWord((i,), rank)


def _letter_key(a: int) -> tuple[int, int]:
    # canonical letter order: by index magnitude, positive before negative
    return (abs(a), 0 if a > 0 else 1)


def _canonical_rotation(letters: tuple[int, ...]) -> tuple[int, ...]:
    if len(letters) < 2:
        return letters
    n = len(letters)
    best = letters
    best_key = [_letter_key(a) for a in letters]
    for s in range(1, n):
        rot = letters[s:] + letters[:s]
        key = [_letter_key(a) for a in rot]
        if key < best_key:
            best, best_key = rot, key
    return best


@dataclass(frozen=True, slots=True)
class CyclicWord:
    """A cyclically reduced word stored in its minimal rotation."""

    letters: tuple[int, ...]
    rank: int

    def __post_init__(self):
        _check_letters(self.letters, self.rank)
        for a, b in zip(self.letters, self.letters[1:]):
            if a == -b:
                raise ValueError("cyclic word is not freely reduced")
        if len(self.letters) > 1 and self.letters[0] == -self.letters[-1]:
            raise ValueError("cyclic word is not cyclically reduced")
        if self.letters != _canonical_rotation(self.letters):
            raise ValueError("cyclic word is not in canonical rotation")

    def __len__(self) -> int:
        return len(self.letters)

    def to_free_word(self) -> FreeWord:
        return FreeWord(self.letters, self.rank)

    def __str__(self) -> str:
        return format_word(self.to_free_word())


def cyclic_reduce(w: FreeWord) -> CyclicWord:
    """Strip conjugating prefixes and pick the canonical rotation.

    The result is conjugate to ``w``; the empty word is allowed.
    """
    letters = w.letters
    while len(letters) > 1 and letters[0] == -letters[-1]:
        letters = letters[1:-1]
    return CyclicWord(_canonical_rotation(letters), w.rank)


@dataclass(frozen=True, slots=True)
class GeneratorTuple:
    """An ordered tuple of reduced words sharing one ambient rank."""

    words: tuple[FreeWord, ...]
    rank: int

    def __post_init__(self):
        if len(self.words) < 1:
            raise ValueError("generator tuple must contain at least one word")
        for w in self.words:
            if w.rank != self.rank:
                raise ValueError("rank mismatch inside generator tuple")

    def __len__(self) -> int:
        return len(self.words)

    def total_length(self) -> int:
        return sum(len(w) for w in self.words)

    def replace(self, i: int, w: FreeWord) -> "GeneratorTuple":
        words = list(self.words)
        words[i] = w
        return GeneratorTuple(tuple(words), self.rank)

    def __str__(self) -> str:
        return ", ".join(format_word(w) for w in self.words)


def basis_tuple(rank: int) -> GeneratorTuple:
    return GeneratorTuple(tuple(generator(i, rank) for i in range(1, rank + 1)), rank)


# ---------------------------------------------------------------------------
# text grammar: generators x1..x9 or letters a..z, inverse by ^-1 or uppercase,
# separated by whitespace or '*'; tuples are comma separated

def parse_word(text: str, rank: int | None = None) -> FreeWord:
    letters: list[int] = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace() or c == "*":
            i += 1
            continue
        if c == "x" or c == "X":
            j = i + 1
            while j < n and text[j].isdigit():
                j += 1
            if j == i + 1:
                raise WordParseError("expected generator index after 'x'", i)
            idx = int(text[i + 1 : j])
            if idx == 0:
                raise WordParseError("generator indices start at 1", i)
            sign = -1 if c == "X" else 1
            i = j
        elif c.isalpha():
            idx = ord(c.lower()) - ord("a") + 1
            sign = -1 if c.isupper() else 1
            i += 1
        else:
            raise WordParseError(f"unexpected character {c!r}", i)
        exp = 1
        if i < n and text[i] == "^":
            j = i + 1
            if j < n and text[j] in "+-":
                j += 1
            k = j
            while k < n and text[k].isdigit():
                k += 1
            if k == j:
                raise WordParseError("expected integer exponent after '^'", i)
            exp = int(text[i + 1 : k])
            i = k
        letters.extend([sign * idx if exp > 0 else -sign * idx] * abs(exp))
    if not letters and rank is None:
        rank = 2
    if rank is None:
        rank = max(2, max(abs(a) for a in letters))
    return free_reduce(letters, rank)


def parse_tuple(text: str, rank: int | None = None) -> GeneratorTuple:
    parts = [p for p in text.split(",")]
    if rank is None:
        seen = 0
        for p in parts:
            w = parse_word(p)
            seen = max(seen, w.rank, max((abs(a) for a in w.letters), default=0))
        rank = max(2, seen)
    words = tuple(parse_word(p, rank) for p in parts)
    return GeneratorTuple(words, rank)


def format_word(w: FreeWord) -> str:
    if not w.letters:
        return "1"
    out = []
    for a in w.letters:
        out.append(f"x{a}" if a > 0 else f"x{-a}^-1")
    return " ".join(out)
