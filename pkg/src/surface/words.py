"""Letters and words in the edge alphabet of a gluing pattern."""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Tuple

from src.errors import WordError

TOKEN_RE = re.compile(r"([A-Za-z][A-Za-z0-9_']*)(\^-1|\^\+?1)?")


@dataclass(frozen=True)
class Letter:
    name: str
    exponent: int = 1  # +1 or -1

    def inverse(self) -> "Letter":
        return Letter(self.name, -self.exponent)

    def __str__(self) -> str:
        return self.name if self.exponent > 0 else f"{self.name}^-1"


Word = Tuple[Letter, ...]


def parse_word(text: str) -> Word:
    """Parse whitespace-separated letters such as ``a b^-1 c``."""
    letters = []
    for token in text.split():
        match = TOKEN_RE.fullmatch(token)
        if match is None:
            raise WordError(f"Malformed letter token {token!r}")
        exponent = -1 if match.group(2) == "^-1" else 1
        letters.append(Letter(match.group(1), exponent))
    return tuple(letters)


def as_word(word: "Word | str | Iterable[Letter]") -> Word:
    if isinstance(word, str):
        return parse_word(word)
    return tuple(word)


def format_word(word: Iterable[Letter]) -> str:
    return " ".join(str(letter) for letter in word)


def invert_word(word: Iterable[Letter]) -> Word:
    return tuple(letter.inverse() for letter in reversed(tuple(word)))


def power(word: Word, exponent: int) -> Word:
    return word if exponent > 0 else invert_word(word)


def free_reduce(word: Iterable[Letter]) -> Word:
    stack = []
    for letter in word:
        if stack and stack[-1].name == letter.name and stack[-1].exponent == -letter.exponent:
            stack.pop()
        else:
            stack.append(letter)
    return tuple(stack)


def rotate(word: Word, start: int) -> Word:
    if not word:
        return word
    start %= len(word)
    return word[start:] + word[:start]
