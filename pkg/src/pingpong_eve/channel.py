"""Bit strings, attack labels and the attack-conditioned channel.

The channel gives, for every attack kind ``x`` and Alice bit ``a``, the joint
probability ``p[x, a, b, e]`` that Bob receives ``b`` and Eve reads ``e``.
Probabilities are kept as :class:`fractions.Fraction` throughout.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Union

__all__ = [
    "InputError",
    "ModelValidationError",
    "AttackKind",
    "Observer",
    "BitString",
    "AttackSequence",
    "AttackChannel",
    "default_channel",
    "slot_joint",
    "slot_marginal",
    "load_channel",
    "dump_channel",
]

BITS = (0, 1)


class InputError(ValueError):
    """Malformed or inconsistent user input (bad characters, length mismatch)."""


class ModelValidationError(ValueError):
    """A channel table that is not a valid conditional distribution."""


class AttackKind(enum.Enum):
    U = "u"  # without the symmetry operation
    S = "s"  # with the symmetry operation

    @classmethod
    def parse(cls, char: str) -> "AttackKind":
        try:
            return cls(char.lower())
        except ValueError:
            raise InputError(f"attack label must be 'u' or 's', got {char!r}") from None

    def __str__(self) -> str:
        return self.value


class Observer(enum.Enum):
    EVE = "eve"
    BOB = "bob"

    @classmethod
    def parse(cls, text: Union[str, "Observer"]) -> "Observer":
        if isinstance(text, Observer):
            return text
        try:
            return cls(text.lower())
        except ValueError:
            raise InputError(f"observer must be 'eve' or 'bob', got {text!r}") from None

    def __str__(self) -> str:
        return self.value


def _check_bit(value) -> int:
    if value not in BITS:
        raise InputError(f"bit must be 0 or 1, got {value!r}")
    return int(value)


@dataclass(frozen=True)
class BitString:
    """Ordered, non-empty sequence of bits; text form is e.g. ``'100110'``."""

    bits: tuple

    def __post_init__(self):
        bits = tuple(_check_bit(b) for b in self.bits)
        if not bits:
            raise InputError("bit string must contain at least one bit")
        object.__setattr__(self, "bits", bits)

    @classmethod
    def parse(cls, text: str) -> "BitString":
        text = text.strip()
        bad = set(text) - {"0", "1"}
        if bad:
            raise InputError(f"bit string may only contain '0' and '1', got {text!r}")
        return cls(tuple(int(c) for c in text))

    @classmethod
    def coerce(cls, value: Union[str, Iterable[int], "BitString"]) -> "BitString":
        if isinstance(value, BitString):
            return value
        if isinstance(value, str):
            return cls.parse(value)
        return cls(tuple(value))

    def complement(self) -> "BitString":
        return BitString(tuple(1 - b for b in self.bits))

    def __str__(self) -> str:
        return "".join(str(b) for b in self.bits)

    def __len__(self) -> int:
        return len(self.bits)

    def __iter__(self) -> Iterator[int]:
        return iter(self.bits)

    def __getitem__(self, i):
        return self.bits[i]


@dataclass(frozen=True)
class AttackSequence:
    """Per-slot attack labels; text form is e.g. ``'susuus'``."""

    attacks: tuple

    def __post_init__(self):
        attacks = tuple(a if isinstance(a, AttackKind) else AttackKind.parse(a) for a in self.attacks)
        if not attacks:
            raise InputError("attack sequence must contain at least one label")
        object.__setattr__(self, "attacks", attacks)

    @classmethod
    def parse(cls, text: str) -> "AttackSequence":
        return cls(tuple(AttackKind.parse(c) for c in text.strip()))

    @classmethod
    def coerce(cls, value) -> "AttackSequence":
        if isinstance(value, AttackSequence):
            return value
        if isinstance(value, str):
            return cls.parse(value)
        return cls(tuple(value))

    @classmethod
    def uniform(cls, kind: AttackKind, n: int) -> "AttackSequence":
        return cls((kind,) * n)

    def __str__(self) -> str:
        return "".join(a.value for a in self.attacks)

    def __len__(self) -> int:
        return len(self.attacks)

    def __iter__(self) -> Iterator[AttackKind]:
        return iter(self.attacks)

    def __getitem__(self, i):
        return self.attacks[i]


def check_lengths(alice: BitString, attacks: AttackSequence) -> None:
    if len(alice) != len(attacks):
        raise InputError(
            f"length mismatch: {len(alice)} bits but {len(attacks)} attack labels"
        )


Key = tuple  # (AttackKind, a, b, e)


@dataclass(frozen=True)
class AttackChannel:
    """Exact table ``(x, a, b, e) -> P(b, e | a, x)``.

    Missing entries are zero. Construction fails with
    :class:`ModelValidationError` unless every ``(x, a)`` row sums to one.
    """

    table: Mapping[Key, Fraction] = field(repr=False)

    def __post_init__(self):
        full = {}
        for x in AttackKind:
            for a in BITS:
                for b in BITS:
                    for e in BITS:
                        full[(x, a, b, e)] = Fraction(0)
        for key, p in dict(self.table).items():
            if len(key) != 4:
                raise ModelValidationError(f"channel key must be (x, a, b, e), got {key!r}")
            x, a, b, e = key
            x = x if isinstance(x, AttackKind) else AttackKind.parse(x)
            norm = (x, int(a), int(b), int(e))
            if norm not in full:
                raise ModelValidationError(f"invalid channel key {key!r}")
            p = Fraction(p)
            if not 0 <= p <= 1:
                raise ModelValidationError(f"probability out of range at {key!r}: {p}")
            full[norm] = p
        object.__setattr__(self, "table", MappingProxyType(full))
        for x in AttackKind:
            for a in BITS:
                total = sum(full[(x, a, b, e)] for b in BITS for e in BITS)
                if total != 1:
                    raise ModelValidationError(
                        f"row (x={x}, a={a}) sums to {total}, expected exactly 1"
                    )

    def __getitem__(self, key) -> Fraction:
        x, a, b, e = key
        if not isinstance(x, AttackKind):
            x = AttackKind.parse(x)
        return self.table[(x, a, b, e)]

    def __eq__(self, other):
        if not isinstance(other, AttackChannel):
            return NotImplemented
        return dict(self.table) == dict(other.table)

    def __hash__(self):
        return hash(tuple(sorted((str(k[0]),) + k[1:] + (v,) for k, v in self.table.items())))


def default_channel() -> AttackChannel:
    """The published attack statistics.

    Attack ``u`` passes ``a=0`` untouched and fully randomizes ``(b, e)`` for
    ``a=1``; attack ``s`` is the mirror image.
    """
    q = Fraction(1, 4)
    u, s = AttackKind.U, AttackKind.S
    table = {(u, 0, 0, 0): Fraction(1), (s, 1, 1, 1): Fraction(1)}
    for b in BITS:
        for e in BITS:
            table[(u, 1, b, e)] = q
            table[(s, 0, b, e)] = q
    return AttackChannel(table)


def slot_joint(channel: AttackChannel, x: AttackKind, a: int) -> dict:
    """Support of ``P(b, e | a, x)`` as ``{(b, e): weight}`` in ``(b, e)`` order."""
    x = x if isinstance(x, AttackKind) else AttackKind.parse(x)
    a = _check_bit(a)
    dist = {(b, e): channel.table[(x, a, b, e)] for b in BITS for e in BITS}
    if sum(dist.values()) != 1:
        raise ModelValidationError(f"channel row (x={x}, a={a}) is not normalized")
    return {k: p for k, p in dist.items() if p}


def slot_marginal(channel: AttackChannel, x: AttackKind, a: int, observer) -> dict:
    """Support of the observer's bit distribution ``{bit: weight}``."""
    observer = Observer.parse(observer)
    idx = 1 if observer is Observer.EVE else 0
    out = {}
    for be, p in slot_joint(channel, x, a).items():
        out[be[idx]] = out.get(be[idx], Fraction(0)) + p
    return {k: out[k] for k in sorted(out)}


def load_channel(path: Union[str, Path]) -> AttackChannel:
    """Read a channel from lines of ``x a b e p`` (``p`` as ``num/den`` or decimal).

    Blank lines and ``#`` comments are ignored; unlisted entries are zero.
    """
    table = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 5:
            raise InputError(f"{path}:{lineno}: expected 'x a b e p', got {raw!r}")
        x, a, b, e, p = parts
        try:
            key = (AttackKind.parse(x), _check_bit(int(a)), _check_bit(int(b)), _check_bit(int(e)))
            prob = Fraction(p)
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"{path}:{lineno}: {exc}") from None
        if key in table:
            raise InputError(f"{path}:{lineno}: duplicate entry for {x} {a} {b} {e}")
        table[key] = prob
    return AttackChannel(table)


def dump_channel(channel: AttackChannel) -> str:
    lines = []
    for (x, a, b, e), p in channel.table.items():
        lines.append(f"{x} {a} {b} {e} {p}")
    return "\n".join(lines) + "\n"
