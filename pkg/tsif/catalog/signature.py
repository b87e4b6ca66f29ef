from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence, Union

import numpy as np

from tsif.constants import ALPHABET, SIGNATURE_ARITY

_STEP = {"<": 1, "=": 0, ">": -1}


@dataclass(frozen=True)
class TimeSeries:
    values: tuple

    def __post_init__(self):
        if len(self.values) < 1:
            raise ValueError("A time series has at least one element.")
        object.__setattr__(self, "values", tuple(int(value) for value in self.values))

    def __len__(self) -> int:
        return len(self.values)

    @property
    def signature(self) -> str:
        return signature_of(self)

    @classmethod
    def from_signature(cls, sig: str, start: int = 0) -> "TimeSeries":
        """Smallest-step series with the given signature."""
        values = [start]
        for symbol in sig:
            values.append(values[-1] + _STEP[symbol])
        return cls(tuple(values))


def signature_of(series: Union[TimeSeries, Sequence[int]]) -> str:
    """Compares consecutive elements: ``<`` when increasing, ``=`` when equal, ``>`` when decreasing."""
    values = series.values if isinstance(series, TimeSeries) else tuple(series)
    if len(values) < 1:
        raise ValueError("Cannot take the signature of an empty series.")
    diffs = np.sign(np.diff(np.asarray(values, dtype=np.int64)))
    return "".join(ALPHABET[1 - int(sign)] for sign in diffs)


def series_length(sig: str) -> int:
    return len(sig) + SIGNATURE_ARITY - 1


def enumerate_signatures(length: int) -> Iterator[str]:
    """Yields the ``3**length`` signatures of a length in lexicographic order."""
    if length < 0:
        raise ValueError(f"Signature length must be non-negative, got {length}.")
    for letters in itertools.product(ALPHABET, repeat=length):
        yield "".join(letters)


def random_series(rng: np.random.Generator, n: int, low: int = 0, high: int = 3) -> TimeSeries:
    """Random integer series of length ``n`` with values in ``[low, high]``."""
    return TimeSeries(tuple(int(value) for value in rng.integers(low, high + 1, size=n)))
