"""
Raw usage data, fuzzy datasets, and the piecewise-linear membership transform.

A :class:`UsageMatrix` holds quantitative records (for instance, how many
times per month a customer used each service). :func:`fuzzify_matrix` maps
it to a :class:`FuzzyDataset` of membership degrees in ``[0, 1]``, which is
what the mining code consumes.

The transform is linear between two breakpoints::

    t <= zero_point               -> 0
    zero_point < t < saturation   -> (t - zero_point) / (saturation - zero_point)
    t >= saturation               -> 1

optionally rounded half-up to a fixed number of decimals.
"""

import csv
import io
import math
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted, validate_data

from .exceptions import InvalidConfig, MalformedCsv, OutOfRangeMembership

__all__ = [
    "UsageMatrix",
    "MembershipSpec",
    "FuzzyDataset",
    "fuzzify_value",
    "fuzzify_matrix",
    "parse_usage_csv",
    "parse_fuzzy_csv",
    "emit_csv",
    "format_decimal",
    "FuzzyMembershipTransformer",
]


def _frozen_grid(values, shape):
    arr = np.array(values, dtype=float, copy=True)
    if arr.ndim != 2 or arr.shape != shape:
        raise ValueError(f"expected a grid of shape {shape}, got {arr.shape}")
    arr.flags.writeable = False
    return arr


def _check_labels(labels, what):
    labels = tuple(str(x) for x in labels)
    if not labels:
        raise ValueError(f"need at least one {what}")
    if any(not x for x in labels):
        raise ValueError(f"{what} labels must be non-empty")
    seen = set()
    for x in labels:
        if x in seen:
            raise ValueError(f"duplicate {what} label {x!r}")
        seen.add(x)
    return labels


@dataclass(frozen=True, eq=False)
class UsageMatrix:
    """Raw n x m non-negative-ish quantitative records with named items."""

    item_names: tuple
    record_ids: tuple
    values: np.ndarray

    def __post_init__(self):
        items = _check_labels(self.item_names, "item")
        records = _check_labels(self.record_ids, "record")
        values = _frozen_grid(self.values, (len(records), len(items)))
        if not np.all(np.isfinite(values)):
            raise ValueError("usage values must be finite")
        object.__setattr__(self, "item_names", items)
        object.__setattr__(self, "record_ids", records)
        object.__setattr__(self, "values", values)

    @property
    def shape(self):
        return self.values.shape

    def __eq__(self, other):
        if not isinstance(other, UsageMatrix):
            return NotImplemented
        return (self.item_names == other.item_names
                and self.record_ids == other.record_ids
                and np.array_equal(self.values, other.values))

    __hash__ = None


@dataclass(frozen=True, eq=False)
class FuzzyDataset:
    """n x m membership degrees ``f_j(t_i)`` with named items and records.

    Rows are records, columns are fuzzy items. Instances are immutable; the
    membership grid is a read-only numpy array.
    """

    item_names: tuple
    record_ids: tuple
    memberships: np.ndarray

    def __post_init__(self):
        items = _check_labels(self.item_names, "item")
        records = _check_labels(self.record_ids, "record")
        grid = _frozen_grid(self.memberships, (len(records), len(items)))
        if not np.all(np.isfinite(grid)):
            raise ValueError("memberships must be finite")
        if grid.size and (grid.min() < 0.0 or grid.max() > 1.0):
            raise ValueError("memberships must lie in [0, 1]")
        object.__setattr__(self, "item_names", items)
        object.__setattr__(self, "record_ids", records)
        object.__setattr__(self, "memberships", grid)

    @classmethod
    def from_array(cls, memberships, item_names=None, record_ids=None):
        grid = np.asarray(memberships, dtype=float)
        if grid.ndim != 2:
            raise ValueError("memberships must be a 2-D array")
        n, m = grid.shape
        if item_names is None:
            item_names = [f"f_{j + 1}" for j in range(m)]
        if record_ids is None:
            record_ids = [f"t_{i + 1}" for i in range(n)]
        return cls(tuple(item_names), tuple(record_ids), grid)

    @property
    def n_records(self):
        return self.memberships.shape[0]

    @property
    def n_items(self):
        return self.memberships.shape[1]

    def item_index(self, name):
        try:
            return self.item_names.index(name)
        except ValueError:
            raise KeyError(name) from None

    def __eq__(self, other):
        if not isinstance(other, FuzzyDataset):
            return NotImplemented
        return (self.item_names == other.item_names
                and self.record_ids == other.record_ids
                and np.array_equal(self.memberships, other.memberships))

    __hash__ = None


@dataclass(frozen=True)
class MembershipSpec:
    zero_point: float = 0.0
    saturation_point: float = 10.0
    round_decimals: int = None

    def __post_init__(self):
        z, s = float(self.zero_point), float(self.saturation_point)
        if not (math.isfinite(z) and math.isfinite(s)):
            raise InvalidConfig("membership breakpoints must be finite")
        if not s > z:
            raise InvalidConfig(
                f"saturation_point ({s}) must exceed zero_point ({z})")
        d = self.round_decimals
        if d is not None:
            if isinstance(d, bool) or int(d) != d or not 0 <= d <= 9:
                raise InvalidConfig("round_decimals must be an integer in [0, 9]")
            d = int(d)
        object.__setattr__(self, "zero_point", z)
        object.__setattr__(self, "saturation_point", s)
        object.__setattr__(self, "round_decimals", d)


def _round_half_up(x, decimals):
    # repr() gives the shortest decimal string that round-trips, so 0.5/10
    # is seen as 0.05 and not as 0.05000000000000000277...
    q = Decimal(1).scaleb(-decimals)
    return float(Decimal(repr(x)).quantize(q, rounding=ROUND_HALF_UP))


def fuzzify_value(t, spec):
    """Map one raw value to a membership degree in ``[0, 1]``."""
    t = float(t)
    if t <= spec.zero_point:
        return 0.0
    if t >= spec.saturation_point:
        return 1.0
    mu = (t - spec.zero_point) / (spec.saturation_point - spec.zero_point)
    if spec.round_decimals is not None:
        mu = _round_half_up(mu, spec.round_decimals)
    return min(max(mu, 0.0), 1.0)


def fuzzify_matrix(raw, spec):
    grid = [[fuzzify_value(t, spec) for t in row] for row in raw.values.tolist()]
    return FuzzyDataset(raw.item_names, raw.record_ids,
                        np.array(grid, dtype=float).reshape(raw.shape))


# -- CSV ----------------------------------------------------------------------

def _read_text(stream):
    if hasattr(stream, "read"):
        stream = stream.read()
    if isinstance(stream, (bytes, bytearray, memoryview)):
        try:
            stream = bytes(stream).decode("utf-8-sig")
        except UnicodeDecodeError as exc:
            raise MalformedCsv(f"input is not valid UTF-8 ({exc})") from None
    elif stream.startswith("﻿"):
        stream = stream[1:]
    return stream


def _parse_grid(stream):
    rows = [r for r in csv.reader(io.StringIO(_read_text(stream)))
            if any(cell.strip() for cell in r)]
    if not rows:
        raise MalformedCsv("empty input, expected a header row", row=1)
    header = [c.strip() for c in rows[0]]
    items = header[1:]
    if not items:
        raise MalformedCsv("header names no items", row=1)
    seen = {}
    for col, name in enumerate(items, start=2):
        if not name:
            raise MalformedCsv("empty item name", row=1, column=col)
        if name in seen:
            raise MalformedCsv(f"duplicate item name {name!r}", row=1, column=col)
        seen[name] = col
    body = rows[1:]
    if not body:
        raise MalformedCsv("empty body: header only, no records", row=2)

    record_ids, values, seen_ids = [], [], set()
    for lineno, row in enumerate(body, start=2):
        if len(row) != len(header):
            raise MalformedCsv(
                f"expected {len(header)} cells (id + {len(items)} items), "
                f"got {len(row)}", row=lineno)
        rid = row[0].strip()
        if not rid:
            raise MalformedCsv("empty record id", row=lineno, column=1)
        if rid in seen_ids:
            raise MalformedCsv(f"duplicate record id {rid!r}", row=lineno, column=1)
        seen_ids.add(rid)
        parsed = []
        for col, (name, cell) in enumerate(zip(items, row[1:]), start=2):
            try:
                v = float(cell.strip())
            except ValueError:
                v = math.nan
            if not math.isfinite(v):
                raise MalformedCsv(f"non-numeric value {cell!r} for item {name!r}",
                                   row=lineno, column=col)
            parsed.append(v)
        record_ids.append(rid)
        values.append(parsed)
    return tuple(items), tuple(record_ids), np.array(values, dtype=float)


def parse_usage_csv(stream):
    """Parse ``id,<item_1>,...,<item_m>`` CSV into a :class:`UsageMatrix`.

    *stream* may be bytes, str, or a file object opened in either mode.
    Row and column numbers in error messages are 1-based and count the header.
    """
    items, records, values = _parse_grid(stream)
    return UsageMatrix(items, records, values)


def parse_fuzzy_csv(stream):
    """Parse already-fuzzified CSV; any cell outside ``[0, 1]`` is rejected."""
    items, records, values = _parse_grid(stream)
    bad = np.argwhere((values < 0.0) | (values > 1.0))
    if len(bad):
        i, j = bad[0]
        raise OutOfRangeMembership(
            f"membership {values[i, j]!r} for item {items[j]!r} outside [0, 1]",
            row=int(i) + 2, column=int(j) + 2)
    return FuzzyDataset(items, records, values)


def format_decimal(x, places=6):
    """Fixed-point text with at most *places* decimals and no exponent."""
    x = round(float(x), places)
    if x == 0.0:
        x = 0.0  # drop the sign of -0.0
    text = f"{x:.{places}f}".rstrip("0")
    if text.endswith("."):
        text += "0"
    return text


def emit_csv(data, places=6):
    """Render a FuzzyDataset or UsageMatrix in the format the parsers accept."""
    grid = data.memberships if isinstance(data, FuzzyDataset) else data.values
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["id", *data.item_names])
    for rid, row in zip(data.record_ids, grid.tolist()):
        writer.writerow([rid, *(format_decimal(v, places) for v in row)])
    return buf.getvalue()


class FuzzyMembershipTransformer(TransformerMixin, BaseEstimator):
    """Piecewise-linear fuzzifier with the scikit-learn transformer API.

    Parameters
    ----------
    zero_point : float, default=0.0
        Values at or below this map to membership 0.
    saturation_point : float, default=10.0
        Values at or above this map to membership 1.
    round_decimals : int or None, default=None
        Round memberships half-up to this many decimals.

    Attributes
    ----------
    n_features_in_ : int
    feature_names_in_ : ndarray of str
        Only set when ``X`` has string column names (e.g. a DataFrame).
    """

    def __init__(self, zero_point=0.0, saturation_point=10.0, round_decimals=None):
        self.zero_point = zero_point
        self.saturation_point = saturation_point
        self.round_decimals = round_decimals

    def _spec(self):
        return MembershipSpec(self.zero_point, self.saturation_point,
                              self.round_decimals)

    def fit(self, X, y=None):
        self.spec_ = self._spec()
        validate_data(self, X, dtype=float, reset=True)
        return self

    def transform(self, X):
        check_is_fitted(self, "spec_")
        X = validate_data(self, X, dtype=float, reset=False)
        out = np.empty_like(X)
        for idx, t in np.ndenumerate(X):
            out[idx] = fuzzify_value(t, self.spec_)
        return out

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "spec_")
        if input_features is not None:
            return np.asarray(input_features, dtype=object)
        if hasattr(self, "feature_names_in_"):
            return self.feature_names_in_.copy()
        return np.asarray([f"f_{j + 1}" for j in range(self.n_features_in_)],
                          dtype=object)
