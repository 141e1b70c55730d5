"""Exact truncated series graded by energy and by weight.

A series stores a rational ``offset`` (its lowest exponent of q), a truncation
``order`` N, and integer coefficients indexed by a grade 0..N measured from the
offset.  ``GradedCharacter`` additionally carries a weight for every term;
``QSeries`` is the single-variable case.  Every binary operation reports the
order up to which its result is reliable, taking the minimum over its inputs.
"""

from __future__ import annotations

import json
from collections.abc import Mapping, Sequence
from fractions import Fraction

from .errors import DimensionMismatch, OffsetMismatch, OrderUnderflow, RankMismatch
from .liealg import weight as _as_weight

__all__ = [
    "GradedCharacter",
    "QSeries",
    "add",
    "mul",
    "specialize",
    "map_weights",
    "geometric",
    "euler_inverse",
    "compare",
    "frac_str",
    "parse_frac",
]


def frac_str(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_frac(s) -> Fraction:
    return Fraction(s)


def _coord_json(c):
    if isinstance(c, Fraction) and c.denominator != 1:
        return frac_str(c)
    return int(c)


def _align(oa, na, ob, nb):
    """Common offset and reliable order for two series, plus the grade shifts."""
    d = Fraction(oa) - Fraction(ob)
    if d.denominator != 1:
        raise OffsetMismatch(f"offsets {oa} and {ob} differ by a non-integer")
    off = min(Fraction(oa), Fraction(ob))
    top = min(Fraction(oa) + na, Fraction(ob) + nb)
    order = top - off
    if order < 0:
        raise OrderUnderflow(f"no reliable grades remain after aligning offsets {oa}, {ob}")
    return off, int(order), int(Fraction(oa) - off), int(Fraction(ob) - off)


class GradedCharacter:
    """Truncated (q, z)-series: ``sum coeff * q^(offset + grade) * z^weight``."""

    __slots__ = ("rank", "offset", "order", "_data")

    def __init__(self, rank: int, offset, order: int, terms: Mapping | None = None):
        if order < 0:
            raise OrderUnderflow("order must be non-negative")
        self.rank = rank
        self.offset = Fraction(offset)
        self.order = int(order)
        data: dict[int, dict] = {}
        if terms:
            for key, c in terms.items():
                g, w = key
                if not c or g > self.order:
                    continue
                if g < 0:
                    raise ValueError("grades must be non-negative")
                if len(w) != rank:
                    raise RankMismatch(f"weight {w} does not have rank {rank}")
                sl = data.setdefault(g, {})
                sl[w] = sl.get(w, 0) + c
            for g in list(data):
                data[g] = {w: c for w, c in data[g].items() if c}
                if not data[g]:
                    del data[g]
        self._data = data

    @classmethod
    def _raw(cls, rank, offset, order, data):
        """Build from a grade -> {weight: coeff} dict, dropping zeros (takes ownership)."""
        obj = cls.__new__(cls)
        obj.rank = rank
        obj.offset = Fraction(offset)
        obj.order = int(order)
        clean = {}
        for g, sl in data.items():
            if g > order:
                continue
            sl = {w: c for w, c in sl.items() if c}
            if sl:
                clean[g] = sl
        obj._data = clean
        return obj

    @classmethod
    def unit(cls, rank: int, order: int = 0) -> GradedCharacter:
        return cls._raw(rank, 0, order, {0: {(0,) * rank: 1}})

    @classmethod
    def zero(cls, rank: int, order: int, offset=0) -> GradedCharacter:
        return cls._raw(rank, offset, order, {})

    @classmethod
    def from_weights(cls, rank: int, weights: Mapping, order: int, offset=0, grade: int = 0):
        """A single grade slice, e.g. a finite character placed at ``q^offset``."""
        return cls._raw(rank, offset, order, {grade: dict(weights)})

    # -- inspection -------------------------------------------------------
    @property
    def coeffs(self) -> dict:
        return {(g, w): c for g, sl in self._data.items() for w, c in sl.items()}

    def grades(self) -> list[int]:
        return sorted(self._data)

    def slice(self, g: int) -> dict:
        return dict(self._data.get(g, {}))

    def items(self):
        for g in sorted(self._data):
            for w, c in self._data[g].items():
                yield g, w, c

    def __getitem__(self, key) -> int:
        g, w = key
        return self._data.get(g, {}).get(w, 0)

    def __len__(self) -> int:
        return sum(len(sl) for sl in self._data.values())

    def is_nonnegative(self) -> bool:
        return all(c > 0 for sl in self._data.values() for c in sl.values())

    def mass(self, g: int) -> int:
        return sum(self._data.get(g, {}).values())

    def __eq__(self, other) -> bool:
        if not isinstance(other, GradedCharacter):
            return NotImplemented
        return (
            self.rank == other.rank
            and self.offset == other.offset
            and self.order == other.order
            and self._data == other._data
        )

    __hash__ = None

    def __repr__(self) -> str:
        return f"GradedCharacter(rank={self.rank}, offset={frac_str(self.offset)}, order={self.order}, terms={len(self)})"

    # -- unary operations ---------------------------------------------------
    def truncate(self, order: int) -> GradedCharacter:
        if order > self.order:
            raise OrderUnderflow(f"cannot extend order {self.order} to {order}")
        return GradedCharacter._raw(self.rank, self.offset, order, {g: dict(sl) for g, sl in self._data.items()})

    def qshift(self, s) -> GradedCharacter:
        """Multiply by ``q^s``: only the offset moves."""
        return GradedCharacter._raw(self.rank, self.offset + Fraction(s), self.order, self._data)

    def scale(self, c: int) -> GradedCharacter:
        return GradedCharacter._raw(
            self.rank, self.offset, self.order, {g: {w: c * x for w, x in sl.items()} for g, sl in self._data.items()}
        )

    def __neg__(self) -> GradedCharacter:
        return self.scale(-1)

    def reoffset(self) -> GradedCharacter:
        """Move the offset to the lowest occupied grade (order shrinks accordingly)."""
        if not self._data:
            return self
        g0 = min(self._data)
        return GradedCharacter._raw(
            self.rank, self.offset + g0, self.order - g0, {g - g0: sl for g, sl in self._data.items()}
        )

    # -- binary operations --------------------------------------------------
    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return add(self, -other)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return mul(self, other)

    __rmul__ = __mul__

    # -- serialization -------------------------------------------------------
    def to_dict(self) -> dict:
        terms = sorted(
            self.items(), key=lambda t: (t[0], tuple(Fraction(x) for x in t[1]))
        )
        return {
            "rank": self.rank,
            "offset": frac_str(self.offset),
            "order": self.order,
            "terms": [[g, [_coord_json(x) for x in w], str(c)] for g, w, c in terms],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, d: Mapping) -> GradedCharacter:
        terms = {}
        rank = d.get("rank")
        for g, w, c in d["terms"]:
            w = _as_weight(w)
            rank = len(w) if rank is None else rank
            terms[(int(g), w)] = int(c)
        return cls(rank or 0, Fraction(d["offset"]), int(d["order"]), terms)

    @classmethod
    def from_json(cls, s: str) -> GradedCharacter:
        return cls.from_dict(json.loads(s))


class QSeries:
    """Truncated single-variable series ``sum coeff * q^(offset + grade)``."""

    __slots__ = ("offset", "order", "_c")

    def __init__(self, offset, order: int, coeffs: Mapping | Sequence | None = None):
        if order < 0:
            raise OrderUnderflow("order must be non-negative")
        self.offset = Fraction(offset)
        self.order = int(order)
        if coeffs is None:
            coeffs = {}
        elif not isinstance(coeffs, Mapping):
            coeffs = dict(enumerate(coeffs))
        for g in coeffs:
            if g < 0:
                raise ValueError("grades must be non-negative")
        self._c = {int(g): int(c) for g, c in coeffs.items() if c and g <= self.order}

    @classmethod
    def unit(cls, order: int = 0) -> QSeries:
        return cls(0, order, {0: 1})

    @property
    def coeffs(self) -> dict:
        return dict(self._c)

    def coefficients(self) -> list[int]:
        return [self._c.get(g, 0) for g in range(self.order + 1)]

    def __getitem__(self, g: int) -> int:
        return self._c.get(g, 0)

    def is_nonnegative(self) -> bool:
        return all(c > 0 for c in self._c.values())

    def __eq__(self, other) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        return self.offset == other.offset and self.order == other.order and self._c == other._c

    __hash__ = None

    def __repr__(self) -> str:
        return f"QSeries(offset={frac_str(self.offset)}, order={self.order}, coeffs={self.coefficients()})"

    def truncate(self, order: int) -> QSeries:
        if order > self.order:
            raise OrderUnderflow(f"cannot extend order {self.order} to {order}")
        return QSeries(self.offset, order, self._c)

    def qshift(self, s) -> QSeries:
        return QSeries(self.offset + Fraction(s), self.order, self._c)

    def scale(self, c: int) -> QSeries:
        return QSeries(self.offset, self.order, {g: c * x for g, x in self._c.items()})

    def __neg__(self) -> QSeries:
        return self.scale(-1)

    def __add__(self, other: QSeries) -> QSeries:
        off, order, sa, sb = _align(self.offset, self.order, other.offset, other.order)
        out: dict[int, int] = {}
        for g, c in self._c.items():
            out[g + sa] = out.get(g + sa, 0) + c
        for g, c in other._c.items():
            out[g + sb] = out.get(g + sb, 0) + c
        return QSeries(off, order, out)

    def __sub__(self, other: QSeries) -> QSeries:
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        if isinstance(other, GradedCharacter):
            return mul(other, self)
        order = min(self.order, other.order)
        out: dict[int, int] = {}
        for g, c in self._c.items():
            for h, d in other._c.items():
                if g + h <= order:
                    out[g + h] = out.get(g + h, 0) + c * d
        return QSeries(self.offset + other.offset, order, out)

    __rmul__ = __mul__

    def to_graded(self) -> GradedCharacter:
        """View as a rank-0 graded character."""
        return GradedCharacter._raw(0, self.offset, self.order, {g: {(): c} for g, c in self._c.items()})

    def to_dict(self) -> dict:
        return {
            "offset": frac_str(self.offset),
            "order": self.order,
            "terms": [[g, [], str(self._c[g])] for g in sorted(self._c)],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, d: Mapping) -> QSeries:
        return cls(Fraction(d["offset"]), int(d["order"]), {int(g): int(c) for g, _, c in d["terms"]})


def add(a: GradedCharacter, b: GradedCharacter) -> GradedCharacter:
    """Sum with offsets aligned at the common minimum."""
    if a.rank != b.rank:
        raise RankMismatch(f"ranks {a.rank} and {b.rank} differ")
    off, order, sa, sb = _align(a.offset, a.order, b.offset, b.order)
    out: dict[int, dict] = {}
    for src, shift in ((a, sa), (b, sb)):
        for g, sl in src._data.items():
            t = g + shift
            if t > order:
                continue
            dst = out.setdefault(t, {})
            for w, c in sl.items():
                dst[w] = dst.get(w, 0) + c
    return GradedCharacter._raw(a.rank, off, order, out)


def mul(a: GradedCharacter, b) -> GradedCharacter:
    """Product; grades convolve, weights and offsets add, order is the minimum."""
    if isinstance(b, QSeries):
        order = min(a.order, b.order)
        out: dict[int, dict] = {}
        for g, sl in a._data.items():
            for h, c in b._c.items():
                t = g + h
                if t > order:
                    continue
                dst = out.setdefault(t, {})
                for w, x in sl.items():
                    dst[w] = dst.get(w, 0) + c * x
        return GradedCharacter._raw(a.rank, a.offset + b.offset, order, out)
    if a.rank != b.rank:
        raise RankMismatch(f"ranks {a.rank} and {b.rank} differ")
    order = min(a.order, b.order)
    out = {}
    for g, sa in a._data.items():
        for h, sb in b._data.items():
            t = g + h
            if t > order:
                continue
            dst = out.setdefault(t, {})
            for wa, ca in sa.items():
                for wb, cb in sb.items():
                    w = tuple([x + y for x, y in zip(wa, wb)])
                    dst[w] = dst.get(w, 0) + ca * cb
    return GradedCharacter._raw(a.rank, a.offset + b.offset, order, out)


def specialize(x: GradedCharacter) -> QSeries:
    """Set every weight variable to 1."""
    return QSeries(x.offset, x.order, {g: sum(sl.values()) for g, sl in x._data.items()})


def map_weights(x: GradedCharacter, matrix: Sequence[Sequence], target_rank: int) -> GradedCharacter:
    """Push weights forward along a linear map given as a ``target_rank x rank`` matrix."""
    if len(matrix) != target_rank or any(len(row) != x.rank for row in matrix):
        raise DimensionMismatch(f"matrix shape does not map rank {x.rank} to rank {target_rank}")
    rows = [[Fraction(v) for v in row] for row in matrix]
    cache: dict = {}
    out: dict[int, dict] = {}
    for g, sl in x._data.items():
        dst = out.setdefault(g, {})
        for w, c in sl.items():
            img = cache.get(w)
            if img is None:
                img = _as_weight(sum((r * v for r, v in zip(row, w)), Fraction(0)) for row in rows)
                cache[w] = img
            dst[img] = dst.get(img, 0) + c
    return GradedCharacter._raw(target_rank, x.offset, x.order, out)


def geometric(x: GradedCharacter, step: int, wt=None) -> GradedCharacter:
    """Return ``x / (1 - q^step z^wt)`` truncated at ``x.order``."""
    if step <= 0:
        raise ValueError("step must be positive")
    wt = (0,) * x.rank if wt is None else tuple(wt)
    out: dict[int, dict] = {g: dict(sl) for g, sl in x._data.items()}
    zero_shift = not any(wt)
    for g in range(step, x.order + 1):
        prev = out.get(g - step)
        if not prev:
            continue
        dst = out.setdefault(g, {})
        if zero_shift:
            for w, c in prev.items():
                dst[w] = dst.get(w, 0) + c
        else:
            for w, c in prev.items():
                v = tuple([a + b for a, b in zip(w, wt)])
                dst[v] = dst.get(v, 0) + c
    return GradedCharacter._raw(x.rank, x.offset, x.order, out)


def euler_inverse(order: int, power: int = 1, offset=0) -> QSeries:
    """``q^offset / prod_{n>=1} (1-q^n)^power``: counts of ``power``-colored partitions."""
    c = [0] * (order + 1)
    c[0] = 1
    for _ in range(power):
        for n in range(1, order + 1):
            for g in range(n, order + 1):
                c[g] += c[g - n]
    return QSeries(offset, order, c)


def compare(a, b):
    """Compare two series through their common reliable order.

    Returns ``(equal, order, first_bad_grade)``; grades are measured from the
    smaller offset.  ``first_bad_grade`` is ``None`` when the series agree.
    """
    if isinstance(a, QSeries):
        a, b = a.to_graded(), b.to_graded()
    try:
        diff = add(a, -b)
    except OffsetMismatch:
        return False, 0, 0
    bad = diff.grades()
    return (not bad), diff.order, (bad[0] if bad else None)
