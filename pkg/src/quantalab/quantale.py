"""Exact quantale arithmetic.

Two carrier families are supported:

* ``TNorm`` -- the unit interval with a continuous t-norm described as an
  ordinal sum of Lukasiewicz/product blocks over rational endpoints; outside
  every block the operation is minimum.  All arithmetic is exact on
  ``fractions.Fraction``; no floats appear anywhere.
* ``FiniteQuantale`` -- a finite commutative unital quantale given by an
  explicit tensor table (chain-ordered by default, or lattice-ordered via
  explicit join/meet tables).

Both carriers expose the same surface: ``tensor``, ``residuum``, ``leq``,
``join``, ``meet``, ``is_idempotent``, ``way_below``, plus ``unit``,
``bottom`` and ``top``.  ``residuum(x, y)`` always returns the largest ``z``
with ``x (x) z <= y``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from .errors import BudgetError, ConstructionError, StructuralError, UsageError

ZERO = Fraction(0)
ONE = Fraction(1)


def as_fraction(value) -> Fraction:
    """Coerce ints, strings like '3/8' and Fractions to an exact Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise UsageError(f"not an exact rational: {value!r}")


class BlockKind(Enum):
    LUKASIEWICZ = "lukasiewicz"
    PRODUCT = "product"


@dataclass(frozen=True)
class Block:
    """One summand of an ordinal sum: a rescaled base t-norm on [lo, hi]."""

    lo: Fraction
    hi: Fraction
    kind: BlockKind


@dataclass(frozen=True)
class TNorm:
    """A continuous t-norm on [0, 1] as an ordinal sum of rational blocks.

    ``blocks`` must be sorted, with pairwise disjoint open intervals and
    ``0 <= lo < hi <= 1`` each.  The empty sum is the minimum t-norm.
    Every block endpoint is automatically idempotent because no endpoint
    lies in the interior of another block.
    """

    blocks: tuple[Block, ...] = ()

    def __post_init__(self):
        prev_hi = None
        for b in self.blocks:
            if not (ZERO <= b.lo < b.hi <= ONE):
                raise ConstructionError(f"bad block endpoints: [{b.lo}, {b.hi}]")
            if prev_hi is not None and b.lo < prev_hi:
                raise ConstructionError(
                    f"blocks overlap or are unsorted near {b.lo}")
            prev_hi = b.hi

    # -- carrier surface -------------------------------------------------

    @property
    def unit(self) -> Fraction:
        return ONE

    @property
    def bottom(self) -> Fraction:
        return ZERO

    @property
    def top(self) -> Fraction:
        return ONE

    @property
    def is_finite(self) -> bool:
        return False

    def contains(self, x: Fraction) -> bool:
        return isinstance(x, Fraction) and ZERO <= x <= ONE

    def _check(self, x: Fraction) -> Fraction:
        if not self.contains(x):
            raise UsageError(f"{x} is not in [0,1]")
        return x

    def leq(self, x: Fraction, y: Fraction) -> bool:
        return x <= y

    def join(self, x: Fraction, y: Fraction) -> Fraction:
        return x if x >= y else y

    def meet(self, x: Fraction, y: Fraction) -> Fraction:
        return x if x <= y else y

    def _common_block(self, x: Fraction, y: Fraction) -> Block | None:
        for b in self.blocks:
            if b.lo <= x <= b.hi and b.lo <= y <= b.hi:
                return b
            if b.lo > x and b.lo > y:
                break
        return None

    def tensor(self, x: Fraction, y: Fraction) -> Fraction:
        """Ordinal-sum multiplication: rescaled base t-norm inside a common
        block, minimum everywhere else."""
        self._check(x), self._check(y)
        b = self._common_block(x, y)
        if b is None:
            return x if x <= y else y
        w = b.hi - b.lo
        u = (x - b.lo) / w
        v = (y - b.lo) / w
        if b.kind is BlockKind.LUKASIEWICZ:
            t = u + v - 1
            if t < 0:
                t = ZERO
        else:
            t = u * v
        return b.lo + w * t

    def residuum(self, x: Fraction, y: Fraction) -> Fraction:
        """Closed form for the residuum of an ordinal sum.

        Three cases: 1 when x <= y; the rescaled block residuum when x and y
        share a block; otherwise y itself (the values then straddle an
        idempotent, which collapses the residuum).  Validated against the
        brute-force grid oracle in the test suite.
        """
        self._check(x), self._check(y)
        if x <= y:
            return ONE
        b = self._common_block(x, y)
        if b is None:
            return y
        w = b.hi - b.lo
        u = (x - b.lo) / w
        v = (y - b.lo) / w
        if b.kind is BlockKind.LUKASIEWICZ:
            r = 1 - u + v            # x > y, so this is < 1
        else:
            r = v / u                # x > y >= lo forces u > 0
        return b.lo + w * r

    def is_idempotent(self, x: Fraction) -> bool:
        """x is idempotent iff it is not interior to any block."""
        self._check(x)
        return all(not (b.lo < x < b.hi) for b in self.blocks)

    def way_below(self, x: Fraction, y: Fraction) -> bool:
        """On [0,1]: x is way below y iff x = 0 or x < y."""
        self._check(x), self._check(y)
        return x == ZERO or x < y


def build_ordinal_sum(blocks: Iterable[tuple]) -> TNorm:
    """Build a validated TNorm from (lo, hi, kind) triples.

    Accepts kinds as BlockKind values or their string names.  Rejects
    reversed, zero-width or overlapping blocks.
    """
    parsed = []
    for lo, hi, kind in blocks:
        if isinstance(kind, str):
            kind = BlockKind(kind.lower())
        parsed.append(Block(as_fraction(lo), as_fraction(hi), kind))
    parsed.sort(key=lambda b: b.lo)
    return TNorm(tuple(parsed))


def godel_tnorm() -> TNorm:
    return TNorm(())


def product_tnorm() -> TNorm:
    return TNorm((Block(ZERO, ONE, BlockKind.PRODUCT),))


def lukasiewicz_tnorm() -> TNorm:
    return TNorm((Block(ZERO, ONE, BlockKind.LUKASIEWICZ),))


def check_condition_s(t: TNorm) -> tuple[bool, Block | None]:
    """Decide whether the residuum of ``t`` is continuous off the diagonal.

    Decision procedure: every block not touching 0 must be product-type.
    Returns (True, None) or (False, offending block).
    """
    for b in t.blocks:
        if b.lo > ZERO and b.kind is not BlockKind.PRODUCT:
            return False, b
    return True, None


def is_lukasiewicz_shape(t: TNorm) -> bool:
    """True when the t-norm is the single whole-interval Lukasiewicz block.

    Isomorphism detection beyond this syntactic shape is out of scope.
    """
    return len(t.blocks) == 1 and t.blocks[0] == Block(ZERO, ONE, BlockKind.LUKASIEWICZ)


def positive_residuum_zero_sup(t: TNorm) -> Fraction:
    """The exact value of sup over p > 0 of residuum(p, 0).

    Equals hi for a leading Lukasiewicz block [0, hi] (the sup is approached
    as p tends to 0, not attained) and 0 otherwise.  The value 1 singles out
    the t-norms of Lukasiewicz shape.
    """
    if t.blocks and t.blocks[0].lo == ZERO and t.blocks[0].kind is BlockKind.LUKASIEWICZ:
        return t.blocks[0].hi
    return ZERO


def _pow2_step(step: Fraction) -> int:
    n = step.denominator
    if step.numerator != 1 or n & (n - 1):
        raise UsageError(f"grid step must be 1/2^n, got {step}")
    return n


def grid(step: Fraction) -> list[Fraction]:
    """The rational grid {0, step, 2*step, ..., 1}."""
    n = _pow2_step(step)
    return [Fraction(k, n) for k in range(n + 1)]


def residuum_grid_oracle(t: TNorm, x: Fraction, y: Fraction, step: Fraction) -> Fraction:
    """Independent oracle: the largest grid point z with x (x) z <= y.

    A deliberately dumb full scan; always a lower bound for the closed-form
    residuum, with equality whenever the true residuum lies on the grid.
    """
    best = ZERO
    for z in grid(step):
        if t.tensor(x, z) <= y and z > best:
            best = z
    return best


def residuum_continuity_probe(t: TNorm, step: Fraction, min_gap: Fraction = Fraction(1, 8)):
    """Largest residuum jump between grid neighbours away from the diagonal.

    Only pairs whose both endpoints satisfy |x - y| >= min_gap participate;
    steep-but-continuous regions near the diagonal (the product t-norm close
    to the origin) are thereby excluded while a genuine interior jump stays
    visible at any resolution.  The threshold separating the two is an
    engineering choice, not a theorem; see the tests for the calibration.
    """
    points = grid(step)
    off = [(x, y) for x in points for y in points if abs(x - y) >= min_gap]
    offset = set(off)
    best = ZERO
    where = None
    for x, y in off:
        r = t.residuum(x, y)
        for dx, dy in ((step, ZERO), (ZERO, step)):
            x2, y2 = x + dx, y + dy
            if x2 > ONE or y2 > ONE or (x2, y2) not in offset:
                continue
            jump = abs(t.residuum(x2, y2) - r)
            if jump > best:
                best, where = jump, ((x, y), (x2, y2))
    return best, where


# ---------------------------------------------------------------------------
# finite quantales
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    """One failed law with a witness tuple of carrier elements."""

    law: str
    witness: tuple


class FiniteQuantale:
    """A finite commutative unital quantale given by tables.

    ``elements`` is the carrier; without explicit ``join``/``meet`` tables it
    is treated as a chain in numeric order.  The constructor only checks the
    tables for shape (totality); the laws are examined separately by
    ``check_quantale_axioms`` so that broken tables can be constructed and
    reported on.
    """

    def __init__(self, elements: Sequence, tensor, unit,
                 join=None, meet=None):
        elems = tuple(as_fraction(e) for e in elements)
        if len(set(elems)) != len(elems):
            raise ConstructionError("carrier elements must be distinct")
        if not elems:
            raise ConstructionError("carrier must be nonempty")
        self.elements = tuple(sorted(elems))
        self.unit = as_fraction(unit)
        if self.unit not in self.elements:
            raise ConstructionError(f"unit {self.unit} not in carrier")
        self._tensor = self._read_table(tensor, "tensor")
        self._join = self._read_table(join, "join") if join is not None else None
        self._meet = self._read_table(meet, "meet") if meet is not None else None
        self._residuum: dict = {}

    def _read_table(self, table, name: str) -> dict:
        out = {}
        if isinstance(table, Mapping):
            for (x, y), v in table.items():
                out[(as_fraction(x), as_fraction(y))] = as_fraction(v)
        else:
            rows = list(table)
            if len(rows) != len(self.elements):
                raise StructuralError(f"{name} table must have {len(self.elements)} rows")
            for x, row in zip(self.elements, rows):
                row = list(row)
                if len(row) != len(self.elements):
                    raise StructuralError(f"{name} row for {x} has wrong length")
                for y, v in zip(self.elements, row):
                    out[(x, y)] = as_fraction(v)
        members = set(self.elements)
        for x in self.elements:
            for y in self.elements:
                if (x, y) not in out:
                    raise StructuralError(f"{name} table missing entry ({x}, {y})")
                if out[(x, y)] not in members:
                    raise StructuralError(f"{name}({x}, {y}) = {out[(x, y)]} outside carrier")
        return out

    # -- carrier surface -------------------------------------------------

    @property
    def bottom(self) -> Fraction:
        if self._join is None:
            return self.elements[0]
        b = self.elements[0]
        for x in self.elements:
            if self.leq(x, b):
                b = x
        return b

    @property
    def top(self) -> Fraction:
        if self._join is None:
            return self.elements[-1]
        t = self.elements[0]
        for x in self.elements:
            if self.leq(t, x):
                t = x
        return t

    @property
    def is_finite(self) -> bool:
        return True

    @property
    def is_integral(self) -> bool:
        return self.unit == self.top

    def contains(self, x) -> bool:
        return x in self._member_set

    @property
    def _member_set(self):
        s = getattr(self, "_members", None)
        if s is None:
            s = frozenset(self.elements)
            self._members = s
        return s

    def _check(self, x: Fraction) -> Fraction:
        if x not in self._member_set:
            raise UsageError(f"{x} is not a carrier element")
        return x

    def leq(self, x: Fraction, y: Fraction) -> bool:
        if self._join is None:
            return x <= y
        return self._join[(x, y)] == y

    def join(self, x: Fraction, y: Fraction) -> Fraction:
        if self._join is None:
            return x if x >= y else y
        return self._join[(x, y)]

    def meet(self, x: Fraction, y: Fraction) -> Fraction:
        if self._meet is None:
            return x if x <= y else y
        return self._meet[(x, y)]

    def tensor(self, x: Fraction, y: Fraction) -> Fraction:
        self._check(x), self._check(y)
        return self._tensor[(x, y)]

    def residuum(self, x: Fraction, y: Fraction) -> Fraction:
        """Largest z with x (x) z <= y, folded with the carrier join."""
        self._check(x), self._check(y)
        key = (x, y)
        cached = self._residuum.get(key)
        if cached is None:
            zs = [z for z in self.elements if self.leq(self._tensor[(x, z)], y)]
            cached = self.bottom
            for z in zs:
                cached = self.join(cached, z)
            self._residuum[key] = cached
        return cached

    def is_idempotent(self, x: Fraction) -> bool:
        self._check(x)
        return self._tensor[(x, x)] == x

    def _directed_subsets(self):
        cached = getattr(self, "_directed", None)
        if cached is not None:
            return cached
        if len(self.elements) > 12:
            raise BudgetError("way-below enumeration over 2^|Q| subsets refused",
                              count=2 ** len(self.elements))
        out = []
        for r in range(1, len(self.elements) + 1):
            for combo in itertools.combinations(self.elements, r):
                if all(any(self.leq(a, c) and self.leq(b, c) for c in combo)
                       for a in combo for b in combo):
                    out.append(combo)
        self._directed = out
        return out

    def way_below(self, x: Fraction, y: Fraction) -> bool:
        """Decided from the definition, quantified over all directed subsets."""
        self._check(x), self._check(y)
        for d in self._directed_subsets():
            jd = self.bottom
            for z in d:
                jd = self.join(jd, z)
            if self.leq(y, jd) and not any(self.leq(x, z) for z in d):
                return False
        return True

    def __eq__(self, other):
        return (isinstance(other, FiniteQuantale)
                and self.elements == other.elements
                and self.unit == other.unit
                and self._tensor == other._tensor
                and self._join == other._join
                and self._meet == other._meet)

    def __hash__(self):
        return hash((self.elements, self.unit,
                     tuple(sorted(self._tensor.items()))))

    def __repr__(self):
        elems = ", ".join(str(e) for e in self.elements)
        return f"FiniteQuantale([{elems}], unit={self.unit})"


def check_quantale_axioms(q: FiniteQuantale) -> list[Violation]:
    """Exhaustively check the quantale laws, witnessing each failure.

    Covers commutativity, associativity, the unit law, distributivity of the
    tensor over binary joins and over the empty join (bottom absorption), and
    the presence of bottom 0 and top 1 in the carrier.  An empty report means
    the table is a genuine commutative unital quantale.
    """
    out: list[Violation] = []
    es = q.elements
    t = q._tensor
    if q.bottom != ZERO or q.top != ONE:
        out.append(Violation("bounds", (q.bottom, q.top)))
    for x in es:
        if t[(q.unit, x)] != x:
            out.append(Violation("unit", (x,)))
        if t[(x, q.bottom)] != q.bottom:
            out.append(Violation("bottom-absorption", (x,)))
    for x in es:
        for y in es:
            if t[(x, y)] != t[(y, x)]:
                out.append(Violation("commutativity", (x, y)))
    for x in es:
        for y in es:
            for z in es:
                if t[(t[(x, y)], z)] != t[(x, t[(y, z)])]:
                    out.append(Violation("associativity", (x, y, z)))
                if t[(x, q.join(y, z))] != q.join(t[(x, y)], t[(x, z)]):
                    out.append(Violation("join-distributivity", (x, y, z)))
    return out


def finite_restriction(t: TNorm, elements: Sequence) -> FiniteQuantale:
    """Restrict a t-norm to a finite subchain closed under its tensor.

    Raises ConstructionError when the subchain is not closed.  The residuum
    of the restriction is recomputed inside the subchain and may differ from
    the ambient residuum when the latter leaves the subchain.
    """
    elems = sorted(as_fraction(e) for e in elements)
    table = {}
    for x in elems:
        for y in elems:
            v = t.tensor(x, y)
            if v not in set(elems):
                raise ConstructionError(
                    f"carrier not closed: {x} (x) {y} = {v}")
            table[(x, y)] = v
    return FiniteQuantale(elems, table, t.unit)


# shipped finite chains ------------------------------------------------------

def two_chain() -> FiniteQuantale:
    """The Boolean quantale {0, 1} with tensor = min."""
    return FiniteQuantale([0, 1], {(ZERO, ZERO): 0, (ZERO, ONE): 0,
                                   (ONE, ZERO): 0, (ONE, ONE): 1}, 1)


def godel3() -> FiniteQuantale:
    """Three-element chain with tensor = min."""
    return finite_restriction(godel_tnorm(), [0, Fraction(1, 2), 1])


def mv3() -> FiniteQuantale:
    """Three-element Lukasiewicz chain: 1/2 (x) 1/2 = 0."""
    return finite_restriction(lukasiewicz_tnorm(), [0, Fraction(1, 2), 1])


def five_chain() -> FiniteQuantale:
    """{0, 1/4, 3/8, 1/2, 1}, closed under the (1/4,1/2) Lukasiewicz block sum."""
    t = build_ordinal_sum([(Fraction(1, 4), Fraction(1, 2), BlockKind.LUKASIEWICZ)])
    return finite_restriction(t, [0, Fraction(1, 4), Fraction(3, 8), Fraction(1, 2), 1])


Carrier = Union[TNorm, FiniteQuantale]


# ---------------------------------------------------------------------------
# tagged values
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QValue:
    """An exact rational tagged with its home carrier."""

    value: Fraction
    carrier: Carrier

    def __post_init__(self):
        if not self.carrier.contains(self.value):
            raise UsageError(f"{self.value} is not in the declared carrier")


def _same_carrier(x: QValue, y: QValue) -> Carrier:
    if x.carrier != y.carrier:
        raise UsageError("mixed carriers")
    return x.carrier


def tensor(x: QValue, y: QValue) -> QValue:
    c = _same_carrier(x, y)
    return QValue(c.tensor(x.value, y.value), c)


def residuum(x: QValue, y: QValue) -> QValue:
    c = _same_carrier(x, y)
    return QValue(c.residuum(x.value, y.value), c)


def is_idempotent(x: QValue) -> bool:
    return x.carrier.is_idempotent(x.value)


def way_below(x: QValue, y: QValue) -> bool:
    c = _same_carrier(x, y)
    return c.way_below(x.value, y.value)
