"""Exact replication of the monad-law failure on the unit interval.

When a continuous t-norm has a Lukasiewicz-type block away from zero, the
Kleisli extensions built from two specific maps on X = [0,1] break
associativity.  The construction lives on an uncountable function space, so
this module evaluates it through two finite, fully exact devices:

* ``FunctionDescriptor`` -- a function on [0,1] recorded by its samples at
  the points 1/m, its exact tail liminf along those points, and its exact
  global infimum.  Descriptors are built from a closed class of expressions
  (the decreasing ramp, tail indicators, constants, and joins/meets/
  residuations of those) whose tails are eventually monotone, so both the
  liminf and the infimum come out of exact left-limit algebra rather than
  sampling.
* certified inequality chains -- lower bounds for suprema come from explicit
  witnesses in a catalog (the ramp itself realizes the value 1), and upper
  bounds come from the residuum collapse across an idempotent: whenever a
  witness clears the block's left endpoint p at a sampled point while the
  ramp sits strictly below p there, the residuum at that point collapses to
  the ramp's value, which is at most p.  A plain discretization could reach
  neither side.

Verdicts are three-valued; absence of a violation on a catalog is never
reported as a proof that the laws hold.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

from .errors import PreconditionError, UsageError
from .monad import Variant
from .quantale import (Block, BlockKind, ONE, TNorm, ZERO, as_fraction,
                       check_condition_s, is_lukasiewicz_shape,
                       positive_residuum_zero_sup)

CATALOG_CAP = 240


# ---------------------------------------------------------------------------
# expression trees for the closed function class on [0,1]
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Ramp:
    """x maps to scale * (1 - x): the decreasing ramp hitting 0 at x = 1."""
    scale: Fraction


@dataclass(frozen=True)
class TailIndicator:
    """1 on {1/m : m >= start}, 0 elsewhere."""
    start: int


@dataclass(frozen=True)
class Const:
    value: Fraction


@dataclass(frozen=True)
class Join:
    left: "FnExpr"
    right: "FnExpr"


@dataclass(frozen=True)
class Meet:
    left: "FnExpr"
    right: "FnExpr"


@dataclass(frozen=True)
class Res:
    """x maps to (constant -> child(x))."""
    const: Fraction
    child: "FnExpr"


FnExpr = Union[Ramp, TailIndicator, Const, Join, Meet, Res]


def eval_at(expr: FnExpr, x: Fraction, t: TNorm) -> Fraction:
    if isinstance(expr, Ramp):
        return expr.scale * (1 - x)
    if isinstance(expr, TailIndicator):
        reciprocal = x.numerator == 1 and x.denominator >= expr.start
        return ONE if x > 0 and reciprocal else ZERO
    if isinstance(expr, Const):
        return expr.value
    if isinstance(expr, Join):
        return max(eval_at(expr.left, x, t), eval_at(expr.right, x, t))
    if isinstance(expr, Meet):
        return min(eval_at(expr.left, x, t), eval_at(expr.right, x, t))
    if isinstance(expr, Res):
        return t.residuum(expr.const, eval_at(expr.child, x, t))
    raise UsageError(f"unknown expression {expr!r}")


def _eval_leaves(expr: FnExpr, ramp_value: Fraction, indicator_value: Fraction,
                 t: TNorm) -> Fraction:
    """Evaluate with every ramp leaf pinned to a common value and every
    indicator pinned likewise; legitimate for infima because all node
    operations preserve meets in the function argument."""
    if isinstance(expr, Ramp):
        return ramp_value if expr.scale else ZERO
    if isinstance(expr, TailIndicator):
        return indicator_value
    if isinstance(expr, Const):
        return expr.value
    if isinstance(expr, Join):
        return max(_eval_leaves(expr.left, ramp_value, indicator_value, t),
                   _eval_leaves(expr.right, ramp_value, indicator_value, t))
    if isinstance(expr, Meet):
        return min(_eval_leaves(expr.left, ramp_value, indicator_value, t),
                   _eval_leaves(expr.right, ramp_value, indicator_value, t))
    if isinstance(expr, Res):
        return t.residuum(expr.const,
                          _eval_leaves(expr.child, ramp_value, indicator_value, t))
    raise UsageError(f"unknown expression {expr!r}")


def left_limit_residuum(t: TNorm, c: Fraction, limit: Fraction) -> tuple[Fraction, bool]:
    """sup over v < limit of (c -> v), with whether the sup is attained below.

    Attainment means c -> v is eventually constant as v approaches the limit
    from below, so a residuated sequence inherits an exact tail; otherwise
    the residuated tail still approaches strictly from below.  This is the
    one place where the order of limits matters: residuation by a constant
    preserves infima outright but only conditionally preserves suprema, and
    the failure of condition (S) is visible exactly here.
    """
    if limit <= ZERO:
        raise UsageError("left limit needs a positive limit point")
    if limit > c:
        return ONE, True
    for b in t.blocks:
        if b.lo <= c <= b.hi and b.lo < limit:
            w = b.hi - b.lo
            u = (c - b.lo) / w
            v = (limit - b.lo) / w
            if b.kind is BlockKind.LUKASIEWICZ:
                return b.lo + w * (1 - u + v), False
            return b.lo + w * (v / u), False
    return limit, False


def tail_limit(expr: FnExpr, t: TNorm) -> tuple[Fraction, bool]:
    """The limit of the sequence m -> expr(1/m), with exactness flag.

    Exact means the sequence is eventually equal to the limit; otherwise it
    approaches strictly from below.  Every expression in the class has one
    of these two tail behaviours, which is what makes liminfs computable
    without truncation error.
    """
    if isinstance(expr, Ramp):
        return expr.scale, expr.scale == ZERO
    if isinstance(expr, TailIndicator):
        return ONE, True
    if isinstance(expr, Const):
        return expr.value, True
    if isinstance(expr, (Join, Meet)):
        la, ea = tail_limit(expr.left, t)
        lb, eb = tail_limit(expr.right, t)
        if isinstance(expr, Join):
            if la != lb:
                return (la, ea) if la > lb else (lb, eb)
            return la, ea or eb
        if la != lb:
            return (la, ea) if la < lb else (lb, eb)
        return la, ea and eb
    if isinstance(expr, Res):
        lc, ec = tail_limit(expr.child, t)
        if ec:
            return t.residuum(expr.const, lc), True
        return left_limit_residuum(t, expr.const, lc)
    raise UsageError(f"unknown expression {expr!r}")


def _max_indicator_start(expr: FnExpr) -> int:
    if isinstance(expr, TailIndicator):
        return expr.start
    if isinstance(expr, (Join, Meet)):
        return max(_max_indicator_start(expr.left), _max_indicator_start(expr.right))
    if isinstance(expr, Res):
        return _max_indicator_start(expr.child)
    return 1


@dataclass(frozen=True)
class FunctionDescriptor:
    """Samples at {1/m : m <= N} plus exact tail liminf and global infimum."""

    label: str
    samples: tuple[Fraction, ...]
    tail_liminf: Fraction
    global_inf: Fraction

    def __post_init__(self):
        for v in self.samples:
            if self.global_inf > v:
                raise UsageError("global infimum exceeds a sample")
        if self.tail_liminf < self.global_inf:
            raise UsageError("tail liminf below the global infimum")

    def sample(self, m: int) -> Fraction:
        return self.samples[m - 1]

    @property
    def depth(self) -> int:
        return len(self.samples)

    def key(self):
        return (self.samples, self.tail_liminf, self.global_inf)


def describe(expr: FnExpr, t: TNorm, depth: int, pin_one: bool = False,
             label: str = "") -> FunctionDescriptor:
    """Build the exact descriptor of an expression.

    The global infimum has three exact contributions: the co-countable part
    of the interval (where the indicators vanish and the ramp value sweeps
    down to 0, evaluated by inf-preservation at the limit), the endpoint
    x = 0, and the sample sequence, whose tail beyond all indicator starts is
    monotone nondecreasing so one extra sample closes it off.  ``pin_one``
    overrides the value at x = 1 with the top, for the filter variant.
    """
    def value(m: int) -> Fraction:
        if pin_one and m == 1:
            return ONE
        return eval_at(expr, Fraction(1, m), t)

    horizon = max(depth, _max_indicator_start(expr) + 1) + 1
    all_samples = [value(m) for m in range(1, horizon + 1)]
    co_countable = _eval_leaves(expr, ZERO, ZERO, t)
    at_zero = eval_at(expr, ZERO, t)
    ginf = min(min(all_samples), co_countable, at_zero)
    liminf, _ = tail_limit(expr, t)
    return FunctionDescriptor(label or repr(expr), tuple(all_samples[:depth]),
                              liminf, ginf)


def sampled_sub_bound(lam: FunctionDescriptor, mu: FunctionDescriptor,
                      t: TNorm) -> Fraction:
    """Meet of pointwise residuations over the sampled points only: an upper
    bound for the true graded inclusion, exact when descriptors coincide."""
    if lam.key() == mu.key():
        return ONE
    out = ONE
    for a, b in zip(lam.samples, mu.samples):
        out = min(out, t.residuum(a, b))
    return out


# ---------------------------------------------------------------------------
# symbolic semifilters on the uncountable domain
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Threshold:
    """mu maps to (bound -> inf mu): induced by everything above the constant."""
    bound: Fraction

    def evaluate(self, d: FunctionDescriptor, t: TNorm) -> Fraction:
        return t.residuum(self.bound, d.global_inf)


@dataclass(frozen=True)
class TailSemifilter:
    """mu maps to its tail liminf; the bounded form meets in the factor
    obtained by joining the generators with vanishing positive constants,
    which is 1 on bounded arguments and the zero-residuum sup otherwise."""
    bounded: bool = False

    def evaluate(self, d: FunctionDescriptor, t: TNorm) -> Fraction:
        if not self.bounded or d.global_inf > ZERO:
            return d.tail_liminf
        return min(d.tail_liminf, positive_residuum_zero_sup(t))


@dataclass(frozen=True)
class PointEvaluation:
    """mu maps to mu(1/m): the unit at a sample point."""
    m: int

    def evaluate(self, d: FunctionDescriptor, t: TNorm) -> Fraction:
        return d.sample(self.m)


@dataclass(frozen=True)
class Residuated:
    const: Fraction
    inner: "SymbolicSemifilter"

    def evaluate(self, d: FunctionDescriptor, t: TNorm) -> Fraction:
        return t.residuum(self.const, self.inner.evaluate(d, t))


SymbolicSemifilter = Union[Threshold, TailSemifilter, PointEvaluation, Residuated]


@dataclass(frozen=True)
class Coreflected:
    """The conical coreflection of an inner symbolic semifilter.

    Its pointwise values are suprema over the whole function space, which no
    finite device can evaluate; what the descriptors decide exactly is the
    full-degree level (where the inner value is already 1, since the
    coreflection preserves that level).  At a target function the value is
    therefore bounded from below through catalog witnesses in the level:
    only the target itself certifies the bound 1, anything else contributes
    nothing certified.
    """

    inner: SymbolicSemifilter

    def member(self, d: FunctionDescriptor, t: TNorm) -> bool:
        return self.inner.evaluate(d, t) == ONE

    def catalog_value(self, target: FunctionDescriptor,
                      catalog: Sequence[FunctionDescriptor],
                      t: TNorm) -> tuple[Fraction, bool, str]:
        """(lower bound at the target, whether it is exact, the witness).

        Exact means the sup is attained by a catalog witness: the target
        itself belongs to the level, so reflexivity realizes 1 and the sup
        is squeezed against the integral top.
        """
        for d in catalog:
            if d.key() == target.key() and self.member(d, t):
                return ONE, True, d.label
        best, witness = ZERO, ""
        for d in catalog:
            if self.member(d, t):
                v = sampled_sub_bound(d, target, t)
                if v > best:
                    best, witness = v, d.label
        return best, False, witness


# ---------------------------------------------------------------------------
# the catalog
# ---------------------------------------------------------------------------

def default_catalog_exprs(p: Fraction, t_par: Fraction, s_par: Fraction,
                          hi: Fraction | None, variant: Variant,
                          epsilon: Fraction) -> list[FnExpr]:
    """The shipped witness catalog before closure: the ramp, tail indicators
    (joined with small constants), and a pool of constants."""
    ramp: FnExpr = Ramp(p)
    if variant is Variant.BOUNDED:
        ramp = Join(ramp, Const(epsilon))
    deltas = (epsilon,) if variant is Variant.BOUNDED else (ZERO, Fraction(1, 8))
    consts = {ZERO, p / 2, p, t_par, s_par, ONE}
    if hi is not None:
        consts.add(hi)
        consts.add((p + hi) / 2)
    out: list[FnExpr] = [ramp]
    out += [TailIndicator(n) for n in (1, 2, 3, 8)]
    out += [Join(TailIndicator(n), Const(d))
            for n in (1, 3) for d in deltas if d > ZERO]
    out += [Const(c) for c in sorted(consts)]
    return out


def close_catalog(base: Sequence[FnExpr], res_consts: Sequence[Fraction],
                  cap: int = CATALOG_CAP) -> list[FnExpr]:
    """Close under pairwise joins/meets and residuation by the given
    constants, to depth two, keeping the ramp first and capping the size."""
    def one_round(pool: list[FnExpr], pair_pool: list[FnExpr]) -> list[FnExpr]:
        fresh = []
        for a in pair_pool:
            for b in pool:
                if a is not b:
                    fresh.append(Join(a, b))
                    fresh.append(Meet(a, b))
        for c in res_consts:
            for b in pool:
                fresh.append(Res(c, b))
        return fresh

    depth1 = one_round(list(base), list(base))
    depth2 = one_round(depth1, [base[0]])
    return (list(base) + depth1 + depth2)[: cap * 4]


def build_catalog(exprs: Sequence[FnExpr], t: TNorm, depth: int,
                  pin_one: bool, cap: int = CATALOG_CAP) -> list[FunctionDescriptor]:
    """Describe the expressions, deduplicating by descriptor content.

    A shallow first pass (a dozen samples plus the exact tail and infimum)
    screens out the heavy redundancy the closure produces, so full-depth
    descriptors are only computed for survivors.  The first expression is
    the target function and always survives in first position.
    """
    light_depth = min(depth, 12)
    light_seen = set()
    chosen: list[FnExpr] = []
    for e in exprs:
        d = describe(e, t, light_depth, pin_one)
        if d.key() not in light_seen:
            light_seen.add(d.key())
            chosen.append(e)
        if len(chosen) >= cap:
            break
    out: list[FunctionDescriptor] = []
    full_seen = set()
    for i, e in enumerate(chosen):
        d = describe(e, t, depth, pin_one, label=f"w{i}")
        if d.key() not in full_seen:
            full_seen.add(d.key())
            out.append(d)
    return out


# ---------------------------------------------------------------------------
# the proof script
# ---------------------------------------------------------------------------

@dataclass
class ClaimRecord:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class CounterexampleReport:
    variant: Variant
    condition_s: bool
    certified: bool
    routed_to_plain: bool
    p: Fraction
    q: Fraction | None
    t_par: Fraction
    s_par: Fraction
    depth: int
    catalog_size: int
    step1_value: Fraction
    step1_exact: bool
    step1_witness: str
    step2_bound: Fraction
    step2_details: list
    coincide_on_catalog: bool | None
    verdict: str
    claims: list[ClaimRecord] = field(default_factory=list)

    @property
    def all_claims_ok(self) -> bool:
        return all(c.ok for c in self.claims)


VIOLATION = "VIOLATION"
NO_VIOLATION_FOUND = "NO_VIOLATION_FOUND"
NO_VIOLATION_EXPECTED = "NO_VIOLATION_EXPECTED"


def _locate_block(t: TNorm, t_par: Fraction, s_par: Fraction) -> Block:
    for b in t.blocks:
        if b.lo < t_par < b.hi and b.lo < s_par < b.hi:
            return b
    raise PreconditionError(
        "both parameters must lie strictly inside one ordinal-sum block")


def run_counterexample(tnorm: TNorm, t_par, s_par, depth: int = 1000,
                       variant: Variant = Variant.PLAIN,
                       epsilon=Fraction(1, 8),
                       catalog_exprs: Sequence[FnExpr] | None = None) -> CounterexampleReport:
    """Execute the associativity-failure script as exact claims.

    For a t-norm whose residuum is continuous off the diagonal the verdict is
    NO_VIOLATION_EXPECTED and the two sides are merely probed (they coincide
    on the catalog).  Otherwise the parameters must sit strictly inside a
    Lukasiewicz block away from zero with t (x) s equal to its left endpoint;
    then the left side evaluates to exactly 1 on the ramp witness while the
    right side is certified to stay at or below the endpoint, and the
    verdict is VIOLATION.
    """
    t_par, s_par = as_fraction(t_par), as_fraction(s_par)
    epsilon = as_fraction(epsilon)
    if not (ZERO < t_par < ONE and ZERO < s_par < ONE):
        raise PreconditionError("parameters must lie strictly inside (0, 1)")
    if depth < 2:
        raise PreconditionError("truncation depth must be at least 2")

    routed = False
    if variant is Variant.BOUNDED and is_lukasiewicz_shape(tnorm):
        # for this shape every saturated prefilter is bounded and the bounded
        # structures are declared equal to the plain ones
        variant = Variant.PLAIN
        routed = True

    s_holds, _ = check_condition_s(tnorm)
    p = tnorm.tensor(t_par, s_par)
    q: Fraction | None = None
    certified = False
    if not s_holds:
        block = _locate_block(tnorm, t_par, s_par)
        if block.kind is not BlockKind.LUKASIEWICZ:
            raise PreconditionError("the parameters' block must be Lukasiewicz-type")
        if block.lo == ZERO:
            raise PreconditionError("the parameters' block must not touch 0")
        if p != block.lo:
            raise PreconditionError(
                f"t (x) s = {p} must equal the block's left endpoint {block.lo}")
        q = block.hi
        certified = True
    if variant is Variant.BOUNDED:
        if not (ZERO < epsilon < p):
            raise PreconditionError("epsilon must lie strictly between 0 and p")

    claims: list[ClaimRecord] = []
    pin_one = variant is Variant.FILTER
    if catalog_exprs is None:
        base = default_catalog_exprs(p, t_par, s_par, q, variant, epsilon)
        exprs = close_catalog(base, [p, t_par, s_par])
    else:
        exprs = list(catalog_exprs)
        if not exprs:
            raise PreconditionError("an explicit catalog must be nonempty")
    catalog = build_catalog(exprs, tnorm, depth, pin_one)
    gamma = catalog[0]

    # the first extension collapses to the threshold at p: residuation by s
    # after residuation by t equals residuation by t (x) s, checked on every
    # catalog member
    first_ok = True
    for d in catalog:
        lhs = tnorm.residuum(s_par, tnorm.residuum(t_par, d.global_inf))
        rhs = tnorm.residuum(p, d.global_inf)
        if lhs != rhs:
            first_ok = False
            claims.append(ClaimRecord("first-extension-threshold", False,
                                      f"{d.label}: {lhs} != {rhs}"))
            break
    if first_ok:
        claims.append(ClaimRecord("first-extension-threshold", True,
                                  f"checked on {len(catalog)} descriptors"))

    # step 1: the left side is the coreflection of (p residuated into the
    # tail semifilter); the ramp lies in its full-degree level and realizes 1
    tail_eval = TailSemifilter(bounded=variant is Variant.BOUNDED)
    left_side = Coreflected(Residuated(p, tail_eval))
    step1_value, step1_exact, witness = left_side.catalog_value(gamma, catalog, tnorm)
    claims.append(ClaimRecord("step1-ramp-admissible", step1_exact,
                              f"tail liminf {gamma.tail_liminf} vs p = {p}"))

    # step 2
    candidates = [d for d in catalog if d.tail_liminf >= p]
    details = []
    if certified:
        # any admissible witness eventually clears p on the sampled points,
        # where the residuum into the ramp collapses across the idempotent p
        # to the ramp's value, at most p; so p bounds the right side
        collapse_ok = True
        for d in candidates:
            ms = [m for m in range(1, depth + 1)
                  if d.sample(m) >= p > gamma.sample(m)]
            cert = p
            for m in ms:
                collapsed = tnorm.residuum(d.sample(m), gamma.sample(m))
                if collapsed != gamma.sample(m):
                    collapse_ok = False
                    claims.append(ClaimRecord(
                        "step2-residuum-collapse", False,
                        f"{d.label} at m={m}: {collapsed} != {gamma.sample(m)}"))
                cert = min(cert, collapsed)
            details.append((d.label, cert, len(ms)))
        if collapse_ok:
            claims.append(ClaimRecord(
                "step2-residuum-collapse", True,
                f"collapse exact on {len(candidates)} candidates"))
        step2_bound = p
        coincide = None
    else:
        # probe mode: no collapse is available, so just sample both sides
        step2_bound = ZERO
        for d in candidates:
            v = sampled_sub_bound(d, gamma, tnorm)
            details.append((d.label, v, 0))
            step2_bound = max(step2_bound, v)
        coincide = step2_bound == step1_value

    if certified:
        verdict = VIOLATION if step1_exact and step1_value > step2_bound \
            else NO_VIOLATION_FOUND
    else:
        verdict = NO_VIOLATION_EXPECTED

    return CounterexampleReport(
        variant=variant, condition_s=s_holds, certified=certified,
        routed_to_plain=routed, p=p, q=q, t_par=t_par, s_par=s_par,
        depth=depth, catalog_size=len(catalog),
        step1_value=step1_value, step1_exact=step1_exact, step1_witness=witness,
        step2_bound=step2_bound, step2_details=details,
        coincide_on_catalog=coincide, verdict=verdict, claims=claims)
