"""Exact Pade approximants to (1-z)^k and their certified bounds.

Two families are built from explicit binomial sums:

* the general three-parameter triple (P, Q, E) with
  P - (1-z)^(B+C+1) Q = z^(A+C+1) E, and
* the diagonal family with k = 5j, r = 4j - g, g in {0, 1}, normalized so
  that Q has positive coefficients, where
  P - (1-z)^k Q = (-1)^r z^(2r+1) E.

The diagonal triple equals (-1)^r times the general one at A = C = r,
B = k - r - 1 (E is unchanged); both conventions are forced by their
identities, which are re-verified by exact polynomial arithmetic before a
system is handed out.

All bound checks compare exact integers (denominators cleared), or fall
back to directed-rounding enclosures when pi or a square root appears.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from mpmath import iv

from . import rigor
from .quadring import QuadInt, lambda_element


class PadeError(RuntimeError):
    pass


class IdentityViolationError(PadeError):
    """A constructed triple failed its defining identity (internal bug)."""


class ContentViolationError(PadeError):
    """Dividing a triple by its content was not exact."""


class NotMonomialError(PadeError):
    """A cross-product residual had coefficients off the expected monomial."""


class BOutOfRangeError(ValueError):
    """Kernel parameter b outside [0.953, 1], where no bound is claimed."""


def binom(n: int, k: int) -> int:
    """C(n, k) with the empty convention: 0 for k < 0 or k > n."""
    if n < 0:
        raise ValueError(f"binom needs n >= 0, got {n}")
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


# ---------------------------------------------------------------------------
# dense exact-integer polynomials


class IntPolynomial:
    """Dense polynomial with exact integer coefficients, index i <-> z^i."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        for c in cs:
            if not isinstance(c, int):
                raise TypeError(f"integer coefficients required, got {c!r}")
        self.coeffs = tuple(cs)

    @classmethod
    def zero(cls) -> IntPolynomial:
        return cls(())

    @classmethod
    def monomial(cls, c: int, degree: int) -> IntPolynomial:
        return cls([0] * degree + [c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __add__(self, other: IntPolynomial) -> IntPolynomial:
        n = max(len(self.coeffs), len(other.coeffs))
        return IntPolynomial(self.coeff(i) + other.coeff(i) for i in range(n))

    def __sub__(self, other: IntPolynomial) -> IntPolynomial:
        n = max(len(self.coeffs), len(other.coeffs))
        return IntPolynomial(self.coeff(i) - other.coeff(i) for i in range(n))

    def __neg__(self) -> IntPolynomial:
        return IntPolynomial(-c for c in self.coeffs)

    def __mul__(self, other: IntPolynomial | int) -> IntPolynomial:
        if isinstance(other, int):
            return IntPolynomial(c * other for c in self.coeffs)
        if self.is_zero() or other.is_zero():
            return IntPolynomial.zero()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return IntPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> IntPolynomial:
        if e < 0:
            raise ValueError("negative polynomial powers are undefined here")
        result = IntPolynomial((1,))
        base = self
        while e > 0:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def shift(self, m: int) -> IntPolynomial:
        """Multiply by z^m."""
        if self.is_zero():
            return self
        return IntPolynomial((0,) * m + self.coeffs)

    def content(self) -> int:
        return math.gcd(*self.coeffs) if self.coeffs else 0

    def exact_scalar_div(self, d: int) -> IntPolynomial | None:
        if d == 0:
            raise ZeroDivisionError
        if any(c % d != 0 for c in self.coeffs):
            return None
        return IntPolynomial(c // d for c in self.coeffs)

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other: object) -> bool:
        if isinstance(other, IntPolynomial):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"IntPolynomial({list(self.coeffs)})"


ONE_MINUS_Z = IntPolynomial((1, -1))


# ---------------------------------------------------------------------------
# system construction


@dataclass(frozen=True)
class PadeSystem:
    """A matched (P, Q, E) triple approximating (1-z)^k.

    kind is "general" (params A, B, C) or "diagonal" (params j, g with
    k = 5j, r = 4j - g).  content is 1 until the diagonal triple has been
    normalized, after which it records the divided-out gcd c_g(j).
    """

    kind: str
    k: int
    r: int
    P: IntPolynomial
    Q: IntPolynomial
    E: IntPolynomial
    content: int = 1
    A: int | None = None
    B: int | None = None
    C: int | None = None
    j: int | None = None
    g: int | None = None

    @property
    def starred(self) -> bool:
        return self.content != 1

    def identity_sign(self) -> int:
        return -1 if (self.kind == "diagonal" and self.r % 2 == 1) else 1

    def remainder_degree(self) -> int:
        if self.kind == "diagonal":
            return 2 * self.r + 1
        return self.A + self.C + 1

    def identity_holds(self) -> bool:
        lhs = self.P - (ONE_MINUS_Z ** self.k) * self.Q
        rhs = (self.E * self.identity_sign()).shift(self.remainder_degree())
        return lhs == rhs


def _general_triple(A: int, B: int, C: int):
    s = A + B + C + 1
    sign_c = -1 if C % 2 else 1
    p = [sign_c * binom(s, i) * binom(A + C - i, A) * (-1 if i % 2 else 1)
         for i in range(C + 1)]
    q = [sign_c * binom(A + C - i, C) * binom(B + i, i) for i in range(A + 1)]
    e = [binom(A + i, i) * binom(s, A + C + i + 1) * (-1 if i % 2 else 1)
         for i in range(B + 1)]
    return IntPolynomial(p), IntPolynomial(q), IntPolynomial(e)


def build_general(A: int, B: int, C: int, allow_zero: bool = False) -> PadeSystem:
    """Three-parameter system with P - (1-z)^(B+C+1) Q = z^(A+C+1) E.

    Parameters are positive; allow_zero=True extends to zero values (used
    only for cross-checks against the diagonal family).
    """
    low = 0 if allow_zero else 1
    if min(A, B, C) < low:
        raise ValueError(f"parameters must be >= {low}: {(A, B, C)}")
    P, Q, E = _general_triple(A, B, C)
    sys = PadeSystem(kind="general", k=B + C + 1, r=A, P=P, Q=Q, E=E,
                     A=A, B=B, C=C)
    if not sys.identity_holds():
        raise IdentityViolationError(f"general identity failed at {(A, B, C)}")
    return sys


def _diagonal_triple(j: int, g: int):
    k, r = 5 * j, 4 * j - g
    p = [binom(9 * j - g, i) * binom(8 * j - 2 * g - i, 4 * j - g)
         * (-1 if i % 2 else 1) for i in range(r + 1)]
    q = [binom(8 * j - 2 * g - i, 4 * j - g) * binom(j + g - 1 + i, i)
         for i in range(r + 1)]
    # the nominal top term i = j + g has binom(9j-g, 9j-g+1) = 0, so the
    # sum is truncated at deg E = k - r - 1
    e = [binom(4 * j - g + i, i) * binom(9 * j - g, 8 * j - 2 * g + i + 1)
         * (-1 if i % 2 else 1) for i in range(j + g)]
    return IntPolynomial(p), IntPolynomial(q), IntPolynomial(e), k, r


def build_diagonal(j: int, g: int) -> PadeSystem:
    """Diagonal system at k = 5j, r = 4j - g, normalized so Q(0) > 0."""
    if j < 1:
        raise ValueError(f"j must be >= 1, got {j}")
    if g not in (0, 1):
        raise ValueError(f"g must be 0 or 1, got {g}")
    P, Q, E, k, r = _diagonal_triple(j, g)
    sys = PadeSystem(kind="diagonal", k=k, r=r, P=P, Q=Q, E=E, j=j, g=g)
    if not sys.identity_holds():
        raise IdentityViolationError(f"diagonal identity failed at {(j, g)}")
    if E.degree != k - r - 1:
        raise IdentityViolationError(f"deg E = {E.degree} != k-r-1 at {(j, g)}")
    return sys


def content(j: int, g: int) -> int:
    """c_g(j): gcd of the diagonal Q coefficients (binomial products)."""
    if j < 1 or g not in (0, 1):
        raise ValueError(f"need j >= 1 and g in {{0,1}}: {(j, g)}")
    acc = 0
    for i in range(4 * j - g + 1):
        acc = math.gcd(acc, binom(8 * j - 2 * g - i, 4 * j - g)
                       * binom(j + g - 1 + i, i))
        if acc == 1:
            break
    return acc


def normalize(sys: PadeSystem) -> PadeSystem:
    """Divide a diagonal triple by c_g(j); all three divisions must be exact."""
    if sys.kind != "diagonal":
        raise ValueError("only diagonal systems are normalized")
    if sys.starred:
        return sys
    c = content(sys.j, sys.g)
    if c == 1:
        return PadeSystem(kind=sys.kind, k=sys.k, r=sys.r, P=sys.P, Q=sys.Q,
                          E=sys.E, content=1, j=sys.j, g=sys.g)
    parts = []
    for name, poly in (("P", sys.P), ("Q", sys.Q), ("E", sys.E)):
        divided = poly.exact_scalar_div(c)
        if divided is None:
            raise ContentViolationError(
                f"content {c} does not divide {name} at (j,g)={(sys.j, sys.g)}")
        parts.append(divided)
    return PadeSystem(kind=sys.kind, k=sys.k, r=sys.r, P=parts[0], Q=parts[1],
                      E=parts[2], content=c, j=sys.j, g=sys.g)


def cross_constant(sys_r: PadeSystem, sys_r1: PadeSystem) -> int:
    """The constant c in P_r Q_{r+1} - Q_r P_{r+1} = c z^(2r+1).

    Both systems must share k and have adjacent degrees r and r + 1.  The
    residual is computed by brute-force polynomial multiplication and must
    be a nonzero monomial of the expected degree.
    """
    if sys_r.k != sys_r1.k:
        raise ValueError(f"mismatched k: {sys_r.k} vs {sys_r1.k}")
    if sys_r1.r != sys_r.r + 1:
        raise ValueError(f"degrees must be adjacent: {sys_r.r}, {sys_r1.r}")
    residual = sys_r.P * sys_r1.Q - sys_r.Q * sys_r1.P
    if sys_r.kind == "diagonal":
        expected = 2 * sys_r.r + 1
    else:
        expected = sys_r.A + sys_r.C + 1
    if residual.is_zero() or residual.degree != expected:
        raise NotMonomialError(
            f"residual degree {residual.degree}, expected {expected}")
    if any(c != 0 for c in residual.coeffs[:-1]):
        raise NotMonomialError("residual is not a monomial")
    return residual.coeffs[-1]


# ---------------------------------------------------------------------------
# evaluation at z0 = lambda/beta inside the quadratic ring


def eval_at_z0(poly: IntPolynomial, beta: QuadInt, deg_scale: int,
               lam: QuadInt | None = None) -> QuadInt:
    """beta^deg_scale * poly(lambda/beta), computed exactly as a QuadInt.

    lambda defaults to 2*sqrt(-D) for an integral beta and sqrt(-D) for a
    half-integral beta (the p = 2 convention).
    """
    if deg_scale < poly.degree:
        raise ValueError(f"deg_scale {deg_scale} < degree {poly.degree}")
    if lam is None:
        lam = lambda_element(beta.D, 2 if beta.is_halved else 3)
    beta_pows = [QuadInt.from_int(1, beta.D)]
    for _ in range(deg_scale):
        beta_pows.append(beta_pows[-1] * beta)
    acc = QuadInt.from_int(0, beta.D)
    if poly.is_zero():
        return acc
    for i in range(poly.degree, -1, -1):
        acc = acc * lam + poly.coeff(i) * beta_pows[deg_scale - i]
    return acc


def assembled_identity_holds(j: int, g: int, beta: QuadInt,
                             lam: QuadInt | None = None) -> bool:
    """Exact check of beta^k P*(z0) - conj(beta)^k Q*(z0) against the
    remainder (-1)^r lambda^(2r+1) beta^(k-2r-1) E*(z0), both sides scaled
    by beta^r so that every term is an algebraic integer."""
    if lam is None:
        lam = lambda_element(beta.D, 2 if beta.is_halved else 3)
    sys = normalize(build_diagonal(j, g))
    k, r = sys.k, sys.r
    ev_p = eval_at_z0(sys.P, beta, r, lam)
    ev_q = eval_at_z0(sys.Q, beta, r, lam)
    ev_e = eval_at_z0(sys.E, beta, k - r - 1, lam)
    lhs = beta ** k * ev_p - beta.conj() ** k * ev_q
    rhs = sys.identity_sign() * (lam ** (2 * r + 1)) * ev_e
    return lhs == rhs


# ---------------------------------------------------------------------------
# literal constants attached to the bounds


@dataclass(frozen=True)
class BoundConstants:
    q_coeff: Fraction = Fraction("0.308")
    q_base: Fraction = Fraction("89.3445")
    e_coeff: Fraction = Fraction("0.377")
    e_base: Fraction = Fraction("7.847")
    raw_base: Fraction = Fraction("262.9407")
    content_base: Fraction = Fraction("2.943")
    kernel_max: Fraction = Fraction("0.044479")
    kernel_integral: Fraction = Fraction("0.114552")
    b_min: Fraction = Fraction("0.953")


BOUNDS = BoundConstants()


def _log10(fr: Fraction) -> float:
    return math.log10(fr.numerator) - math.log10(fr.denominator)


# ---------------------------------------------------------------------------
# bound checks


@dataclass(frozen=True)
class QBoundReport:
    j: int
    D: int
    beta_norm: int
    b: Fraction
    ok: bool
    value_sq: Fraction
    bound_sq: Fraction
    margin_log10: float


def check_q_bound(j: int, D: int, beta_norm: int) -> QBoundReport:
    """Exact check of |Q*(z0)|^2 < (0.308 * 89.3445^j)^2 at g = 0.

    beta is reconstructed from its norm: x0 = sqrt(beta_norm - D) for an
    integral beta, else x0 = sqrt(4*beta_norm - D) for the halved form.
    The comparison clears all denominators into one integer inequality.
    """
    if j < 1:
        raise ValueError(f"j must be >= 1, got {j}")
    b = Fraction(beta_norm - 2 * D, beta_norm)
    if b < BOUNDS.b_min:
        raise BOutOfRangeError(f"b = {b} < 0.953: bound not claimed here")
    x0 = math.isqrt(beta_norm - D)
    if x0 * x0 + D == beta_norm:
        beta = QuadInt.of(x0, 1, D)
        lam = lambda_element(D, 3)
    else:
        x0 = math.isqrt(4 * beta_norm - D)
        if x0 * x0 + D != 4 * beta_norm:
            raise ValueError(f"beta_norm {beta_norm} has no beta over D={D}")
        beta = QuadInt.half(x0, 1, D)
        lam = lambda_element(D, 2)
    sys = normalize(build_diagonal(j, 0))
    ev_q = eval_at_z0(sys.Q, beta, sys.r, lam)
    n_q = ev_q.norm()
    value_sq = Fraction(n_q, beta_norm ** sys.r)
    bound_sq = (BOUNDS.q_coeff * BOUNDS.q_base ** j) ** 2
    # n_q * 10^(6+8j) < 308^2 * 893445^(2j) * beta_norm^r
    lhs = n_q * 10 ** (6 + 8 * j)
    rhs = 308 ** 2 * 893445 ** (2 * j) * beta_norm ** sys.r
    ok = lhs < rhs
    margin = (_log10(bound_sq) - _log10(value_sq)) / 2 if n_q else math.inf
    return QBoundReport(j=j, D=D, beta_norm=beta_norm, b=b, ok=ok,
                        value_sq=value_sq, bound_sq=bound_sq,
                        margin_log10=margin)


@dataclass(frozen=True)
class EBoundReport:
    j: int
    g: int
    ratio: int
    content: int
    raw_ok: bool
    raw_margin_log10: float
    norm_ok: bool
    norm_margin_log10: float
    claimed: bool


def check_e_bound(j: int, g: int) -> EBoundReport:
    """Check the factorial ratio (k+r)!/((k-r-1)!(2r+1)!) = C(k+r, k-r-1)
    against 0.377/sqrt(j) * (9^9/8^8)^j, and the content-normalized ratio
    against 0.377/j * 7.847^j.

    Both are exact integer comparisons (the sqrt(j) is squared away).  The
    derivation behind these bounds is specific to g = 1; for g = 0 the
    report carries claimed=False.
    """
    if j < 1 or g not in (0, 1):
        raise ValueError(f"need j >= 1 and g in {{0,1}}: {(j, g)}")
    k, r = 5 * j, 4 * j - g
    ratio = binom(k + r, k - r - 1)
    c = content(j, g)
    nine9, eight8 = 9 ** 9, 8 ** 8
    # ratio^2 * j < (377/1000)^2 * (9^9/8^8)^(2j)
    raw_lhs = ratio ** 2 * j * 1000 ** 2 * eight8 ** (2 * j)
    raw_rhs = 377 ** 2 * nine9 ** (2 * j)
    raw_ok = raw_lhs < raw_rhs
    # ratio/c * j < (377/1000) * (7847/1000)^j
    norm_lhs = ratio * j * 1000 ** (j + 1)
    norm_rhs = 377 * 7847 ** j * c
    norm_ok = norm_lhs < norm_rhs
    raw_margin = (_log10(Fraction(raw_rhs, raw_lhs)) / 2 if raw_lhs else math.inf)
    norm_margin = _log10(Fraction(norm_rhs, norm_lhs))
    return EBoundReport(j=j, g=g, ratio=ratio, content=c, raw_ok=raw_ok,
                        raw_margin_log10=raw_margin, norm_ok=norm_ok,
                        norm_margin_log10=norm_margin, claimed=(g == 1))


def beta_moment_identity_holds(r: int) -> bool:
    """Exact quadrature of the moment integral of t^r (1-t)^r over [0, 1]
    against r! r! / (2r+1)!."""
    poly = [Fraction(binom(r, i) * (-1 if i % 2 else 1)) for i in range(r + 1)]
    tr = [Fraction(0)] * r + poly  # t^r * (1-t)^r
    integral = sum(c / (i + 1) for i, c in enumerate(tr))
    expected = Fraction(math.factorial(r) ** 2, math.factorial(2 * r + 1))
    return integral == expected


# ---------------------------------------------------------------------------
# kernel extrema: exact rational polynomial analysis on [0, 1]


def _fmul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _fdiff(a: list[Fraction]) -> list[Fraction]:
    return [i * c for i, c in enumerate(a)][1:]


def _feval(a: list[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(a):
        acc = acc * x + c
    return acc


def _fmod(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a = a[:]
    db, lead = len(b) - 1, b[-1]
    while len(a) - 1 >= db and any(a):
        while a and a[-1] == 0:
            a.pop()
        if len(a) - 1 < db:
            break
        factor = a[-1] / lead
        shift = len(a) - 1 - db
        for i, c in enumerate(b):
            a[shift + i] -= factor * c
        a.pop()
    while a and a[-1] == 0:
        a.pop()
    return a


def _sturm_chain(p: list[Fraction]) -> list[list[Fraction]]:
    chain = [p, _fdiff(p)]
    while len(chain[-1]) > 1:
        rem = _fmod(chain[-2], chain[-1])
        if not rem:
            break
        chain.append([-c for c in rem])
    return chain


def _variations(chain: list[list[Fraction]], x: Fraction) -> int:
    signs = []
    for poly in chain:
        v = _feval(poly, x)
        if v:
            signs.append(1 if v > 0 else -1)
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def _count_roots(chain, a: Fraction, b: Fraction) -> int:
    """Distinct real roots in (a, b]."""
    return _variations(chain, a) - _variations(chain, b)


def _interval_eval(coeffs: list[Fraction], lo: Fraction, hi: Fraction):
    """Enclosure of a polynomial over [lo, hi] by interval Horner."""
    acc_lo = acc_hi = coeffs[-1]
    for c in reversed(coeffs[:-1]):
        products = (acc_lo * lo, acc_lo * hi, acc_hi * lo, acc_hi * hi)
        acc_lo, acc_hi = min(products) + c, max(products) + c
    return acc_lo, acc_hi


def _isolate_roots(chain, lo: Fraction, hi: Fraction,
                   tol: Fraction) -> list[tuple[Fraction, Fraction]]:
    """Cover every root of chain[0] in (lo, hi] by intervals of width <= tol.

    A bisection point that is itself a root is emitted as a degenerate
    point interval (the half-open counting convention would otherwise let
    it fall off an interval boundary); the redundant sliver this can leave
    behind only adds an extra covered interval, never loses a root.
    """
    s0 = chain[0]
    out = []
    stack = [(lo, hi)]
    while stack:
        a, b = stack.pop()
        n = _count_roots(chain, a, b)
        if n == 0:
            continue
        if b - a <= tol:
            out.append((a, b))
            continue
        if n == 1:
            # bisect the single root down to tol
            while b - a > tol:
                mid = (a + b) / 2
                if _feval(s0, mid) == 0:
                    out.append((mid, mid))
                    break
                if _count_roots(chain, a, mid) >= 1:
                    b = mid
                else:
                    a = mid
            else:
                out.append((a, b))
            continue
        mid = (a + b) / 2
        if _feval(s0, mid) == 0:
            out.append((mid, mid))
        stack.append((a, mid))
        stack.append((mid, b))
    return sorted(out)


@dataclass(frozen=True)
class KernelReport:
    b: Fraction
    integral: Fraction
    integral_ok: bool
    max_lower: Fraction
    max_upper: Fraction
    max_ok: bool
    critical_intervals: int


def kernel_extrema(b: Fraction) -> KernelReport:
    """Certified extrema of the Q-bound kernels at a given b in [0.953, 1].

    f(t) = (1-t)^4 t (1-2bt+t^2)^2 is maximized over [0, 1] by isolating
    the real roots of f' with a Sturm chain, refining each to a width of
    2^-40, and bounding f over the isolating intervals with exact rational
    interval arithmetic.  h(t) = (1-t)^4 (1-2bt+t^2)^2 is integrated
    exactly.  The enclosures are compared against 0.044479 and 0.114552.
    """
    b = Fraction(b)
    if not BOUNDS.b_min <= b <= 1:
        raise BOutOfRangeError(f"b = {b} outside [0.953, 1]")
    one_minus_t4 = [Fraction(c) for c in (1, -4, 6, -4, 1)]
    quad = [Fraction(1), -2 * b, Fraction(1)]
    h = _fmul(one_minus_t4, _fmul(quad, quad))
    f = _fmul(h, [Fraction(0), Fraction(1)])

    integral = sum(c / (i + 1) for i, c in enumerate(h))
    integral_ok = integral < BOUNDS.kernel_integral

    fp = _fdiff(f)
    chain = _sturm_chain(fp)
    # widen past t = 1 so the endpoint root of f' is interior to the count
    hi = Fraction(9, 8)
    while _feval(fp, hi) == 0:
        hi += Fraction(1, 8)
    assert _feval(fp, Fraction(0)) != 0
    tol = Fraction(1, 2 ** 40)
    intervals = _isolate_roots(chain, Fraction(0), hi, tol)

    max_lower = max(_feval(f, Fraction(0)), _feval(f, Fraction(1)))
    max_upper = max_lower
    kept = 0
    for a, c in intervals:
        a, c = max(a, Fraction(0)), min(c, Fraction(1))
        if a > c:
            continue
        kept += 1
        lo_v, hi_v = _interval_eval(f, a, c)
        max_upper = max(max_upper, hi_v)
        max_lower = max(max_lower, _feval(f, a), _feval(f, c),
                        _feval(f, (a + c) / 2))
    max_ok = max_upper <= BOUNDS.kernel_max
    return KernelReport(b=b, integral=integral, integral_ok=integral_ok,
                        max_lower=max_lower, max_upper=max_upper,
                        max_ok=max_ok, critical_intervals=kept)


# ---------------------------------------------------------------------------
# factorial-ratio inequalities (Stirling-type)


@dataclass(frozen=True)
class FactorialBoundReport:
    A: int
    B: int
    C: int | None
    ok: bool
    margin_log10: float


def factorial_ratio_bounds(A: int, B: int, C: int | None = None
                           ) -> FactorialBoundReport:
    """Certified check of the multinomial bound

        (A+B+C)!/(A!B!C!) < 1/(2 pi) sqrt((A+B+C)/(ABC)) N^N/(A^A B^B C^C)

    and, with C omitted, the two-argument form with 1/sqrt(2 pi).  The left
    side is exact; the right side is enclosed with directed rounding and
    precision is escalated until the comparison is strict.
    """
    if A < 1 or B < 1 or (C is not None and C < 1):
        raise ValueError(f"arguments must be >= 1: {(A, B, C)}")
    if C is None:
        n = A + B
        lhs = Fraction(math.factorial(n), math.factorial(A) * math.factorial(B))
        power = Fraction(n ** n, A ** A * B ** B)
        radicand = Fraction(n, A * B)

        def rhs():
            return (rigor.iv_fraction(power) * iv.sqrt(rigor.iv_fraction(radicand))
                    / iv.sqrt(2 * iv.pi))
    else:
        n = A + B + C
        lhs = Fraction(math.factorial(n),
                       math.factorial(A) * math.factorial(B) * math.factorial(C))
        power = Fraction(n ** n, A ** A * B ** B * C ** C)
        radicand = Fraction(n, A * B * C)

        def rhs():
            return (rigor.iv_fraction(power) * iv.sqrt(rigor.iv_fraction(radicand))
                    / (2 * iv.pi))

    def lhs_builder():
        return rigor.iv_fraction(lhs)

    verdict = rigor.decide(lhs_builder, rhs)
    ok = verdict is rigor.Comparison.LESS
    # informational margin (digits of slack), not part of the certificate
    rhs_est = (_log10(power) + 0.5 * _log10(radicand)
               - (math.log10(2 * math.pi) if C is not None
                  else 0.5 * math.log10(2 * math.pi)))
    return FactorialBoundReport(A=A, B=B, C=C, ok=ok,
                                margin_log10=rhs_est - _log10(lhs))


def q_prefactor_bound(j: int) -> bool:
    """Exact-pi check of (9j)!/((j-1)! ((4j)!)^2) < 3/(8 pi) (3^18 2^-16)^j.

    Rearranged so that pi is the only enclosure: the inequality holds iff
    pi < 3^(18j+1) / (8 * lhs * 2^(16j))."""
    if j < 1:
        raise ValueError(f"j must be >= 1, got {j}")
    num = math.factorial(9 * j)
    den = math.factorial(j - 1) * math.factorial(4 * j) ** 2
    assert num % den == 0
    lhs = num // den
    target = Fraction(3 ** (18 * j + 1), 8 * lhs * 2 ** (16 * j))

    def pi_builder():
        return iv.pi

    def target_builder():
        return rigor.iv_fraction(target)

    return rigor.decide(pi_builder, target_builder) is rigor.Comparison.LESS
