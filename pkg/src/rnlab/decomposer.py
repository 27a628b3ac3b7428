"""Decompose a solution of p^n | x^2 + D over a base solution x0^2 + D = p^n0.

Writes gamma = x + sqrt(-D) (halved for p = 2) as beta^k * mu or
conj(beta)^k * mu by attempted exact division, with k = 5j and
j = floor(n/(5*n0)).  Exactly one branch divides; the resulting mu
satisfies beta^k mu - conj(beta)^k conj(mu) = +/- lambda, and its norm
carries exactly the p-power p^l (l = n - n0*k) times the cofactor m.
The audit then replays the downstream inequality chain on the instance
with exact norms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from mpmath import iv

from . import rigor
from .certifier import AUDIT_CONSTANTS, HugeSolutionCertificate
from .pade import build_diagonal, eval_at_z0, normalize
from .quadring import QuadInt, lambda_element


class PreconditionFailError(ValueError):
    pass


class NeitherBranchError(RuntimeError):
    """Neither beta^k nor conj(beta)^k divides gamma (should be impossible
    for valid inputs)."""


class BothBranchesVanishError(RuntimeError):
    """Q mu - P conj(mu) vanished for both g values (should be impossible)."""


@dataclass(frozen=True)
class Decomposition:
    D: int
    p: int
    x0: int
    n0: int
    x: int
    n: int
    j: int
    k: int
    l: int
    branch: str  # "plus" (gamma in (beta^k)) or "minus"
    sign: int  # beta^k mu - conj(beta)^k conj(mu) = sign * lambda
    beta: QuadInt
    gamma: QuadInt
    mu: QuadInt
    lam: QuadInt
    m: int
    norm_exponent: int  # norm(mu) = p^norm_exponent * m


def decompose(D: int, p: int, x0: int, n0: int, x: int, n: int) -> Decomposition:
    """Produce the (j, branch, mu) decomposition with full norm accounting."""
    if x0 < 1 or n0 < 1 or x < 1 or n < 1:
        raise PreconditionFailError("x0, n0, x, n must be positive")
    if x0 * x0 + D != p ** n0:
        raise PreconditionFailError(
            f"({x0}, {n0}) does not solve x^2 + {D} = {p}^n0")
    if D % p == 0:
        raise PreconditionFailError(f"p = {p} divides D = {D}")
    if n <= 5 * n0:
        raise PreconditionFailError(f"need n > 5*n0 = {5 * n0}, got n = {n}")
    pn = p ** n
    if (x * x + D) % pn != 0:
        raise PreconditionFailError(f"{p}^{n} does not divide x^2 + {D}")

    j = n // (5 * n0)
    k = 5 * j
    l = n - n0 * k
    assert 0 <= l < 5 * n0
    m = (x * x + D) // pn

    if p == 2:
        beta = QuadInt.half(x0, 1, D)
        gamma = QuadInt.half(x, 1, D)
        norm_exponent = l + 2 * k - 2  # norm(gamma) = 2^(n-2) m
    else:
        beta = QuadInt.of(x0, 1, D)
        gamma = QuadInt.of(x, 1, D)
        norm_exponent = l
    lam = lambda_element(D, p)

    beta_k = beta ** k
    beta_bar_k = beta.conj() ** k
    mu_plus = gamma.exact_div(beta_k)
    mu_minus = gamma.exact_div(beta_bar_k)
    if mu_plus is not None and mu_minus is not None:
        raise RuntimeError(
            f"both branches divide gamma at n = {n} (exclusivity broken)")
    if mu_plus is not None:
        branch, sign, mu = "plus", 1, mu_plus
    elif mu_minus is not None:
        # gamma = conj(beta)^k mu'; the stated identity takes mu = conj(mu')
        branch, sign, mu = "minus", -1, mu_minus.conj()
    else:
        raise NeitherBranchError(f"no branch divides gamma at n = {n}")

    if beta_k * mu - beta_bar_k * mu.conj() != sign * lam:
        raise NeitherBranchError(f"branch identity failed at n = {n}")
    if mu.norm() != p ** norm_exponent * m:
        raise NeitherBranchError(f"norm accounting failed at n = {n}")
    return Decomposition(D=D, p=p, x0=x0, n0=n0, x=x, n=n, j=j, k=k, l=l,
                         branch=branch, sign=sign, beta=beta, gamma=gamma,
                         mu=mu, lam=lam, m=m, norm_exponent=norm_exponent)


@dataclass(frozen=True)
class AuditReport:
    j: int
    g: int
    k: int
    r: int
    nonzero_this_g: bool
    nonzero_other_g: bool
    backbone_exact: bool
    combination_norm: int
    ii_ok: bool
    ii_applicable: bool
    iii_ok: bool
    nine_tenths_ok: bool
    q_lambda_ok: bool
    margins: dict[str, float]

    @property
    def nonzero_some_g(self) -> bool:
        return self.nonzero_this_g or self.nonzero_other_g


def _combination(dec: Decomposition, g: int):
    """(Q mu - P conj(mu), ev_q, E4) for the starred system at (j, g)."""
    sys = normalize(build_diagonal(dec.j, g))
    r, k = sys.r, sys.k
    ev_p = eval_at_z0(sys.P, dec.beta, r, dec.lam)
    ev_q = eval_at_z0(sys.Q, dec.beta, r, dec.lam)
    ev_e = eval_at_z0(sys.E, dec.beta, k - r - 1, dec.lam)
    e4 = dec.beta ** k * ev_p - dec.beta.conj() ** k * ev_q
    expected = sys.identity_sign() * (dec.lam ** (2 * r + 1)) * ev_e
    assembled_ok = e4 == expected
    z = ev_q * dec.mu - ev_p * dec.mu.conj()
    return sys, ev_q, e4, z, assembled_ok


def audit_theorem1_chain(cert: HugeSolutionCertificate, dec: Decomposition,
                         g: int) -> AuditReport:
    """Replay the cofactor-bound inequality chain on one decomposition.

    With exact norms throughout: (i) Q mu - P conj(mu) is nonzero for at
    least one g; (ii) |beta|^k <= |Q||lambda| + |E||conj(mu)| on this
    instance; (iii) m >= |mu|^2 / p^(5*n0 - 1).  The exact identity
    beta^k (Q mu - P conj(mu)) = sign * Q lambda - E conj(mu) is asserted
    before any of the numeric comparisons.

    The nine-tenths and the 0.238074-step checks are reported as well;
    they rely on the content growth of the normalized systems and are
    claimed only for large j.
    """
    if g not in (0, 1):
        raise ValueError(f"g must be 0 or 1, got {g}")
    if cert.D != dec.D or cert.p != dec.p:
        raise ValueError("certificate and decomposition disagree on (D, p)")
    sys, ev_q, e4, z, assembled_ok = _combination(dec, g)
    _, _, _, z_other, assembled_other = _combination(dec, 1 - g)
    if not (assembled_ok and assembled_other):
        raise RuntimeError("assembled identity failed (internal bug)")
    if z.is_zero() and z_other.is_zero():
        raise BothBranchesVanishError(
            f"Q mu - P conj(mu) = 0 for both g at n = {dec.n}")

    k, r = sys.k, sys.r
    beta_norm = dec.beta.norm()
    backbone = (dec.beta ** k * z ==
                dec.sign * ev_q * dec.lam - e4 * dec.mu.conj())

    n_q = ev_q.norm()
    n_lam = dec.lam.norm()
    n_e4 = e4.norm()
    n_mu = dec.mu.norm()
    lhs_sq = beta_norm ** k

    # (ii)  |beta|^k <= sqrt(a) + sqrt(b) with a = nQ*nLam, b = nE*nMu,
    # decided entirely in integers by isolating the cross square root.
    a = n_q * n_lam
    b = n_e4 * n_mu
    if lhs_sq <= a + b:
        ii_ok = True
    else:
        t = lhs_sq - a - b
        ii_ok = t * t <= 4 * a * b

    # (iii)  m * p^(5*n0 - 1) >= norm(mu)
    gap = AUDIT_CONSTANTS.p_pow_gap(dec.n0)
    iii_ok = dec.m * dec.p ** gap >= n_mu

    # informational: (|Q||lambda|)^2 < (9/10)^2 |beta|^(2k)
    nine_tenths_ok = a * 100 < 81 * lhs_sq

    # informational: (|Q||lambda|)^2 < 0.238074^2 * 89.3445^(2j) * |beta|^(2r+0.9746)
    def lhs_builder():
        return iv.mpf(a)

    coeff = (AUDIT_CONSTANTS.q_lambda_coeff ** 2
             * Fraction(893445, 10 ** 4) ** (2 * dec.j))
    bexp = Fraction(r) + AUDIT_CONSTANTS.beta_exp

    def rhs_builder():
        return (rigor.iv_fraction(coeff)
                * rigor.iv_pow(Fraction(beta_norm), bexp))

    q_lambda_ok = rigor.decide(lhs_builder, rhs_builder) is rigor.Comparison.LESS

    def flog10(value: int) -> float:
        return math.log10(value) if value > 0 else -math.inf

    margins = {
        "ii_log10_slack": (flog10(a + b) - flog10(lhs_sq)) / 2,
        "iii_log10_slack": flog10(dec.m * dec.p ** gap) - flog10(n_mu),
        "nine_tenths_log10_slack": (flog10(81 * lhs_sq) - flog10(a * 100)) / 2,
    }
    return AuditReport(j=dec.j, g=g, k=k, r=r,
                       nonzero_this_g=not z.is_zero(),
                       nonzero_other_g=not z_other.is_zero(),
                       backbone_exact=backbone,
                       combination_norm=z.norm(),
                       ii_ok=ii_ok, ii_applicable=not z.is_zero(),
                       iii_ok=iii_ok, nine_tenths_ok=nine_tenths_ok,
                       q_lambda_ok=q_lambda_ok, margins=margins)
