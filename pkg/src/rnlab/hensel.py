"""Roots of x^2 + D = 0 (mod p^n): Tonelli-Shanks plus Hensel lifting.

Odd split primes carry two roots at every level, lifted by the Newton step
r <- r - (r^2 + D) * (2r)^-1.  The p = 2 ladder is handled separately:
one root mod 2, two mod 4 (D = 3 mod 4), four mod 2^n for n >= 3
(D = 7 mod 8), lifted by r -> r or r + 2^(n-1).

States store one minimal representative per +/- pair; callers expand the
complements.  On 6000-digit runs this halves the resident root data.
"""

from __future__ import annotations

from dataclasses import dataclass


class HenselError(Exception):
    pass


class CompositeModulusError(HenselError, ValueError):
    """The modulus failed a primality test."""


class NoRootError(HenselError):
    """x^2 + D = 0 is unsolvable at the requested level."""


class NoSplitError(HenselError):
    """-D is a quadratic non-residue: the odd prime does not split."""


_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin with a fixed witness set (deterministic below 3.3e24)."""
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def legendre(a: int, p: int) -> int:
    ls = pow(a % p, (p - 1) // 2, p)
    return -1 if ls == p - 1 else ls


def sqrt_mod_p(a: int, p: int) -> tuple[int, int] | None:
    """The two square roots of a modulo an odd prime p, or None.

    Uses the p = 3 (mod 4) shortcut when available, else Tonelli-Shanks
    with the smallest non-residue as witness (deterministic, so certified
    paths are reproducible).
    """
    if p == 2 or p % 2 == 0:
        raise ValueError("p must be an odd prime")
    if not is_probable_prime(p):
        raise CompositeModulusError(f"{p} is not prime")
    a %= p
    if a == 0:
        raise ValueError("a must be coprime to p")
    if legendre(a, p) != 1:
        return None
    if p % 4 == 3:
        r = pow(a, (p + 1) // 4, p)
    else:
        q, s = p - 1, 0
        while q % 2 == 0:
            q //= 2
            s += 1
        z = 2
        while legendre(z, p) != -1:
            z += 1
        c = pow(z, q, p)
        r = pow(a, (q + 1) // 2, p)
        t = pow(a, q, p)
        m = s
        while t != 1:
            t2i, i = t, 0
            for i in range(1, m):
                t2i = t2i * t2i % p
                if t2i == 1:
                    break
            bmul = pow(c, 1 << (m - i - 1), p)
            r = r * bmul % p
            c = bmul * bmul % p
            t = t * c % p
            m = i
    assert r * r % p == a
    return (r, p - r) if r <= p - r else (p - r, r)


@dataclass(frozen=True)
class LiftState:
    """Roots of x^2 + D = 0 (mod p^n), one stored per +/- pair."""

    p: int
    D: int
    n: int
    min_roots: tuple[int, ...]

    @property
    def modulus(self) -> int:
        return self.p ** self.n

    def all_roots(self) -> tuple[int, ...]:
        mod = self.modulus
        roots = set(self.min_roots)
        roots.update(mod - r for r in self.min_roots)
        return tuple(sorted(roots))

    def root_count(self) -> int:
        return len(self.all_roots())

    def verify(self) -> None:
        mod = self.modulus
        for r in self.min_roots:
            if not 0 < r < mod or (r * r + self.D) % mod != 0:
                raise HenselError(f"invalid root {r} at level {self.n}")


def lift_step_odd(state: LiftState) -> LiftState:
    """Lift every root one level: r <- r - (r^2 + D) * (2r)^-1 (mod p^(n+1)).

    The inverse is taken with extended gcd (pow(., -1, mod)), which needs
    no primality of the composite modulus.
    """
    p, D = state.p, state.D
    mod = state.p ** (state.n + 1)
    lifted = []
    for r in state.min_roots:
        r2 = (r - (r * r + D) * pow(2 * r, -1, mod)) % mod
        lifted.append(min(r2, mod - r2))
    out = LiftState(p=p, D=D, n=state.n + 1, min_roots=tuple(sorted(lifted)))
    out.verify()
    return out


def _two_initial(D: int, n: int) -> LiftState:
    if D % 2 == 0:
        raise ValueError("p = 2 requires odd D")
    if n == 1:
        return LiftState(p=2, D=D, n=1, min_roots=(1,))
    if D % 4 != 3:
        raise NoRootError(f"x^2 = -{D} (mod 4) unsolvable (D = {D % 4} mod 4)")
    if n == 2:
        return LiftState(p=2, D=D, n=2, min_roots=(1,))
    if D % 8 != 7:
        raise NoRootError(f"x^2 = -{D} (mod 8) unsolvable (D = {D % 8} mod 8)")
    return LiftState(p=2, D=D, n=3, min_roots=(1, 3))


def lift_two_step(state: LiftState) -> LiftState:
    """One 2-adic lift; the ladder widens at levels 2 and 3."""
    D, n = state.D, state.n
    if n < 3:
        return _two_initial(D, n + 1)
    mod2 = 2 ** (n + 1)
    lifted = []
    for r in state.min_roots:
        # exactly one of r, r + 2^(n-1) survives mod 2^(n+1)
        r2 = r if (r * r + D) % mod2 == 0 else r + 2 ** (n - 1)
        lifted.append(min(r2, mod2 - r2))
    out = LiftState(p=2, D=D, n=n + 1, min_roots=tuple(sorted(lifted)))
    out.verify()
    return out


def lift_two(D: int, n: int) -> LiftState:
    """All roots of x^2 + D = 0 (mod 2^n)."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    state = _two_initial(D, min(n, 3))
    while state.n < n:
        state = lift_two_step(state)
    state.verify()
    return state


def roots_mod_pn(D: int, p: int, n: int) -> LiftState:
    """Full root set of x^2 + D = 0 (mod p^n) for a prime p not dividing D."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not is_probable_prime(p):
        raise CompositeModulusError(f"{p} is not prime")
    if D % p == 0:
        raise ValueError(f"p = {p} divides D = {D}")
    if p == 2:
        return lift_two(D, n)
    if legendre(-D % p, p) != 1:
        raise NoSplitError(f"(-{D}|{p}) = -1: no roots at any level")
    pair = sqrt_mod_p(-D % p, p)
    state = LiftState(p=p, D=D, n=1, min_roots=(pair[0],))
    state.verify()
    while state.n < n:
        state = lift_step_odd(state)
    return state
