"""Exact integer arithmetic underlying the parity obstructions.

All functions are total on machine-width naturals; arguments beyond 2**63
raise instead of silently wrapping.
"""

NAT_LIMIT = 2**63


def _check_nat(m: int, name: str = "argument") -> int:
    if isinstance(m, bool) or not isinstance(m, int):
        raise TypeError(f"{name} must be an integer, got {type(m).__name__}")
    if m < 0:
        raise ValueError(f"{name} must be nonnegative, got {m}")
    if m > NAT_LIMIT:
        raise ValueError(f"{name} out of range (limit 2**63): {m}")
    return m


def nu(m: int) -> int:
    """Largest e such that 2**e divides m (m >= 1)."""
    _check_nat(m, "m")
    if m == 0:
        raise ValueError("2-adic valuation is undefined at 0")
    return (m & -m).bit_length() - 1


def alpha(m: int) -> int:
    """Number of ones in the binary expansion of m."""
    _check_nat(m, "m")
    return m.bit_count()


def phi(n: int) -> int:
    """Count of integers 1 <= j <= n with j mod 8 in {0, 1, 2, 4}."""
    _check_nat(n, "n")
    if n == 0:
        raise ValueError("phi is undefined at 0")
    blocks, rem = divmod(n, 8)
    return 4 * blocks + sum(1 for j in (1, 2, 4) if j <= rem)


def epsilon(n: int) -> int:
    """1 if n is 1, 3 or 7 (the multiplicative spheres), else 0."""
    _check_nat(n, "n")
    return 1 if n in (1, 3, 7) else 0


def binom_mod2(n: int, k: int) -> int:
    """C(n, k) mod 2 by the submask rule: odd iff the bits of k lie in n."""
    _check_nat(n, "n")
    _check_nat(k, "k")
    if k > n:
        return 0
    return 1 if n & k == k else 0


def hurwitz_radon_rho(m: int) -> int:
    """Hurwitz-Radon number rho(m).

    Writing nu(m) = 4d + c with 0 <= c <= 3, rho(m) = 2**c + 8d.  This is the
    largest k admitting a non-singular bilinear map R^k x R^m -> R^m.
    """
    _check_nat(m, "m")
    if m == 0:
        raise ValueError("Hurwitz-Radon number is undefined at 0")
    d, c = divmod(nu(m), 4)
    return 2**c + 8 * d


def hr_bilinear_exists(k: int, m: int) -> bool:
    """True iff a non-singular bilinear map R^k x R^m -> R^m exists.

    Equivalent, for k >= 2, to nu(m) >= phi(k - 1).
    """
    _check_nat(k, "k")
    _check_nat(m, "m")
    if k < 1 or m < 1:
        raise ValueError("both dimensions must be positive")
    return k <= hurwitz_radon_rho(m)
