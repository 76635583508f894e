"""Log-space factorials and binomial coefficients.

Everything is in nats.  A zero count (e.g. choosing more items than exist)
is reported as ``NEG_INF`` rather than raising, so callers can treat it as
an impossible configuration.
"""

from __future__ import annotations

import math
import threading
from typing import Sequence

NEG_INF = float("-inf")

# Largest N for which integer arithmetic on N is exact in a double.
EXACT_LIMIT = 2**53
LN_EXACT_LIMIT = 53 * math.log(2)

# Falling products with at most this many factors are summed term by term.
_SHORT_PRODUCT = 48


class LogFactorialTable:
    """Cache of ``ln(k!)`` that grows on demand.

    Growth builds a new list and swaps the reference, so concurrent readers
    always see a complete table.
    """

    def __init__(self, size: int = 4096):
        self._values = [0.0, 0.0]
        self._lock = threading.Lock()
        self.extend(size)

    def __len__(self) -> int:
        return len(self._values)

    def extend(self, size: int) -> None:
        with self._lock:
            old = self._values
            if size <= len(old):
                return
            values = old + [math.lgamma(k + 1.0) for k in range(len(old), size)]
            values[0] = values[1] = 0.0
            self._values = values

    def __getitem__(self, k: int) -> float:
        values = self._values
        if k < len(values):
            return values[k]
        if k < (1 << 22):
            self.extend(max(2 * len(values), k + 1))
            return self._values[k]
        return math.lgamma(k + 1.0)


_TABLE = LogFactorialTable()


def ln_factorial(k: int) -> float:
    """Natural log of ``k!``."""
    if k < 0:
        raise ValueError("factorial of a negative number")
    return _TABLE[k]


def _ln_falling(ln_n: float, inv_n: float, k: int) -> float:
    """``ln(N (N-1) ... (N-k+1))`` given ``ln N`` and ``1/N``; assumes ``k <= N``."""
    if k <= _SHORT_PRODUCT:
        return k * ln_n + math.fsum(math.log1p(-j * inv_n) for j in range(1, k))
    # lgamma(N+1) - lgamma(x) with x = N-k+1, Stirling series differenced so
    # the large terms cancel analytically.  Callers guarantee x > 48.
    x = 1.0 / inv_n - k + 1.0
    y = 1.0 / inv_n + 1.0
    main = (x - 0.5) * math.log1p(k / x) + k * (ln_n + math.log1p(inv_n)) - k
    corr = 0.0
    for coef, power in ((1.0 / 12.0, 1), (-1.0 / 360.0, 3), (1.0 / 1260.0, 5), (-1.0 / 1680.0, 7)):
        corr += coef * (y ** -power - x ** -power)
    return main + corr


def ln_binomial(n: int, k: int) -> float:
    """``ln C(n, k)``; ``NEG_INF`` when ``k > n``."""
    if k < 0 or n < 0 or k > n:
        return NEG_INF
    k = min(k, n - k)
    if k == 0:
        return 0.0
    if k == 1:
        return math.log(n)
    if n < len(_TABLE._values) or n < 2 * k:
        return _TABLE[n] - _TABLE[k] - _TABLE[n - k]
    return _ln_falling(math.log(n), 1.0 / n, k) - _TABLE[k]


def ln_binomial_real(ln_n: float, k: int, n: int | None = None) -> float:
    """``ln C(N, k)`` for an integer ``N`` known through ``ln N``.

    When ``N`` is below ``2**53`` the exact integer path is used; pass ``n``
    to avoid reconstructing it from ``ln_n``.  Otherwise the falling product
    ``sum_j [ln N + ln(1 - j/N)] - ln k!`` is evaluated directly.
    """
    if k < 0:
        return NEG_INF
    if k == 0:
        return 0.0
    if n is None and ln_n <= LN_EXACT_LIMIT:
        n = round(math.exp(ln_n))
    if n is not None and n < EXACT_LIMIT:
        return ln_binomial(n, k)
    if ln_n == math.inf:
        return math.inf
    inv_n = math.exp(-ln_n)
    if (k - 1) * inv_n >= 1.0:
        return NEG_INF
    return _ln_falling(ln_n, inv_n, k) - _TABLE[k]


def ln_multinomial(total: int, parts: Sequence[int]) -> float:
    """``ln(total! / prod(part!))``."""
    if sum(parts) != total:
        raise ValueError(f"parts sum to {sum(parts)}, expected {total}")
    if any(p < 0 for p in parts):
        raise ValueError("negative part")
    return _TABLE[total] - math.fsum(_TABLE[p] for p in parts)
