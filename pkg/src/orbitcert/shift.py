"""The weighted bilateral shift on finitely supported exact vectors in l2(Z).

The shift sends e_n to e_{n-1} with weight 1 for n <= 0 and weight 2 for
n > 0.  It is invertible; inverse steps through positive indices divide by 2,
which is the decay every later construction relies on.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, List, Tuple

from orbitcert.exact import ComplexRational, rational_from_str, rational_to_str


class SparseVector:
    """Finitely supported vector indexed by Z with Gaussian-rational entries.

    Zero coefficients are never stored; equality is coefficient-wise.
    """

    __slots__ = ("entries",)

    def __init__(self, entries: Dict[int, ComplexRational] | None = None):
        cleaned = {}
        if entries:
            for n, c in entries.items():
                if not isinstance(c, ComplexRational):
                    c = ComplexRational(c)
                if not c.is_zero():
                    cleaned[int(n)] = c
        self.entries = cleaned

    @staticmethod
    def basis(n: int) -> "SparseVector":
        return SparseVector({n: ComplexRational(1)})

    def __getitem__(self, n: int) -> ComplexRational:
        return self.entries.get(n, ComplexRational(0))

    def __eq__(self, other) -> bool:
        return isinstance(other, SparseVector) and self.entries == other.entries

    def __hash__(self):
        return hash(frozenset(self.entries.items()))

    def __bool__(self) -> bool:
        return bool(self.entries)

    def __add__(self, other: "SparseVector") -> "SparseVector":
        out = dict(self.entries)
        for n, c in other.entries.items():
            out[n] = out.get(n, ComplexRational(0)) + c
        return SparseVector(out)

    def __sub__(self, other: "SparseVector") -> "SparseVector":
        out = dict(self.entries)
        for n, c in other.entries.items():
            out[n] = out.get(n, ComplexRational(0)) - c
        return SparseVector(out)

    def scale(self, a: ComplexRational) -> "SparseVector":
        return SparseVector({n: a * c for n, c in self.entries.items()})

    def support(self) -> List[int]:
        return sorted(self.entries)

    def restrict(self, lo: int, hi: int) -> "SparseVector":
        return SparseVector({n: c for n, c in self.entries.items() if lo <= n <= hi})

    def max_abs_index(self) -> int:
        """Largest |n| over the support; 0 for the zero vector."""
        if not self.entries:
            return 0
        return max(abs(n) for n in self.entries)

    def to_json(self) -> dict:
        return {
            "type": "sparse_vector",
            "entries": [
                [n, rational_to_str(c.re), rational_to_str(c.im)]
                for n, c in sorted(self.entries.items())
            ],
        }

    @staticmethod
    def from_json(obj: dict) -> "SparseVector":
        if obj.get("type") != "sparse_vector":
            raise ValueError("expected a sparse_vector record")
        return SparseVector(
            {
                int(n): ComplexRational(rational_from_str(re), rational_from_str(im))
                for n, re, im in obj["entries"]
            }
        )

    def __repr__(self) -> str:
        items = ", ".join(f"{n}: {c!r}" for n, c in sorted(self.entries.items()))
        return f"SparseVector({{{items}}})"


def weight(n: int) -> int:
    """Shift weight: 1 for n <= 0, 2 for n > 0."""
    return 2 if n > 0 else 1


def _positives_in(a: int, b: int) -> int:
    """Number of integers m with a <= m <= b and m > 0."""
    if b < a:
        return 0
    lo = max(a, 1)
    return max(0, b - lo + 1)


def shift_apply(u: SparseVector, k: int) -> SparseVector:
    """Apply the k-th power of the shift exactly.

    The entry of u at index n lands at index n - k; the accumulated weight is
    a power of 2 counting the positive indices crossed, in closed form, so the
    cost is independent of |k|.
    """
    if k == 0:
        return SparseVector(dict(u.entries))
    out: Dict[int, ComplexRational] = {}
    if k > 0:
        for n, c in u.entries.items():
            p = _positives_in(n - k + 1, n)
            out[n - k] = c * (2**p)
    else:
        m = -k
        half = Fraction(1, 2)
        for n, c in u.entries.items():
            p = _positives_in(n + 1, n + m)
            out[n + m] = c * ComplexRational(half**p)
    return SparseVector(out)


def inner(u: SparseVector, v: SparseVector) -> ComplexRational:
    """Hilbert pairing sum u(n) * conj(v(n)), exact."""
    if len(u.entries) > len(v.entries):
        return inner(v, u).conj()
    total = ComplexRational(0)
    for n, c in u.entries.items():
        d = v.entries.get(n)
        if d is not None:
            total = total + c * d.conj()
    return total


def norm2(u: SparseVector) -> Fraction:
    """Squared l2 norm; the norm itself is never materialized."""
    total = Fraction(0)
    for c in u.entries.values():
        total += c.abs2()
    return total


def norm_monotonicity_report(
    u: SparseVector, n_lo: int, n_hi: int
) -> List[Tuple[int, Fraction, bool]]:
    """Exact squared norms of the shifted orbit over a window.

    Returns (n, norm2 of the n-th shift of u, strict) rows for n in
    [n_lo, n_hi], where strict is True iff the squared norm strictly
    increases from n to n + 1 (exact comparison).
    """
    if n_lo > n_hi:
        raise ValueError("n_lo must not exceed n_hi")
    norms = [norm2(shift_apply(u, n)) for n in range(n_lo, n_hi + 2)]
    return [
        (n_lo + i, norms[i], norms[i + 1] > norms[i]) for i in range(n_hi - n_lo + 1)
    ]
