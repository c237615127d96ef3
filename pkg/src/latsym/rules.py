"""Symmetric binary cellular-automaton rules on k-valent neighborhoods.

A rule maps (neighbor sum s, center value c) to the next center value.  Its
integer code packs the table entry for (s, c) into bit 2s + c, the
little-endian reading that makes the classic 3-valent flip rule number 85
and the identity 170.  Rules also carry Birth/Survival and GF(2) polynomial
views; the three representations agree on all inputs by construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

__all__ = [
    "Rule",
    "Gf2Polynomial",
    "count_rules",
    "count_classes",
    "class_representatives",
]


@dataclass(frozen=True)
class Rule:
    """Totalistic-with-memory binary rule on a k-valent neighborhood."""

    k: int
    code: int
    q: int = 2

    def __post_init__(self):
        if self.q != 2:
            raise ValueError("only q = 2 rule tables are supported")
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if not 0 <= self.code < 1 << (2 * self.k + 2):
            raise ValueError(
                f"code {self.code} out of range for k={self.k} "
                f"(need 0 <= code < {1 << (2 * self.k + 2)})")

    # -- construction -------------------------------------------------

    @staticmethod
    def from_code(k: int, code: int) -> "Rule":
        return Rule(k=k, code=code)

    @staticmethod
    def from_bs(k: int, birth, survival) -> "Rule":
        birth = frozenset(birth)
        survival = frozenset(survival)
        for s in birth | survival:
            if not 0 <= s <= k:
                raise ValueError(f"neighbor sum {s} out of range 0..{k}")
        code = 0
        for s in birth:
            code |= 1 << (2 * s)
        for s in survival:
            code |= 1 << (2 * s + 1)
        return Rule(k=k, code=code)

    @staticmethod
    def from_spec(text: str, k: int = 3) -> "Rule":
        """Parse a decimal code ('86') or B/S notation ('B123/S0')."""
        text = text.strip()
        if text.isdigit():
            return Rule.from_code(k, int(text))
        up = text.upper()
        if up.startswith("B") and "/S" in up:
            b_part, s_part = up[1:].split("/S", 1)
            if not all(ch.isdigit() for ch in b_part + s_part):
                raise ValueError(f"bad B/S rule spec {text!r}")
            return Rule.from_bs(k, (int(ch) for ch in b_part),
                                (int(ch) for ch in s_part))
        raise ValueError(f"cannot parse rule spec {text!r}")

    # -- views ---------------------------------------------------------

    def value(self, s: int, c: int) -> int:
        """Next center value for neighbor sum s and center value c."""
        if not 0 <= s <= self.k:
            raise ValueError(f"neighbor sum {s} out of range 0..{self.k}")
        return (self.code >> (2 * s + c)) & 1

    @property
    def table(self) -> tuple[tuple[int, int], ...]:
        """Row (value(s,0), value(s,1)) for s = 0..k."""
        return tuple((self.value(s, 0), self.value(s, 1))
                     for s in range(self.k + 1))

    def flat_table(self) -> tuple[int, ...]:
        """Table in (s, c) row order (0,0), (0,1), (1,0), ..."""
        return tuple((self.code >> i) & 1 for i in range(2 * self.k + 2))

    def to_bs(self) -> tuple[frozenset[int], frozenset[int]]:
        birth = frozenset(s for s in range(self.k + 1) if self.value(s, 0))
        survival = frozenset(s for s in range(self.k + 1) if self.value(s, 1))
        return birth, survival

    def bs_string(self) -> str:
        birth, survival = self.to_bs()
        return ("B" + "".join(str(s) for s in sorted(birth))
                + "/S" + "".join(str(s) for s in sorted(survival)))

    # -- transforms ------------------------------------------------------

    def conjugate(self) -> "Rule":
        """The rule with the two cell values renamed: 1 - f applied to flipped inputs."""
        code = 0
        for s in range(self.k + 1):
            for c in (0, 1):
                v = 1 - self.value(self.k - s, 1 - c)
                code |= v << (2 * s + c)
        return Rule(k=self.k, code=code)

    def is_self_conjugate(self) -> bool:
        return self.conjugate().code == self.code

    def with_valency(self, k: int) -> "Rule":
        """Reinterpret the rule on a k-valent lattice.

        Neighbor sums beyond the original table saturate at the top row, so
        the valency-independent rules (flip, identity) stay flip and
        identity on every lattice.
        """
        if k == self.k:
            return self
        code = 0
        for s in range(k + 1):
            for c in (0, 1):
                code |= self.value(min(s, self.k), c) << (2 * s + c)
        return Rule(k=k, code=code)

    def polynomial(self) -> "Gf2Polynomial":
        if self.k != 3:
            raise ValueError("polynomial form is supported for k = 3 only")
        return Gf2Polynomial.from_rule(self)

    def __str__(self):
        return f"rule {self.code} (k={self.k}, {self.bs_string()})"


# ---------------------------------------------------------------------------
# counting


def count_rules(k: int, q: int = 2) -> int:
    """Number of outer-symmetric local rules: q ** (C(k+q-1, q-1) * q)."""
    if k < 1 or q < 2:
        raise ValueError("need k >= 1 and q >= 2")
    return q ** (comb(k + q - 1, q - 1) * q)


def count_classes(k: int) -> int:
    """Value-swap equivalence classes among binary rules: 2^(2k+1) + 2^k."""
    if k < 1:
        raise ValueError("need k >= 1")
    return 2 ** (2 * k + 1) + 2 ** k


def class_representatives(k: int) -> list[Rule]:
    """Smallest-code member of every value-swap class, in code order."""
    reps = []
    for code in range(1 << (2 * k + 2)):
        rule = Rule(k=k, code=code)
        if code <= rule.conjugate().code:
            reps.append(rule)
    assert len(reps) == count_classes(k)
    return reps


# ---------------------------------------------------------------------------
# GF(2) polynomial view (k = 3)

# sigma_j evaluated on s ones among three binary variables: C(s, j) mod 2
_SIGMA = tuple(tuple(comb(s, j) & 1 for j in range(4)) for s in range(4))


@dataclass(frozen=True)
class Gf2Polynomial:
    """Multilinear polynomial a(σ) + x4 · b(σ) over F2 for a 3-valent rule.

    Coefficient index j = 0 is the constant term, j = 1..3 multiplies the
    elementary symmetric function σ_j of the three outer variables.
    """

    a: tuple[int, int, int, int]
    b: tuple[int, int, int, int]

    @staticmethod
    def from_rule(rule: Rule) -> "Gf2Polynomial":
        # A(s) = table(s, 0), B(s) = table(s, 0) xor table(s, 1); solve the
        # triangular system A(s) = sum_j a_j sigma_j(s) (Zhegalkin transform).
        A = [rule.value(s, 0) for s in range(4)]
        B = [rule.value(s, 0) ^ rule.value(s, 1) for s in range(4)]

        def solve(vals):
            coeff = [0, 0, 0, 0]
            for s in range(4):
                acc = 0
                for j in range(s):
                    acc ^= coeff[j] & _SIGMA[s][j]
                coeff[s] = acc ^ vals[s]
            return tuple(coeff)

        return Gf2Polynomial(a=solve(A), b=solve(B))

    def evaluate(self, x1: int, x2: int, x3: int, x4: int) -> int:
        s1 = (x1 + x2 + x3) & 1
        s2 = (x1 * x2 + x1 * x3 + x2 * x3) & 1
        s3 = (x1 * x2 * x3) & 1
        sig = (1, s1, s2, s3)
        av = 0
        bv = 0
        for j in range(4):
            av ^= self.a[j] & sig[j]
            bv ^= self.b[j] & sig[j]
        return av ^ (x4 & bv)

    def __str__(self):
        # x4-carrying block first, then pure sigma terms; descending sigma
        # index with any constant last, matching the usual presentation
        names = ("1", "σ1", "σ2", "σ3")

        def terms_of(coeff):
            terms = [names[j] for j in (3, 2, 1) if coeff[j]]
            if coeff[0]:
                terms.append("1")
            return terms

        parts = []
        bt = terms_of(self.b)
        if bt == ["1"]:
            parts.append("x4")
        elif bt:
            parts.append("x4(" + " + ".join(bt) + ")")
        parts.extend(terms_of(self.a))
        return " + ".join(parts) if parts else "0"
