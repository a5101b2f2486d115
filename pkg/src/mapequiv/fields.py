"""Scalar arithmetic over the supported coefficient fields.

Three kinds of field are supported: exact rationals with arbitrary-precision
integers, prime fields GF(p), and an approximate float mode governed by a
single relative epsilon.  Scalars are plain Python values (Fraction for
rationals, int residue in [0, p) for prime fields, float for approx); a
FieldSpec instance supplies the arithmetic on them.

The text grammar accepted by parse() is the interchange format used by
dataset files and all CLI/API output: `[+-]?digits(/digits)?` for the exact
fields, a decimal or scientific literal for approx mode.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import InvalidFieldError, ScalarParseError, ZeroInverseError

Scalar = Union[Fraction, int, float]

RATIONAL = "rational"
PRIME = "prime"
APPROX = "approx"

_EXACT_RE = re.compile(r"[+-]?[0-9]+(/[0-9]+)?\Z")

# Deterministic Miller-Rabin witnesses, valid for every modulus below
# 3.3e24 and therefore for anything fitting a machine word.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_MAX_PRIME = 2**63 - 1


def is_prime(p: int) -> bool:
    """Deterministic primality test for machine-word sized integers."""
    if p < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13):
        if p % q == 0:
            return p == q
    d, r = p - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        if a % p == 0:
            continue
        x = pow(a, d, p)
        if x in (1, p - 1):
            continue
        for _ in range(r - 1):
            x = x * x % p
            if x == p - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """A coefficient field: rationals, GF(p), or epsilon-approximate floats."""

    kind: str
    p: int | None = None
    epsilon: float = 0.0

    @classmethod
    def rational(cls) -> "FieldSpec":
        return cls(RATIONAL)

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        if not isinstance(p, int) or isinstance(p, bool):
            raise InvalidFieldError(f"prime modulus must be an integer, got {p!r}")
        if p > _MAX_PRIME:
            raise InvalidFieldError(f"prime modulus {p} exceeds machine-word bound")
        if not is_prime(p):
            raise InvalidFieldError(f"{p} is not prime")
        return cls(PRIME, p=p)

    @classmethod
    def approx(cls, epsilon: float) -> "FieldSpec":
        try:
            epsilon = float(epsilon)
        except (TypeError, ValueError):
            raise InvalidFieldError(f"epsilon must be a real number, got {epsilon!r}") from None
        if not math.isfinite(epsilon) or epsilon < 0:
            raise InvalidFieldError(f"epsilon must be a finite nonnegative real, got {epsilon!r}")
        return cls(APPROX, epsilon=epsilon)

    @classmethod
    def from_text(cls, text: str) -> "FieldSpec":
        """Parse the CLI grammar: rational | prime:P | approx:EPS."""
        text = text.strip()
        if text == RATIONAL:
            return cls.rational()
        if text.startswith("prime:"):
            try:
                p = int(text[len("prime:"):])
            except ValueError:
                raise InvalidFieldError(f"bad prime field spec {text!r}") from None
            return cls.prime(p)
        if text.startswith("approx:"):
            try:
                eps = float(text[len("approx:"):])
            except ValueError:
                raise InvalidFieldError(f"bad approx field spec {text!r}") from None
            return cls.approx(eps)
        raise InvalidFieldError(f"unknown field spec {text!r}")

    @classmethod
    def from_json(cls, obj) -> "FieldSpec":
        """Parse the dataset-file form: "rational" | {"prime": P} | {"approx": EPS}."""
        if obj == RATIONAL:
            return cls.rational()
        if isinstance(obj, dict) and set(obj) == {PRIME}:
            return cls.prime(obj[PRIME])
        if isinstance(obj, dict) and set(obj) == {APPROX}:
            return cls.approx(obj[APPROX])
        raise InvalidFieldError(f"unrecognized field description {obj!r}")

    def to_json(self):
        if self.kind == RATIONAL:
            return RATIONAL
        if self.kind == PRIME:
            return {PRIME: self.p}
        return {APPROX: self.epsilon}

    def describe(self) -> str:
        if self.kind == RATIONAL:
            return "rational"
        if self.kind == PRIME:
            return f"prime:{self.p}"
        return f"approx:{self.epsilon!r}"

    @property
    def is_exact(self) -> bool:
        return self.kind != APPROX

    # -- element construction ------------------------------------------------

    def zero(self) -> Scalar:
        return self.from_int(0)

    def one(self) -> Scalar:
        return self.from_int(1)

    def from_int(self, i: int) -> Scalar:
        if self.kind == RATIONAL:
            return Fraction(i)
        if self.kind == PRIME:
            return i % self.p
        return float(i)

    def parse(self, text: str) -> Scalar:
        """Parse scalar text to its canonical value in this field."""
        text = text.strip()
        if self.kind == APPROX:
            try:
                value = float(text)
            except ValueError:
                raise ScalarParseError(f"bad float literal {text!r}") from None
            if not math.isfinite(value):
                raise ScalarParseError(f"non-finite float literal {text!r}")
            return value
        if not _EXACT_RE.match(text):
            raise ScalarParseError(f"bad scalar literal {text!r}")
        num_text, _, den_text = text.partition("/")
        num = int(num_text)
        den = int(den_text) if den_text else 1
        if self.kind == RATIONAL:
            if den == 0:
                raise ScalarParseError(f"zero denominator in {text!r}")
            return Fraction(num, den)
        # prime: a/b means a * b^{-1} in GF(p)
        den %= self.p
        if den == 0:
            raise ScalarParseError(f"denominator of {text!r} is zero in GF({self.p})")
        return num % self.p * pow(den, -1, self.p) % self.p

    def format(self, a: Scalar) -> str:
        """Render a scalar in the interchange grammar; inverse of parse()."""
        if self.kind == APPROX:
            return repr(float(a))
        return str(a)

    # -- arithmetic ------------------------------------------------------------

    def add(self, a: Scalar, b: Scalar) -> Scalar:
        if self.kind == PRIME:
            return (a + b) % self.p
        return a + b

    def sub(self, a: Scalar, b: Scalar) -> Scalar:
        if self.kind == PRIME:
            return (a - b) % self.p
        return a - b

    def neg(self, a: Scalar) -> Scalar:
        if self.kind == PRIME:
            return -a % self.p
        return -a

    def mul(self, a: Scalar, b: Scalar) -> Scalar:
        if self.kind == PRIME:
            return a * b % self.p
        return a * b

    def invert(self, a: Scalar) -> Scalar:
        if self.is_zero(a):
            raise ZeroInverseError(f"cannot invert zero (value {self.format(a)})")
        if self.kind == PRIME:
            return pow(a, -1, self.p)
        if self.kind == RATIONAL:
            return 1 / a
        return 1.0 / a

    def div(self, a: Scalar, b: Scalar) -> Scalar:
        return self.mul(a, self.invert(b))

    # -- comparisons -------------------------------------------------------------

    def is_zero(self, a: Scalar) -> bool:
        if self.kind == APPROX:
            return abs(a) <= self.epsilon * max(1.0, abs(a))
        return a == 0

    def eq(self, a: Scalar, b: Scalar) -> bool:
        if self.kind == APPROX:
            return abs(a - b) <= self.epsilon * max(1.0, abs(a), abs(b))
        return a == b
