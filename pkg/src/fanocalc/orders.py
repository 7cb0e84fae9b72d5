"""Monomial orders and their key-space encodings.

Monomials are exponent tuples.  Each order encodes a monomial as a *key*
tuple of ints such that

  * plain tuple comparison of keys realizes the order,
  * keys add componentwise under monomial multiplication.

The Groebner engine works entirely in key space; exponent tuples only appear
at module boundaries.  A key position is either a degree field (where a
divisor's entry must be <= the dividend's) or a negated-exponent field (>=),
recorded in ``leq_mask``.
"""

from __future__ import annotations


class OrderError(ValueError):
    """Unusable order specification."""


class Grevlex:
    """Graded reverse lexicographic order (the default everywhere)."""

    kind = "grevlex"

    def bind(self, nvars: int) -> "BoundOrder":
        return _bound_grevlex(nvars)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Grevlex)

    def __hash__(self) -> int:
        return hash("grevlex")

    def __repr__(self) -> str:
        return "Grevlex()"


class Lex:
    """Lexicographic order in the ring's variable order."""

    kind = "lex"

    def bind(self, nvars: int) -> "BoundOrder":
        return _bound_lex(nvars)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Lex)

    def __hash__(self) -> int:
        return hash("lex")

    def __repr__(self) -> str:
        return "Lex()"


class BlockElim:
    """Elimination order: the front variable block dominates.

    Any monomial containing a front variable exceeds every monomial free of
    them, so a Groebner basis under this order intersects down to the back
    subring.  Both blocks are compared by grevlex internally.
    """

    kind = "block"

    def __init__(self, front_indices):
        self.front = tuple(sorted(set(front_indices)))
        if not self.front:
            raise OrderError("empty front block")

    def bind(self, nvars: int) -> "BoundOrder":
        if self.front[-1] >= nvars:
            raise OrderError("front block index out of range")
        return _bound_block(self.front, nvars)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, BlockElim) and other.front == self.front

    def __hash__(self) -> int:
        return hash(("block", self.front))

    def __repr__(self) -> str:
        return f"BlockElim(front={self.front})"


class BoundOrder:
    """An order bound to a fixed variable count, with key-space helpers."""

    __slots__ = ("nvars", "length", "leq_mask", "_key", "_exp", "signature")

    def __init__(self, nvars, length, leq_mask, key_fn, exp_fn, signature):
        self.nvars = nvars
        self.length = length
        self.leq_mask = leq_mask
        self._key = key_fn
        self._exp = exp_fn
        self.signature = signature

    def key(self, exp):
        return self._key(exp)

    def exp(self, key):
        return self._exp(key)

    def divides(self, ka, kb):
        """Whether the monomial with key ka divides the one with key kb."""
        for leq, x, y in zip(self.leq_mask, ka, kb):
            if leq:
                if x > y:
                    return False
            elif x < y:
                return False
        return True

    def __repr__(self) -> str:
        return f"BoundOrder({self.signature}, nvars={self.nvars})"


def _bound_grevlex(n: int) -> BoundOrder:
    rng = range(n - 1, -1, -1)

    def key(exp):
        return (sum(exp),) + tuple(-exp[i] for i in rng)

    def unkey(k):
        return tuple(-k[n - i] for i in range(n))

    mask = (True,) + (False,) * n
    return BoundOrder(n, n + 1, mask, key, unkey, ("grevlex", n))


def _bound_lex(n: int) -> BoundOrder:
    def key(exp):
        return tuple(exp)

    def unkey(k):
        return tuple(k)

    mask = (True,) * n
    return BoundOrder(n, n, mask, key, unkey, ("lex", n))


def _bound_block(front, n: int) -> BoundOrder:
    back = tuple(i for i in range(n) if i not in set(front))
    frev = front[::-1]
    brev = back[::-1]
    nf, nb = len(front), len(back)

    def key(exp):
        kf = (sum(exp[i] for i in front),) + tuple(-exp[i] for i in frev)
        kb = (sum(exp[i] for i in back),) + tuple(-exp[i] for i in brev)
        return kf + kb

    def unkey(k):
        exp = [0] * n
        for j, i in enumerate(frev):
            exp[i] = -k[1 + j]
        off = 2 + nf
        for j, i in enumerate(brev):
            exp[i] = -k[off + j]
        return tuple(exp)

    mask = (True,) + (False,) * nf + (True,) + (False,) * nb
    return BoundOrder(n, nf + nb + 2, mask, key, unkey, ("block", front, n))


def key_mul(ka, kb):
    """Key of a monomial product (keys are linear in the exponents)."""
    return tuple(x + y for x, y in zip(ka, kb))


def key_div(ka, kb):
    """Key of the quotient monomial a / b (caller guarantees divisibility)."""
    return tuple(x - y for x, y in zip(ka, kb))


def exp_lcm(ea, eb):
    return tuple(max(x, y) for x, y in zip(ea, eb))


def exp_mul(ea, eb):
    return tuple(x + y for x, y in zip(ea, eb))


def exp_divides(ea, eb):
    return all(x <= y for x, y in zip(ea, eb))


GREVLEX = Grevlex()
LEX = Lex()
