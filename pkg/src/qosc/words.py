"""Formal words in the generators e_i, f_i, k_mu with exact coefficients.

A WordExpr is a finite linear combination of generator monomials.  Atoms
are ('e', i), ('f', i) and ('k', Weight); q-commutators and divided powers
expand at construction time, so evaluation on a module is a flat
right-to-left sweep.
"""

from __future__ import annotations

from .scalars import ONE, Scalar, qfact_at, Q


class WordExpr:
    """Linear combination of atom tuples; coefficients are Scalars."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        # terms: dict {atoms tuple: Scalar}
        self.terms = {}
        if terms:
            for atoms, c in terms.items():
                if not c.is_zero():
                    self.terms[atoms] = c

    @staticmethod
    def gen(kind, i):
        return WordExpr({((kind, i),): ONE})

    @staticmethod
    def e(i):
        return WordExpr.gen("e", i)

    @staticmethod
    def f(i):
        return WordExpr.gen("f", i)

    @staticmethod
    def k(mu):
        return WordExpr({(("k", mu),): ONE})

    @staticmethod
    def unit(c=ONE):
        return WordExpr({(): c})

    def scale(self, c: Scalar):
        if c.is_zero():
            return WordExpr()
        return WordExpr({a: c * v for a, v in self.terms.items()})

    def __add__(self, other):
        out = dict(self.terms)
        for a, c in other.terms.items():
            s = out.get(a)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(a, None)
            else:
                out[a] = s
        w = WordExpr()
        w.terms = out
        return w

    def __sub__(self, other):
        return self + other.scale(Scalar.from_int(-1))

    def __mul__(self, other):
        if isinstance(other, Scalar):
            return self.scale(other)
        out = WordExpr()
        acc = {}
        for a1, c1 in self.terms.items():
            for a2, c2 in other.terms.items():
                key = a1 + a2
                c = c1 * c2
                s = acc.get(key)
                s = c if s is None else s + c
                if s.is_zero():
                    acc.pop(key, None)
                else:
                    acc[key] = s
        out.terms = acc
        return out

    def __pow__(self, n):
        w = WordExpr.unit()
        for _ in range(n):
            w = w * self
        return w

    def is_zero(self):
        return not self.terms

    def mirror_ef(self):
        """The (e -> f) substitution: swap e_i and f_i in every atom."""
        swap = {"e": "f", "f": "e"}
        out = WordExpr()
        out.terms = {
            tuple((swap.get(k, k), i) for (k, i) in atoms): c
            for atoms, c in self.terms.items()
        }
        return out

    def substituted(self, emap, fmap, kmap):
        """Replace ('e', i) by emap[i], ('f', i) by fmap[i], ('k', mu) by
        kmap(mu); returns the expanded WordExpr."""
        out = WordExpr()
        for atoms, c in self.terms.items():
            part = WordExpr.unit(c)
            for atom in atoms:
                kind = atom[0]
                if kind == "e":
                    part = part * emap[atom[1]]
                elif kind == "f":
                    part = part * fmap[atom[1]]
                else:
                    part = part * kmap(atom[1])
            out = out + part
        return out

    def __repr__(self):
        if not self.terms:
            return "WordExpr(0)"
        bits = []
        for atoms, c in list(self.terms.items())[:6]:
            mono = ".".join(
                "%s%s" % (k, i if k != "k" else "[%s]" % (i.to_str(),))
                for (k, i) in atoms
            )
            bits.append("(%s)*%s" % (c.to_str(), mono or "1"))
        if len(self.terms) > 6:
            bits.append("...")
        return "WordExpr(%s)" % " + ".join(bits)


def qcommutator(a: WordExpr, b: WordExpr, t: Scalar) -> WordExpr:
    """[a, b]_t = a b - t b a."""
    return a * b - (b * a).scale(t)


def divided_power(kind, i, k, base: Scalar = Q) -> WordExpr:
    """x_i^(k) = x_i^k / [k]!_base."""
    if k < 0:
        return WordExpr()
    w = WordExpr.gen(kind, i) ** k
    return w.scale(qfact_at(base, k).inverse())


def word_degree_profile(atoms, shift_of):
    """(max prefix rise, net shift) of an atom tuple applied right-to-left."""
    rise = 0
    cur = 0
    for atom in reversed(atoms):
        cur += shift_of(atom)
        rise = max(rise, cur)
    return rise, cur


def expr_max_rise(expr: WordExpr, shift_of) -> int:
    rise = 0
    for atoms in expr.terms:
        r, _ = word_degree_profile(atoms, shift_of)
        rise = max(rise, r)
    return rise
