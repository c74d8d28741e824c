"""Integer polynomials in a few variables, used as function models for laws."""



class Poly:
    __slots__ = ("terms", "nvars")

    def __init__(self, terms, nvars):
        self.terms = {e: c for e, c in terms.items() if c}
        self.nvars = nvars

    @classmethod
    def var(cls, i, nvars):
        return cls({tuple(int(k == i) for k in range(nvars)): 1}, nvars)

    @classmethod
    def const(cls, c, nvars):
        return cls({(0,) * nvars: c}, nvars)

    def _lift(self, other):
        return other if isinstance(other, Poly) else Poly.const(other, self.nvars)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return Poly(out, self.nvars)

    __radd__ = __add__

    def __neg__(self):
        return Poly({e: -c for e, c in self.terms.items()}, self.nvars)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __mul__(self, other):
        other = self._lift(other)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Poly(out, self.nvars)

    __rmul__ = __mul__

    def __pow__(self, k):
        out = Poly.const(1, self.nvars)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        return self.terms == self._lift(other).terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return f"Poly({self.terms})"

    def diff(self, i, times=1):
        out = {}
        for e, c in self.terms.items():
            if e[i] < times:
                continue
            k = 1
            for m in range(e[i] - times + 1, e[i] + 1):
                k *= m
            e2 = e[:i] + (e[i] - times,) + e[i + 1:]
            out[e2] = out.get(e2, 0) + c * k
        return Poly(out, self.nvars)

    def scale_var(self, i, factor):
        """f(.., factor * x_i, ..)."""
        return Poly({e: c * factor ** e[i] for e, c in self.terms.items()}, self.nvars)


def poisson(f, g):
    """Canonical bracket on variables (q1, p1, q2, p2)."""
    out = Poly({}, f.nvars)
    for q, p in ((0, 1), (2, 3)):
        out = out + f.diff(q) * g.diff(p) - f.diff(p) * g.diff(q)
    return out


