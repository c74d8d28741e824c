"""Compositions, ordered set partitions and permutations.

Conventions used throughout the package:

* ground sets are ``1..n``; permutations store their image tuple and compose
  as functions, ``(s * t)(x) == s(t(x))``;
* cosets of Young subgroups are left cosets ``s * H`` and the canonical
  representative of a coset is its lexicographically smallest image tuple;
* a partition may contain empty blocks, and its blocks are ordered.
"""

from __future__ import annotations

import re
from math import factorial, prod

from . import _backend


class Composition:
    __slots__ = ("parts",)

    def __init__(self, parts):
        parts = tuple(int(x) for x in parts)
        if any(x < 0 for x in parts):
            raise ValueError(f"negative part in {parts}")
        self.parts = parts

    @property
    def n(self):
        return sum(self.parts)

    def __len__(self):
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __getitem__(self, i):
        return self.parts[i]

    def __eq__(self, other):
        if isinstance(other, Composition):
            return self.parts == other.parts
        if isinstance(other, tuple):
            return self.parts == other
        return NotImplemented

    def __hash__(self):
        return hash(self.parts)

    def __repr__(self):
        return f"Composition({self.parts})"

    def __str__(self):
        return "(" + ",".join(map(str, self.parts)) + ")"

    @classmethod
    def parse(cls, text):
        s = text.strip()
        if not (s.startswith("(") and s.endswith(")")):
            raise ValueError(f"composition must be parenthesised: {text!r}")
        body = s[1:-1].strip()
        if body.endswith(","):
            body = body[:-1]
        if not body:
            return cls(())
        return cls(int(x) for x in body.split(","))

    def permuted(self, rho):
        """r^rho = (r_{rho^-1(1)}, ..., r_{rho^-1(p)})."""
        inv = rho.inverse()
        return Composition(self.parts[inv(i) - 1] for i in range(1, len(self) + 1))


def as_composition(r):
    return r if isinstance(r, Composition) else Composition(r)


class SetPartition:
    __slots__ = ("n", "blocks")

    def __init__(self, blocks, n=None):
        blocks = tuple(tuple(sorted(int(x) for x in b)) for b in blocks)
        seen = set()
        for b in blocks:
            for x in b:
                if x in seen:
                    raise ValueError(f"element {x} appears in two blocks")
                seen.add(x)
        if n is None:
            n = max(seen, default=0)
        if seen != set(range(1, n + 1)):
            raise ValueError(f"blocks {blocks} do not cover [1..{n}] exactly")
        self.n = n
        self.blocks = blocks

    def __len__(self):
        return len(self.blocks)

    def __iter__(self):
        return iter(self.blocks)

    def __eq__(self, other):
        if isinstance(other, SetPartition):
            return self.n == other.n and self.blocks == other.blocks
        return NotImplemented

    def __hash__(self):
        return hash((self.n, self.blocks))

    def __repr__(self):
        return f"SetPartition({str(self)})"

    def __str__(self):
        return "(" + ",".join("{" + ",".join(map(str, b)) + "}" for b in self.blocks) + ")"

    @classmethod
    def parse(cls, text, n=None):
        s = text.strip()
        if not (s.startswith("(") and s.endswith(")")):
            raise ValueError(f"partition must be parenthesised: {text!r}")
        found = re.findall(r"\{([^{}]*)\}|∅", s[1:-1])
        if not found and s[1:-1].strip():
            raise ValueError(f"cannot read partition {text!r}")
        blocks = []
        for body in found:
            body = body.strip()
            blocks.append(tuple(int(x) for x in body.split(",")) if body else ())
        return cls(blocks, n)

    def block_of(self):
        """The map x -> index of the block containing x (0-based)."""
        f = [0] * (self.n + 1)
        for i, b in enumerate(self.blocks):
            for x in b:
                f[x] = i
        return f[1:]

    @classmethod
    def from_function(cls, f, p=None):
        """Partition whose i-th block (0-based) is the preimage of i."""
        p = max(f, default=-1) + 1 if p is None else p
        blocks = [[] for _ in range(p)]
        for x, i in enumerate(f, start=1):
            blocks[i].append(x)
        return cls(blocks, len(f))

    def sizes(self):
        return Composition(len(b) for b in self.blocks)

    def shifted(self, k):
        return tuple(tuple(x + k for x in b) for b in self.blocks)


class Permutation:
    __slots__ = ("images",)

    def __init__(self, images):
        images = tuple(int(x) for x in images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError(f"not a permutation: {images}")
        self.images = images

    @classmethod
    def identity(cls, n):
        return cls(range(1, n + 1))

    @classmethod
    def from_cycles(cls, cycles, n):
        img = list(range(1, n + 1))
        for cyc in cycles:
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                img[a - 1] = b
        return cls(img)

    @property
    def n(self):
        return len(self.images)

    def __call__(self, x):
        return self.images[x - 1]

    def __mul__(self, other):
        if self.n != other.n:
            raise ValueError("degree mismatch")
        return Permutation(self.images[t - 1] for t in other.images)

    def inverse(self):
        inv = [0] * self.n
        for i, v in enumerate(self.images, start=1):
            inv[v - 1] = i
        return Permutation(inv)

    def is_identity(self):
        return all(v == i for i, v in enumerate(self.images, start=1))

    def __eq__(self, other):
        if isinstance(other, Permutation):
            return self.images == other.images
        return NotImplemented

    def __hash__(self):
        return hash(self.images)

    def __lt__(self, other):
        return self.images < other.images

    def cycles(self):
        seen = set()
        out = []
        for start in range(1, self.n + 1):
            if start in seen or self(start) == start:
                continue
            cyc = [start]
            seen.add(start)
            x = self(start)
            while x != start:
                cyc.append(x)
                seen.add(x)
                x = self(x)
            out.append(tuple(cyc))
        return out

    def __repr__(self):
        return f"Permutation({str(self)!r})"

    def __str__(self):
        cyc = self.cycles()
        if not cyc:
            return "id"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)

    @classmethod
    def parse(cls, text, n=None):
        s = text.strip()
        if s == "id":
            return cls.identity(n or 0)
        found = re.findall(r"\(([^()]*)\)", s)
        if "".join("(" + c + ")" for c in found).replace(" ", "") != s.replace(" ", ""):
            raise ValueError(f"cannot read permutation {text!r}")
        cycles = [tuple(int(x) for x in c.replace(",", " ").split()) for c in found]
        m = max((max(c) for c in cycles if c), default=0)
        return cls.from_cycles(cycles, max(m, n or 0))

    def act_on_partition(self, R):
        return SetPartition([[self(x) for x in b] for b in R.blocks], R.n)


# --- the four partition operations -------------------------------------------

def iota(r):
    r = as_composition(r)
    blocks, start = [], 0
    for x in r:
        blocks.append(range(start + 1, start + x + 1))
        start += x
    return SetPartition(blocks, start)


def pr(R):
    return R.sizes()


def compose_composition(r, i, q):
    r, q = as_composition(r), as_composition(q)
    if not 1 <= i <= len(r):
        raise IndexError(f"index {i} out of range for {r}")
    if q.n != r[i - 1]:
        raise ValueError(f"{q} does not sum to r_{i} = {r[i - 1]}")
    return Composition(r.parts[:i - 1] + q.parts + r.parts[i:])


def _as_partition(R):
    if isinstance(R, SetPartition):
        return R
    return iota(R)


def rhd(Q, R):
    """Block i of the result is the union of R_j over j in Q_i."""
    Q, R = _as_partition(Q), _as_partition(R)
    if Q.n != len(R):
        raise ValueError(f"{Q} lives on [{Q.n}] but {R} has {len(R)} blocks")
    return SetPartition([[x for j in qb for x in R.blocks[j - 1]] for qb in Q.blocks], R.n)


def rhd_composition(q, r):
    q, r = as_composition(q), as_composition(r)
    if q.n != len(r):
        raise ValueError("arity mismatch")
    out, start = [], 0
    for x in q:
        out.append(sum(r.parts[start:start + x]))
        start += x
    return Composition(out)


def tensor_partitions(R, Q):
    R, Q = _as_partition(R), _as_partition(Q)
    return SetPartition(R.blocks + Q.shifted(R.n), R.n + Q.n)


def gamma_k(R, k):
    """k copies of R side by side, with copy j's blocks merged into block i."""
    R = _as_partition(R)
    if k < 0:
        raise ValueError("k must be non-negative")
    if k == 0:
        return SetPartition([()] * len(R), 0)
    blocks = [[x + j * R.n for j in range(k) for x in b] for b in R.blocks]
    return SetPartition(blocks, k * R.n)


def gamma_k_via_rhd(R, k):
    """Same as gamma_k, computed as ({i+(j-1)p}_j)_i |> R^{(x)k}."""
    R = _as_partition(R)
    p = len(R)
    power = SetPartition([], 0)
    for _ in range(k):
        power = tensor_partitions(power, R)
    selector = SetPartition([[i + j * p for j in range(k)] for i in range(1, p + 1)], k * p)
    return rhd(selector, power)


def diamond(r, Qs):
    r = as_composition(r)
    Qs = [_as_partition(Q) for Q in Qs]
    if len(Qs) != len(r):
        raise ValueError(f"{len(r)} parts but {len(Qs)} partitions")
    out = SetPartition([], 0)
    for k, Q in zip(r, Qs):
        out = tensor_partitions(out, gamma_k(Q, k))
    return out


# --- cosets ------------------------------------------------------------------

def young_order(r):
    return prod(factorial(x) for x in as_composition(r))


def coset_representatives(n, r):
    """Left coset representatives of the Young subgroup of r, increasing on
    every interval of iota(r), in lexicographic order."""
    r = as_composition(r)
    if r.n != n:
        raise ValueError(f"{r} does not sum to {n}")
    return [Permutation(img) for img in _backend.interval_fillings(tuple(range(1, n + 1)), r.parts)]


def young_subgroup(R):
    """All elements of the Young subgroup of a partition (small inputs)."""
    R = _as_partition(R)
    blocks = [b for b in R.blocks if b]
    return [Permutation(img) for img in _backend.young_fillings(blocks, [(1,) * len(b) for b in blocks])]


def in_young_subgroup(sigma, R):
    R = _as_partition(R)
    return all(R.block_of()[sigma(x) - 1] == R.block_of()[x - 1] for x in range(1, R.n + 1))


def _wreath_layout(r, qs):
    """Chunk groups and the interval tiling of each block of r <> qs."""
    r = as_composition(r)
    qs = [as_composition(q) for q in qs]
    R = diamond(r, [iota(q) for q in qs])
    groups, tilings, start = [], [], 0
    for k, q in zip(r, qs):
        groups.append((start, q.n, k))
        for j in range(len(q)):
            tilings.append((q[j],) * k)
        start += k * q.n
    return R, groups, tilings


def wreath_subgroup(r, qs):
    """Elements of prod_i (Sigma_{r_i} wr Sigma_{q_i}) (small inputs)."""
    R, groups, _ = _wreath_layout(r, qs)
    n = R.n
    out = {Permutation.identity(n)}
    gens = []
    for (start, length, count), q in zip(groups, [as_composition(q) for q in qs]):
        for c in range(count):
            base = start + c * length
            off = base
            for part in q:
                for t in range(part - 1):
                    img = list(range(1, n + 1))
                    img[off + t], img[off + t + 1] = img[off + t + 1], img[off + t]
                    gens.append(Permutation(img))
                off += part
        for c in range(count - 1):
            img = list(range(1, n + 1))
            for t in range(length):
                a, b = start + c * length + t, start + (c + 1) * length + t
                img[a], img[b] = img[b], img[a]
            gens.append(Permutation(img))
    frontier = list(out)
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                h = g * s
                if h not in out:
                    out.add(h)
                    nxt.append(h)
        frontier = nxt
    return sorted(out)


def wreath_coset_representatives(r, qs):
    """Left coset representatives of prod_i (Sigma_{r_i} wr Sigma_{q_i}) inside
    the Young subgroup of r <> qs.

    The traversal runs over the Young subgroup modulo the within-chunk Young
    factors, canonicalises chunk order, and keeps one element per coset.
    """
    r = as_composition(r)
    qs = [as_composition(q) for q in qs]
    if len(qs) != len(r):
        raise ValueError("one inner composition per part of r is required")
    R, groups, tilings = _wreath_layout(r, qs)
    blocks = [b for b in R.blocks]
    keep = [i for i, b in enumerate(blocks) if b]
    seen = set()
    for img in _backend.young_fillings([blocks[i] for i in keep], [tilings[i] for i in keep]):
        seen.add(_backend.chunk_canonical(img, groups))
    return [Permutation(img) for img in sorted(seen)]


def block_permutation(rho, r):
    """rho^*: the i-th interval of iota(r) goes, in order, onto the rho(i)-th
    interval of iota(r^rho)."""
    r = as_composition(r)
    if rho.n != len(r):
        raise ValueError(f"permutation of degree {rho.n} for {len(r)} blocks")
    target = iota(r.permuted(rho))
    source = iota(r)
    img = [0] * r.n
    for i, block in enumerate(source.blocks, start=1):
        for x, y in zip(block, target.blocks[rho(i) - 1]):
            img[x - 1] = y
    return Permutation(img)


# --- the partition operad ----------------------------------------------------

def partition_exponents(J):
    """Block index (0-based) of each element: the d-exponents of the matching
    shift monomial."""
    return tuple(J.block_of())


def partition_from_exponents(exps):
    return SetPartition.from_function(list(exps))


def partition_circ(J, l, K):
    """J o_l K in the partition operad, computed in the shifted commutative
    operad and converted back (trailing empty blocks are dropped)."""
    from .distributive import shift_com_from_partition, shift_com_to_partition, shift_operad
    from .operads import COM

    if not 1 <= l <= J.n:
        raise IndexError(f"index {l} out of range for a partition of [{J.n}]")
    S = shift_operad(COM)
    x = shift_com_from_partition(J)
    y = shift_com_from_partition(K)
    res = S.partial_compose(x, l, y)
    if len(res) != 1:
        raise AssertionError("shift composition of monomials must be a monomial")
    (mono, coef), = res.items()
    return shift_com_to_partition(mono, J.n + K.n - 1)


def partition_circ_direct(J, l, K):
    """Elementwise formula: element x of K lands in block (block of l) + (block of x)."""
    if not 1 <= l <= J.n:
        raise IndexError(f"index {l} out of range for a partition of [{J.n}]")
    e, f = partition_exponents(J), partition_exponents(K)
    k = K.n
    out = list(e[:l - 1]) + [e[l - 1] + t for t in f] + list(e[l:])
    assert len(out) == J.n + k - 1
    return partition_from_exponents(out)
