"""Pure-Python versions of the enumeration and rewriting kernels.

The compiled module ``_kernels`` exposes the same four functions; whichever
imports first is re-exported by ``divpow._backend``.
"""

from itertools import combinations


def interval_fillings(values, sizes):
    """Every way to fill consecutive intervals of the given sizes with sorted
    subsets of ``values`` (which are used exactly once).

    Returned as image tuples in lexicographic order.
    """
    values = tuple(sorted(values))
    out = []

    def rec(remaining, k, acc):
        if k == len(sizes):
            out.append(acc)
            return
        s = sizes[k]
        for chosen in combinations(remaining, s):
            picked = set(chosen)
            rec(tuple(v for v in remaining if v not in picked), k + 1, acc + chosen)

    rec(values, 0, ())
    return out


def young_fillings(blocks, intervals):
    """Images of the permutations that preserve each block setwise and are
    increasing on each interval.

    ``blocks`` is a list of sorted position tuples; ``intervals[b]`` lists the
    interval lengths that tile block ``b`` in position order.
    """
    n = sum(len(b) for b in blocks)
    per_block = [interval_fillings(b, sizes) for b, sizes in zip(blocks, intervals)]
    out = []
    images = [0] * n

    def rec(k):
        if k == len(blocks):
            out.append(tuple(images))
            return
        positions = blocks[k]
        for filling in per_block[k]:
            for pos, v in zip(positions, filling):
                images[pos - 1] = v
            rec(k + 1)

    rec(0)
    return out


def chunk_canonical(images, groups):
    """Sort equal-shape chunks inside each group.

    ``groups`` holds (start, length, count): ``count`` consecutive chunks of
    ``length`` positions beginning at 0-based ``start``.
    """
    img = list(images)
    for start, length, count in groups:
        if count < 2:
            continue
        chunks = [tuple(img[start + c * length:start + (c + 1) * length]) for c in range(count)]
        chunks.sort()
        for c, ch in enumerate(chunks):
            img[start + c * length:start + (c + 1) * length] = ch
    return tuple(img)


def lie_comb_bracket(comb, right):
    """Expand [comb ; right] where ``comb`` is a left-combed label tuple and
    ``right`` a binary tree (int leaf or 2-tuple). Returns {comb: int}."""
    if isinstance(right, int):
        return {comb + (right,): 1}
    a, b = right
    out = {}
    # [L;[a;b]] = [[L;a];b] - [[L;b];a]
    for first, second, sign in ((a, b, 1), (b, a, -1)):
        for c1, k1 in lie_comb_bracket(comb, first).items():
            for c2, k2 in lie_comb_bracket(c1, second).items():
                v = out.get(c2, 0) + sign * k1 * k2
                if v:
                    out[c2] = v
                else:
                    out.pop(c2, None)
    return out


def _leaves(tree):
    if isinstance(tree, int):
        return (tree,)
    return _leaves(tree[0]) + _leaves(tree[1])


def lie_tree_normal_form(tree):
    """Left-combed normal form, leading label minimal, of a bracket tree."""
    if isinstance(tree, int):
        return {(tree,): 1}
    a, b = tree
    if min(_leaves(b)) < min(_leaves(a)):
        return {k: -v for k, v in lie_tree_normal_form((b, a)).items()}
    out = {}
    for comb, k in lie_tree_normal_form(a).items():
        for c2, k2 in lie_comb_bracket(comb, b).items():
            v = out.get(c2, 0) + k * k2
            if v:
                out[c2] = v
            else:
                out.pop(c2, None)
    return out
