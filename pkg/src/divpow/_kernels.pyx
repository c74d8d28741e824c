# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled enumeration and rewriting kernels (same contract as _kernels_py)."""

from itertools import combinations


cdef void _fill_rec(tuple remaining, tuple sizes, Py_ssize_t k, tuple acc, list out):
    cdef Py_ssize_t s
    cdef set picked
    if k == len(sizes):
        out.append(acc)
        return
    s = sizes[k]
    for chosen in combinations(remaining, s):
        picked = set(chosen)
        _fill_rec(tuple([v for v in remaining if v not in picked]), sizes, k + 1, acc + chosen, out)


def interval_fillings(values, sizes):
    cdef list out = []
    _fill_rec(tuple(sorted(values)), tuple(sizes), 0, (), out)
    return out


cdef void _young_rec(Py_ssize_t k, list blocks, list per_block, list images, list out):
    cdef Py_ssize_t i
    cdef tuple positions
    if k == len(blocks):
        out.append(tuple(images))
        return
    positions = blocks[k]
    for filling in per_block[k]:
        for i in range(len(positions)):
            images[<Py_ssize_t>positions[i] - 1] = filling[i]
        _young_rec(k + 1, blocks, per_block, images, out)


def young_fillings(blocks, intervals):
    cdef list bl = [tuple(b) for b in blocks]
    cdef Py_ssize_t n = sum(len(b) for b in bl)
    cdef list per_block = [interval_fillings(b, sizes) for b, sizes in zip(bl, intervals)]
    cdef list out = []
    _young_rec(0, bl, per_block, [0] * n, out)
    return out


def chunk_canonical(images, groups):
    cdef list img = list(images)
    cdef Py_ssize_t start, length, count, c
    cdef list chunks
    for start, length, count in groups:
        if count < 2:
            continue
        chunks = [tuple(img[start + c * length:start + (c + 1) * length]) for c in range(count)]
        chunks.sort()
        for c in range(count):
            img[start + c * length:start + (c + 1) * length] = chunks[c]
    return tuple(img)


cdef void _acc(dict out, object key, object v):
    total = out.get(key, 0) + v
    if total:
        out[key] = total
    else:
        out.pop(key, None)


def lie_comb_bracket(tuple comb, right):
    cdef dict out
    if isinstance(right, int):
        return {comb + (right,): 1}
    a, b = right
    out = {}
    for first, second, sign in ((a, b, 1), (b, a, -1)):
        for c1, k1 in lie_comb_bracket(comb, first).items():
            for c2, k2 in lie_comb_bracket(c1, second).items():
                _acc(out, c2, sign * k1 * k2)
    return out


cdef long _min_leaf(tree):
    if isinstance(tree, int):
        return tree
    return min(_min_leaf(tree[0]), _min_leaf(tree[1]))


def lie_tree_normal_form(tree):
    cdef dict out
    if isinstance(tree, int):
        return {(tree,): 1}
    a, b = tree
    if _min_leaf(b) < _min_leaf(a):
        return {key: -v for key, v in lie_tree_normal_form((b, a)).items()}
    out = {}
    for comb, k in lie_tree_normal_form(a).items():
        for c2, k2 in lie_comb_bracket(comb, b).items():
            _acc(out, c2, k * k2)
    return out
