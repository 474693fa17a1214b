"""Pure-Python mod-p reduction with the same contract as the compiled ``_reduce``.

Reduction processes leading terms in decreasing grevlex order and always uses the
first basis element whose leading monomial divides, so the output is identical to
the compiled kernel term for term.
"""

from __future__ import annotations

import heapq

import numpy as np


def _heap_key(e):
    # min-heap entry for the grevlex-largest monomial
    return (-sum(e), tuple(reversed(e)))


def _to_arrays(items, N):
    if not items:
        return np.empty((0, N), dtype=np.int32), np.empty(0, dtype=np.int64)
    exps = np.array([e for e, _ in items], dtype=np.int32).reshape(len(items), N)
    coeffs = np.array([c for _, c in items], dtype=np.int64)
    return exps, coeffs


def nf_modp(f_exps, f_coeffs, basis, p):
    N = f_exps.shape[1]
    cur = {tuple(map(int, e)): int(c) for e, c in zip(f_exps, f_coeffs)}
    heap = [(_heap_key(e), e) for e in cur]
    heapq.heapify(heap)
    gens = []
    for ge, gc in basis:
        terms = [(tuple(map(int, e)), int(c)) for e, c in zip(ge, gc)]
        gens.append((terms[0][0], terms[1:]))
    remainder = []
    while heap:
        _, lead = heapq.heappop(heap)
        c = cur.pop(lead, None)
        if c is None:
            continue
        for lm, tail in gens:
            if all(a <= b for a, b in zip(lm, lead)):
                shift = tuple(b - a for a, b in zip(lm, lead))
                for e, gcoef in tail:
                    m = tuple(x + y for x, y in zip(e, shift))
                    old = cur.get(m)
                    v = ((0 if old is None else old) - c * gcoef) % p
                    if v:
                        cur[m] = v
                        if old is None:
                            heapq.heappush(heap, (_heap_key(m), m))
                    elif old is not None:
                        del cur[m]
                break
        else:
            remainder.append((lead, c))
    return _to_arrays(remainder, N)


def spoly_modp(e1, c1, e2, c2, p):
    N = e1.shape[1]
    lm1 = tuple(map(int, e1[0]))
    lm2 = tuple(map(int, e2[0]))
    lcm = tuple(max(a, b) for a, b in zip(lm1, lm2))
    u1 = tuple(l - a for l, a in zip(lcm, lm1))
    u2 = tuple(l - a for l, a in zip(lcm, lm2))
    out = {}
    for e, c in zip(e1[1:], c1[1:]):
        m = tuple(int(x) + y for x, y in zip(e, u1))
        out[m] = int(c) % p
    for e, c in zip(e2[1:], c2[1:]):
        m = tuple(int(x) + y for x, y in zip(e, u2))
        v = (out.get(m, 0) - int(c)) % p
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    items = sorted(out.items(), key=lambda t: _heap_key(t[0]))
    return _to_arrays(items, N)
