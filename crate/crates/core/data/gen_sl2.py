"""Regenerate the A1 block of decompositions.txt.

sl2 composition factors of V(n) in characteristic p, computed by peeling
ch V(n) with simple characters built from Steinberg's tensor product theorem.
"""
import sys
from collections import Counter


def simple_char(m, p):
    ch = Counter({0: 1})
    twist = 1
    while m:
        d = m % p
        layer = Counter({twist * (d - 2 * i): 1 for i in range(d + 1)})
        nxt = Counter()
        for a, x in ch.items():
            for b, y in layer.items():
                nxt[a + b] += x * y
        ch = nxt
        m //= p
        twist *= p
    return ch


def factors(n, p):
    res = Counter({n - 2 * i: 1 for i in range(n + 1)})
    out = []
    while +res:
        top = max(w for w, c in res.items() if c)
        k = res[top]
        out.append((top, k))
        for w, c in simple_char(top, p).items():
            res[w] -= k * c
    return out


def main():
    print("# A1, generated by gen_sl2.py")
    for p in (2, 3, 5, 7):
        for n in range(0, 21):
            fs = factors(n, p)
            if len(fs) > 1:
                body = " ".join(f"{w}:{k}" for w, k in fs)
                print(f"A 1 {p} {n} {body} # sl2")


if __name__ == "__main__":
    sys.exit(main())
