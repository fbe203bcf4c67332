#!/usr/bin/env python3
"""Convert an ordinary character table from GAP's CTblLib data files
(MOT(...) records) into the line-oriented .ctab format.

usage: ctbllib_to_ctab.py <data-dir> <table-name> [<output-name>]

Class labels follow the ATLAS rule used by GAP's ClassNames: element order
followed by a letter assigned in order of appearance.  Galois-conjugate
families of classes get a %union alias (e.g. 7AB).
"""
import re
import string
import sys
from fractions import Fraction
from pathlib import Path


def find_record(data_dir, name):
    needle = 'MOT("%s",' % name
    for path in sorted(Path(data_dir).glob("*.tbl")):
        text = path.read_text(encoding="latin-1")
        start = text.find(needle)
        if start < 0:
            continue
        depth, i = 0, start + 3
        while True:
            c = text[i]
            if c == "(":
                depth += 1
            elif c == ")":
                depth -= 1
                if depth == 0:
                    return text[start + 4 : i]
            elif c == '"':
                i = text.index('"', i + 1)
            i += 1
    raise SystemExit("table %s not found" % name)


class Reader:
    def __init__(self, s):
        self.s = re.sub(r"\\\n", "", s)
        self.i = 0

    def ws(self):
        while self.i < len(self.s) and self.s[self.i] in " \n\t\r":
            self.i += 1

    def value(self):
        self.ws()
        c = self.s[self.i]
        if c == "[":
            return self.list()
        if c == '"':
            j = self.s.index('"', self.i + 1)
            out = self.s[self.i + 1 : j]
            self.i = j + 1
            return out
        depth, j = 0, self.i
        while True:
            c = self.s[j]
            if c in "([":
                depth += 1
            elif c in ")]":
                if depth == 0:
                    break
                depth -= 1
            elif c == "," and depth == 0:
                break
            j += 1
        out = "".join(self.s[self.i : j].split())
        self.i = j
        return out

    def list(self):
        assert self.s[self.i] == "["
        self.i += 1
        out = []
        while True:
            self.ws()
            c = self.s[self.i]
            if c == "]":
                self.i += 1
                # a trailing hole never occurs in the records we read
                return out
            if c == ",":
                out.append(None)
                self.i += 1
                continue
            out.append(self.value())
            self.ws()
            if self.s[self.i] == ",":
                self.i += 1

    def fields(self):
        out = []
        while True:
            self.ws()
            if self.i >= len(self.s):
                return out
            out.append(self.value())
            self.ws()
            if self.i < len(self.s) and self.s[self.i] == ",":
                self.i += 1


TERM = re.compile(r"([+-]?)(\d+(?:/\d+)?)?\*?(?:E\((\d+)\)(?:\^(\d+))?)?")


def parse_cyc(expr):
    """Return {(n, k): Fraction} for a GAP cyclotomic literal."""
    out = {}
    pos = 0
    while pos < len(expr):
        m = TERM.match(expr, pos)
        if not m or m.end() == pos:
            raise ValueError("cannot parse %r at %d" % (expr, pos))
        sign, coeff, n, k = m.groups()
        c = Fraction(coeff) if coeff else Fraction(1)
        if sign == "-":
            c = -c
        key = (int(n), int(k or 1) % int(n)) if n else (1, 0)
        out[key] = out.get(key, 0) + c
        pos = m.end()
    return out


def galois(value, m):
    out = {}
    for (n, k), c in value.items():
        key = (n, (k * m) % n)
        out[key] = out.get(key, 0) + c
    return out


def fmt_cyc(value):
    parts = []
    for (n, k), c in sorted(value.items()):
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if n == 1:
            body = str(a)
        else:
            e = "E(%d)" % n + ("^%d" % k if k != 1 else "")
            body = e if a == 1 else "%s*%s" % (a, e)
        parts.append((sign, body))
    if not parts:
        return "0"
    s = "".join(sign + body for sign, body in parts)
    return s[1:] if s[0] == "+" else s


def letters(i):
    s = ""
    i += 1
    while i:
        i, r = divmod(i - 1, 26)
        s = string.ascii_uppercase[r] + s
    return s


def main():
    data_dir, name = sys.argv[1], sys.argv[2]
    out_name = sys.argv[3] if len(sys.argv) > 3 else name
    fields = Reader(find_record(data_dir, name)).fields()
    _, _, centralizers, powermaps, irreducibles = fields[:5]
    centralizers = [int(c) for c in centralizers]
    order = centralizers[0]
    k = len(centralizers)
    maps = {p + 1: [int(x) - 1 for x in pm] for p, pm in enumerate(powermaps) if pm}

    def vp_tail(c, p):
        seen, cur = [], c
        while cur not in seen:
            seen.append(cur)
            cur = maps[p][cur]
        return seen.index(cur)

    orders = []
    for c in range(k):
        o = 1
        for p in maps:
            o *= p ** vp_tail(c, p)
        orders.append(o)

    counters, labels = {}, []
    for o in orders:
        idx = counters.get(o, 0)
        counters[o] = idx + 1
        labels.append("%d%s" % (o, letters(idx)))

    rows = []
    for r in irreducibles:
        if isinstance(r, list) and r and r[0] == "GALOIS":
            src, m = int(r[1][0]) - 1, int(r[1][1])
            rows.append([galois(v, m) for v in rows[src]])
        elif isinstance(r, list) and r and isinstance(r[0], str) and r[0].isalpha():
            raise SystemExit("unsupported row constructor %s" % r[0])
        else:
            rows.append([parse_cyc(str(v)) for v in r])
    assert len(rows) == k, (len(rows), k)

    # Galois families: classes joined by power maps for primes coprime to the order
    parent = list(range(k))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for p, pm in maps.items():
        for c in range(k):
            if orders[c] % p and orders[pm[c]] == orders[c]:
                parent[find(c)] = find(pm[c])
    families = {}
    for c in range(k):
        families.setdefault(find(c), []).append(c)

    print("# %s, converted from the GAP character table library (CTblLib)" % out_name)
    print("%%table %s" % out_name)
    print("%%order %d" % order)
    print("%%classes %s" % " ".join(labels))
    print("%%sizes %s" % " ".join(str(order // c) for c in centralizers))
    print("%%orders %s" % " ".join(map(str, orders)))
    for p in sorted(maps):
        print("%%power %d: %s" % (p, " ".join(labels[x] for x in maps[p])))
    for fam in sorted(families.values()):
        if len(fam) > 1 and all(len(labels[c]) == len(str(orders[c])) + 1 for c in fam):
            alias = str(orders[fam[0]]) + "".join(labels[c][-1] for c in sorted(fam))
            print("%%union %s = %s" % (alias, " ".join(labels[c] for c in sorted(fam))))
    for row in rows:
        print("%%chi %s" % " ".join(fmt_cyc(v) for v in row))


if __name__ == "__main__":
    main()
