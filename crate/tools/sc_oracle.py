#!/usr/bin/env python3
"""Reference strip-map foliations computed with mpmath.

Every sample is an independent tanh-sinh integral along the straight segment
from the base point, at 30 significant digits; the strip ends are improper
integrals along Im z = 1/2. The SVG layout matches the Rust renderer so the
output can serve as a byte-for-byte fixture.

    python3 tools/sc_oracle.py OUT_DIR [--leaves 12] [--samples 64] [--x-range -4 4]
"""

import argparse
import os
from fractions import Fraction as Q

import mpmath as mp

mp.mp.dps = 30
HALF, THREE_QUARTERS, THREE_HALVES = Q(1, 2), Q(3, 4), Q(3, 2)


def presets(a, b):
    h, t = HALF, THREE_QUARTERS
    return {
        "hexagon": ([-a, a], [a, -a], [t, t, t, t], h, h),
        "threeoo3s": ([-a, 0.0, a], [b, -b], [h, THREE_HALVES, h, t, t], h, h),
        "diamond": ([0.0], [0.0], [h, h], h, h),
        "rn_kerr": ([-a, 0.0, a], [0.0], [h, THREE_HALVES, h, h], h, h),
        "superman": ([0.0], [a, -a], [h, t, t], h, h),
    }


class StripMap:
    def __init__(self, lower, upper, angles, am, ap):
        assert sum(angles) + am + ap == len(lower) + len(upper)
        self.lower, self.upper = lower, upper
        self.pv = [(mp.mpc(x, 0), True, a) for x, a in zip(lower, angles)]
        self.pv += [(mp.mpc(x, 1), False, a) for x, a in zip(upper, angles[len(lower):])]
        self.angles, self.am, self.ap = angles, am, ap
        self.z0 = mp.mpc(0, 0.5)

    def deriv(self, zeta):
        e = self.am - self.ap
        acc = mp.pi / 2 * mp.mpf(e.numerator) / e.denominator * zeta
        for zk, is_lower, alpha in self.pv:
            beta = alpha - 1
            if beta == 0:
                continue
            d = zeta - zk
            if d == 0:
                return mp.mpc(0)
            w = mp.log(mp.sinh(mp.pi / 2 * d))
            # sinh stays in the closed upper (lower) half plane for lower
            # (upper) prevertices; pick the matching side of the cut.
            if is_lower and w.imag < 0:
                w += 2j * mp.pi
            if not is_lower and w.imag > 0:
                w -= 2j * mp.pi
            acc += mp.mpf(beta.numerator) / beta.denominator * w
        return mp.exp(acc)

    def f(self, z):
        z = mp.mpc(z)
        d = z - self.z0
        if d == 0:
            return mp.mpc(0)
        return d * mp.quad(lambda t: self.deriv(self.z0 + d * t), [0, 1])

    def end(self, sign):
        start = mp.mpc(0, 0.5)
        return sign * mp.quad(lambda t: self.deriv(start + sign * t), [0, mp.inf])

    def vertices(self):
        out = [("end_minus", self.end(-1))]
        out += [(f"lower_{i}", self.f(complex(x, 0))) for i, x in enumerate(self.lower)]
        out.append(("end_plus", self.end(1)))
        out += [(f"upper_{i}", self.f(complex(x, 1))) for i, x in enumerate(self.upper)]
        return out


def boundary_pieces(grid, breaks):
    lo, hi = grid[0], grid[-1]
    inner = sorted(set(b for b in breaks if lo < b < hi))
    knots = sorted(set(grid) | set(inner))
    pieces, cur = [], []
    for x in knots:
        cur.append(x)
        if x in inner:
            pieces.append(cur)
            cur = [x]
    pieces.append(cur)
    return [p for p in pieces if len(p) >= 2]


def foliation(sm, leaves, x_lo, x_hi, samples):
    grid = [x_lo + (x_hi - x_lo) * i / (samples - 1) for i in range(samples)]
    lines = []
    for j in range(1, leaves + 1):
        c = j / (leaves + 1)
        lines.append(("leaf", f"leaf:{c!r}", [sm.f(complex(x, c)) for x in grid]))
    for edge, level, breaks in (("lower", 0.0, sm.lower), ("upper", 1.0, sm.upper)):
        for i, xs in enumerate(boundary_pieces(grid, breaks)):
            lines.append(("boundary", f"{edge}:{i}", [sm.f(complex(x, level)) for x in xs]))
    for label, z in sm.vertices():
        lines.append(("vertex", f"vertex:{label}", [z]))
    return [(k, l, [complex(float(z.real), float(z.imag)) for z in pts]) for k, l, pts in lines]


def num(v):
    s = "%.4f" % v
    if s.startswith("-") and set(s[1:]) <= set("0."):
        return s[1:]
    return s


STYLE = {"leaf": ("#1f6fb4", 0.003), "boundary": ("#000000", 0.006), "vertex": ("#c0392b", 0.02)}


def svg(lines):
    xs = [z.real for _, _, pts in lines for z in pts]
    ys = [-z.imag for _, _, pts in lines for z in pts]
    x0, x1, y0, y1 = (min(xs), max(xs), min(ys), max(ys)) if xs else (-1.0, 1.0, -1.0, 1.0)
    w = x1 - x0 if x1 > x0 else 1.0
    h = y1 - y0 if y1 > y0 else 1.0
    size = max(w, h)
    out = ['<?xml version="1.0" encoding="UTF-8" standalone="no"?>\n']
    out.append(
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="%s %s %s %s">\n'
        % (num(x0 - 0.05 * w), num(y0 - 0.05 * h), num(1.1 * w), num(1.1 * h))
    )
    out.append('<g fill="none" stroke-linecap="round" stroke-linejoin="round">\n')
    for kind, label, pts in lines:
        color, width = STYLE[kind]
        d = "".join(("M" if i == 0 else " L") + num(z.real) + "," + num(-z.imag) for i, z in enumerate(pts))
        if len(pts) == 1:
            d += " L" + num(pts[0].real) + "," + num(-pts[0].imag)
        out.append(
            '<path class="%s" data-label="%s" stroke="%s" stroke-width="%s" d="%s"/>\n'
            % (kind, label, color, num(width * size), d)
        )
    out.append("</g>\n</svg>\n")
    return "".join(out)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("out_dir")
    ap.add_argument("--presets", nargs="+", default=["hexagon", "diamond", "rn_kerr", "superman"])
    ap.add_argument("--a", type=float, default=1.0)
    ap.add_argument("--b", type=float, default=0.5)
    ap.add_argument("--leaves", type=int, default=12)
    ap.add_argument("--samples", type=int, default=64)
    ap.add_argument("--x-range", type=float, nargs=2, default=[-4.0, 4.0])
    args = ap.parse_args()
    os.makedirs(args.out_dir, exist_ok=True)
    table = presets(args.a, args.b)
    for name in args.presets:
        sm = StripMap(*table[name])
        lines = foliation(sm, args.leaves, args.x_range[0], args.x_range[1], args.samples)
        path = os.path.join(args.out_dir, name + ".svg")
        with open(path, "w", newline="\n") as fh:
            fh.write(svg(lines))
        print(path)


if __name__ == "__main__":
    main()
