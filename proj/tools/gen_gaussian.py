"""Writes data/gaussian.sem: the Gaussian sum relation on a step-0.5 grid."""
import math
import sys

X0, X1 = 0.5, -1.0
ZERO = 0.5  # height of the fuzzy zero


def grid(lo, hi, step=0.5):
    n = int(round((hi - lo) / step))
    return [lo + i * step for i in range(n + 1)]


def name(v):
    return f"{v:g}"


def main(path):
    r, q = grid(-3, 3), grid(-6, 6)
    out = ["# x + y = y + x with Gaussian noise, generated by tools/gen_gaussian.py",
           "semiotic gaussian", "algebra P product", "", "sign r", "sign q", ""]
    out.append("oset R : r {")
    out.append("  support " + " ".join(map(name, r)))
    out.append("}")
    out.append("oset Q : q {")
    out.append("  support " + " ".join(map(name, q)))
    out.append("}")
    for label, c in (("alpha0", X0), ("alpha1", X1)):
        out.append(f"oset {label} : r {{")
        out.append("  support " + " ".join(map(name, r)))
        for i, x in enumerate(r):
            for y in r[i:]:
                v = math.exp(-(x - c) ** 2 / 2 - (y - c) ** 2 / 2)
                out.append(f"  sim {name(x)} {name(y)} {v!r}")
        out.append("}")
    out.append("oset zero : r {")
    out.append("  support " + " ".join(map(name, r)))
    for i, x in enumerate(r):
        for y in r[i:]:
            out.append(f"  sim {name(x)} {name(y)} {ZERO * math.exp(-x * x / 2 - y * y / 2)!r}")
    out.append("}")
    for label, tgt, grid_t, scale in (("plus", "q", q, 1.0), ("plus_r", "r", r, 1.0), ("plus_r08", "r", r, 0.8)):
        out.append(f"comp {label} : r r -> {tgt} {{")
        for x in r:
            for y in r:
                for z in grid_t:
                    v = scale * math.exp(-(z - x - y) ** 2 / 2)
                    out.append(f"  entry {name(x)} {name(y)} {name(z)} = {v!r}")
        out.append("}")
    out += ["diagram commute {", "  node a0 : alpha0", "  node a1 : alpha1", "  node w : Q",
            "  edge xy : plus (a0 a1 -> w)", "  edge yx : plus (a1 a0 -> w)", "  sources a0 a1", "}"]
    # 0 + a = a, exact and with the sum scaled by 0.8
    for d, label in (("unit", "plus_r"), ("unit08", "plus_r08")):
        out += [f"diagram {d} {{", "  node z : zero", "  node a : alpha0",
                f"  edge s : {label} (z a -> a)", "  sources a", "}"]
    with open(path, "w") as f:
        f.write("\n".join(out) + "\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data/gaussian.sem")
