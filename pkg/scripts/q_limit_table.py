"""Table of the canonical kappa*(p) at |z| = 0 as q approaches 1."""

from qadditivity.additivity import canonical_root, solve_kappa

QS = (0.5, 0.7, 0.9, 0.99, 0.999)

if __name__ == "__main__":
    print("p    " + "".join(f"q={q:<9}" for q in QS))
    for i in range(1, 10):
        p = i / 10
        row = [canonical_root(solve_kappa(p, q, 0.0)).kappa_star for q in QS]
        print(f"{p:.1f}  " + "".join(f"{k:<11.6f}" for k in row))
