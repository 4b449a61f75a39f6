"""Compare state sizes of the window engine and the fingerprint engine for AND matching."""
from onlinepm import fit_growth, measure


def main():
    ms = [2 ** k for k in range(6, 15)]
    naive = measure("naive-conjunction", ms, seed=1)
    small = measure("sublinear-conjunction", ms, seed=1)
    print(f"{'m':>7} {'window bits':>12} {'fingerprint bits':>17}")
    for a, b in zip(naive, small):
        print(f"{a.m:>7} {a.state_bits:>12} {b.state_bits:>17}")
    for label, samples in (("window", naive), ("fingerprint", small)):
        fit = fit_growth(samples)
        print(f"{label}: log-log slope {fit.slope:.3f} (R^2 {fit.r_squared:.3f})")


if __name__ == "__main__":
    main()
