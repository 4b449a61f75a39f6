"""Run each one-way reduction a few times and report success rate and message size."""
from onlinepm.protocols import REDUCTIONS, run_trials, summarize


def main(m=32, trials=200):
    for name in sorted(REDUCTIONS):
        stats = summarize(run_trials(name, m, trials if name != "indexing-via-edit" else 40, seed=11))
        lo, hi = stats.ci_low, stats.ci_high
        print(f"{name:24} success {stats.success_rate:.3f} [{lo:.3f}, {hi:.3f}]  bits {stats.mean_message_bits:.0f}")


if __name__ == "__main__":
    main()
