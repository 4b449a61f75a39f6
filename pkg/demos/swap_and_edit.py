"""Stream a short text past the swap matcher and the edit distance engine."""
from onlinepm import EditEngine, SwapEngine


def main():
    pattern, text = "abab", "baababbaab"
    swap = SwapEngine("ab", pattern).feed(text)
    edit = EditEngine("ab", pattern).feed(text)
    for i, (s, e) in enumerate(zip(swap, edit)):
        if s is not None:
            print(f"window ending at {i}: {text[i - 3:i + 1]}  swap match {s}  edit distance {e}")


if __name__ == "__main__":
    main()
