import pathlib, sys

ROOT = pathlib.Path(__file__).resolve().parents[2]
sys.path.insert(0, str(ROOT))

from src.cli import run  # noqa: E402

TWO_CHAIN = ROOT / "data" / "two_chain.alg"

# (argv, expected exit code)
CHECKS = [
    (["check-algebra", "--class", "RLUG", "--in", str(TWO_CHAIN)], 0),
    (["star", "--in", str(TWO_CHAIN)], 0),
    (["complete", "--in", str(TWO_CHAIN)], 0),
    (["dcore", "--in", str(TWO_CHAIN)], 1),  # no 0, so not involutive
    (["translate", "--assume", "a => b", "--goal", "a => b"], 0),
    (["enumerate", "--logic", "fnl", "--size", "3", "--count"], 0),
]


def main():
    print("-- Running smoke checks --")
    bad = 0
    for argv, want in CHECKS:
        got = run(argv)
        status = "OK" if got == want else "ERROR"
        bad += got != want
        print(f"\n{status} (exit {got}): {' '.join(argv[:2])}")
    sys.exit(1 if bad else 0)


if __name__ == "__main__":
    main()
