#!/usr/bin/env python3
"""Write the iris data set as a points CSV (features + label column).

The repository does not ship UCI data; this pulls it from scikit-learn's
bundled copy at build time. Usage: fetch_iris.py OUTPUT.csv
"""
import sys


def main() -> int:
    if len(sys.argv) != 2:
        print("usage: fetch_iris.py OUTPUT.csv", file=sys.stderr)
        return 2
    try:
        from sklearn.datasets import load_iris
    except ImportError:
        print("scikit-learn is not installed; iris-dependent tests will be skipped",
              file=sys.stderr)
        return 1
    iris = load_iris()
    with open(sys.argv[1], "w") as f:
        f.write("f0,f1,f2,f3,label\n")
        for row, lab in zip(iris.data, iris.target):
            f.write(",".join(repr(float(v)) for v in row) + f",{int(lab)}\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
