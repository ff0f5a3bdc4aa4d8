#!/usr/bin/env python3
"""Write the desk-scale benchmark CSVs used by the example configs."""

from pathlib import Path

from contilearn.synthetic import circle_dataset, write_csv, xor_dataset


def main() -> None:
    fixtures = Path(__file__).resolve().parent.parent / "fixtures"
    fixtures.mkdir(exist_ok=True)

    X, y = xor_dataset()
    write_csv(fixtures / "xor.csv", X, y)
    print(f"wrote {fixtures / 'xor.csv'} ({len(y)} rows, {int(y.sum())} positive)")

    X, y = circle_dataset()
    write_csv(fixtures / "circle.csv", X, y)
    print(f"wrote {fixtures / 'circle.csv'} ({len(y)} rows, {int(y.sum())} positive)")


if __name__ == "__main__":
    main()
