"""Regenerate the smallest-a table, the spectral-radius grid and the structure-set tables as CSV."""

import argparse
import csv
from dataclasses import asdict
from pathlib import Path

from cycledist.tables import table1_rows, table2, table34


def write(path: Path, rows: list[dict]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(rows[0]))
        w.writeheader()
        for r in rows:
            w.writerow({k: (f"{v:.6f}" if isinstance(v, float) else v) for k, v in r.items()})
    print(f"wrote {path} ({len(rows)} rows)")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--outdir", default=str(Path(__file__).resolve().parents[1] / "results"))
    out = Path(ap.parse_args().outdir)
    out.mkdir(parents=True, exist_ok=True)
    write(out / "table1.csv", table1_rows())
    write(out / "table2.csv", table2())
    for gamma, name in ((3, "table3.csv"), (4, "table4.csv")):
        write(out / name, [asdict(r) for r in table34(gamma)])


if __name__ == "__main__":
    main()
