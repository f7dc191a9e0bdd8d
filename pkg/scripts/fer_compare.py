"""FER of the C2 fixture against a classical QC-PEG code of the same shape; writes results/fer_compare.csv."""

import argparse
import csv
import time
from pathlib import Path

from cycledist.tables import FerComparison, comparison_point, fer_comparison


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=str(Path(__file__).resolve().parents[1] / "results" / "fer_compare.csv"))
    ap.add_argument("--workers", type=int, default=None)
    args = ap.parse_args()
    t0 = time.time()

    def progress(name, r):
        print(f"[{time.time() - t0:7.0f}s] {name:8s} {r.ebn0_db:.2f} dB  frames={r.frames:8d} "
              f"errors={r.frame_errors:4d} fer={r.fer:.3e} ci=({r.ci95[0]:.3e}, {r.ci95[1]:.3e})", flush=True)

    out = fer_comparison(FerComparison(workers=args.workers), progress)
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["code", "ebn0_db", "sigma", "frames", "frame_errors", "fer", "ci_lo", "ci_hi"])
        for name, rs in out.items():
            for r in rs:
                w.writerow([name, r.ebn0_db, f"{r.sigma:.10g}", r.frames, r.frame_errors, f"{r.fer:.10g}",
                            f"{r.ci95[0]:.10g}", f"{r.ci95[1]:.10g}"])
    k = comparison_point(out)
    if k is not None:
        a, b = (out[n][k] for n in out)
        print(f"comparison point {a.ebn0_db} dB: c2 {a.fer:.3e} {a.ci95}  baseline {b.fer:.3e} {b.ci95}")
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
