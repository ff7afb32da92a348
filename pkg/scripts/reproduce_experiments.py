"""
Desk-scale simulation study
Replicated fits on models A/B/C (clean and contaminated) and the AR(1)
outlier-detection ROC comparison, written as CSV tables.

Usage: python scripts/reproduce_experiments.py [output_dir] [--quick] [--threads N]
"""

import json
import sys
from pathlib import Path

from rsdr.facade import RsdrFacade
from rsdr.outlier import OutlierConfig
from rsdr.simulation import MethodSpec, ModelSpec

SIZES = [(100, 6), (500, 20)]
MODELS = [("A", "gaussian"), ("A", "uniform"), ("B", "gaussian"), ("B", "uniform"), ("C", "gaussian"), ("C", "uniform")]
METHODS = [MethodSpec(label="rSDR-1", alpha=1.0), MethodSpec(label="rSDR-0.5", alpha=0.5)]


def parse_args(argv):
    """Positional output directory plus --quick and --threads N"""
    out_dir = Path("results")
    quick = False
    threads = 1
    i = 0
    while i < len(argv):
        arg = argv[i]
        if arg == "--quick":
            quick = True
        elif arg == "--threads":
            i += 1
            threads = int(argv[i])
        else:
            out_dir = Path(arg)
        i += 1
    return out_dir, quick, threads


def simulation_tables(facade, out_dir, reps, sizes):
    """One CSV per (contamination, size); rows are model/method cases"""
    for contaminated in (False, True):
        for n, p in sizes:
            name = "%s_n%d_p%d.csv" % ("contaminated" if contaminated else "clean", n, p)
            print("Running %s ..." % name)
            summary = []
            for model, dist in MODELS:
                spec = ModelSpec(model=model, predictor_dist=dist, n=n, p=p, contaminated=contaminated)
                table = out_dir / ("%s_%s%s" % (name[:-4], model, dist[0]) + ".csv")
                result = facade.simulate(spec, METHODS, reps, table=str(table))
                for row in result["rows"]:
                    summary.append(row)
                    if row["angle_mean"] is None:
                        print("  %-16s all replications failed" % row["case"])
                    else:
                        print("  %-16s angle %.2f (%.2f)" % (row["case"], row["angle_mean"], row["angle_sd"]))
            (out_dir / (name[:-4] + ".json")).write_text(json.dumps(summary, indent=2))


def roc_comparison(facade, out_dir, reps, p):
    """PCA vs rSDR reducers on the AR(1) design"""
    configs = [
        OutlierConfig(reducer="pca", d=2),
        OutlierConfig(reducer="pca", d=3),
        OutlierConfig(reducer="rsdr", d=2, alpha=0.2),
        OutlierConfig(reducer="rsdr", d=3, alpha=0.2),
        OutlierConfig(reducer="rsdr", d=2, alpha=0.5),
        OutlierConfig(reducer="rsdr", d=3, alpha=0.5),
    ]
    print("Running ROC study (p=%d) ..." % p)
    result = facade.roc_study(100, p, 10, configs, reps, table=str(out_dir / "roc_points.csv"))
    for entry in result["configurations"]:
        print("  %-12s mean AUC %.3f" % (entry["label"], entry["mean_auc"]))
    (out_dir / "roc_study.json").write_text(json.dumps(result, indent=2))


def main():
    """Run every study"""
    out_dir, quick, threads = parse_args(sys.argv[1:])
    out_dir.mkdir(parents=True, exist_ok=True)
    facade = RsdrFacade(threads=threads)

    reps = 5 if quick else 30
    simulation_tables(facade, out_dir, reps, SIZES[:1] if quick else SIZES)
    roc_comparison(facade, out_dir, 3 if quick else 10, 50 if quick else 200)

    print("")
    print("Results written to %s" % out_dir)
    print("Wall-clock seconds: %s" % json.dumps(facade.timings))


if __name__ == "__main__":
    main()
