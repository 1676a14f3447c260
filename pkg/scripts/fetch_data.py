"""Where the example datasets come from and how to lay them out.

The datasets are not redistributed with the package. This script prints
instructions and, with ``--check DIR``, validates prepared files. Point the
acceptance suite at the directory with ``LRDCP_DATA_DIR=DIR``.

ethernet.csv
    Bellcore Ethernet LAN traffic from 1989, bytes per 10 ms, 4000 values.
    Distributed as the ``ethernetTraffic`` dataset of the R package
    ``longmemo`` (on CRAN). Export it with::

        Rscript -e 'library(longmemo); data(ethernetTraffic);
                    write.csv(data.frame(bytes = as.numeric(ethernetTraffic)),
                              "ethernet.csv", row.names = FALSE)'

    Layout: a header row and a single numeric column.

tucuman_rainfall.csv
    Yearly rainfall (mm) in the Argentinian province of Tucuman, 1884 to
    1996, 113 values, as tabulated by Wu, Woodroofe and Mentz (2001).
    Transcribe the table into two columns ``year,rainfall``.
"""
import argparse
import sys
from pathlib import Path

from lrdcp.errors import IngestionError
from lrdcp.harness import read_series

EXPECTED = {
    "ethernet.csv": 4000,
    "tucuman_rainfall.csv": 113,
}


def check(directory: Path) -> int:
    status = 0
    for name, n in EXPECTED.items():
        path = directory / name
        if not path.is_file():
            print(f"missing  {path}")
            status = 1
            continue
        try:
            series = read_series(path)
        except IngestionError as exc:
            print(f"invalid  {path}: {exc}")
            status = 1
            continue
        mark = "ok" if len(series) == n else "warning"
        print(f"{mark:8s} {path}: {len(series)} values (expected {n})")
    return status


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description="Document and validate the example datasets.")
    parser.add_argument("--check", metavar="DIR", help="validate prepared CSV files in DIR")
    args = parser.parse_args(argv)
    if args.check:
        return check(Path(args.check))
    print(__doc__)
    return 0


if __name__ == "__main__":
    sys.exit(main())
