#!/usr/bin/env python3
"""Write Cremona allcurves-format text from public curve data.

Two sources:

  sqlite   A Cremona sqlite database (t_class: rank, class, conductor;
           t_curve: curve, class, tors, eqn). The mini database, conductors
           up to 9999, ships inside the passagemath-schemes wheel on PyPI;
           --fetch-mini downloads it.
  elldata  The PARI/GP elldata files ell0 ... ell499, all conductors below
           500000. They ship inside the passagemath-pari-elldata wheel;
           --fetch-elldata downloads and unpacks them. elldata has no
           torsion column, so it is written as "?"; rank is the number of
           stored generators.

Output lines: N class num [a1,a2,a3,a4,a6] rank torsion
"""
import argparse
import re
import sqlite3
import subprocess
import sys
import tempfile
import zipfile
from pathlib import Path

MINI_WHEEL = "passagemath-schemes==10.6.48"
MINI_MEMBER = "sage_wheels/share/cremona/cremona_mini.db"
ELLDATA_WHEEL = "passagemath-pari-elldata==10.6.48"
ELLDATA_PREFIX = "sage_wheels/share/pari/elldata/"
LABEL = re.compile(r"^(\d+)([a-z]+)(\d+)$")
# "805b1",[1,-1,1,-163,-758],[generators]
ELLDATA_CURVE = re.compile(r'"(\d+[a-z]+\d+)",\[(-?\d+),(-?\d+),(-?\d+),(-?\d+),(-?\d+)\],\[')


def pip_download(spec: str, tmp: str) -> Path:
    subprocess.run(
        [sys.executable, "-m", "pip", "download", "--no-deps", "--only-binary=:all:",
         "--python-version", "3.10", "--platform", "manylinux_2_28_x86_64", "-d", tmp, spec],
        check=True)
    return next(Path(tmp).glob("*.whl"))


def fetch_mini(dest: Path) -> Path:
    with tempfile.TemporaryDirectory() as tmp:
        with zipfile.ZipFile(pip_download(MINI_WHEEL, tmp)) as z:
            dest.write_bytes(z.read(MINI_MEMBER))
    return dest


def fetch_elldata(dest: Path) -> Path:
    dest.mkdir(parents=True, exist_ok=True)
    with tempfile.TemporaryDirectory() as tmp:
        with zipfile.ZipFile(pip_download(ELLDATA_WHEEL, tmp)) as z:
            for name in z.namelist():
                if name.startswith(ELLDATA_PREFIX) and not name.endswith("/"):
                    (dest / name[len(ELLDATA_PREFIX):]).write_bytes(z.read(name))
    return dest


def split_label(label: str):
    m = LABEL.match(label)
    if not m:
        raise SystemExit(f"unexpected label {label!r}")
    return int(m.group(1)), m.group(2), int(m.group(3))


def rows_from_sqlite(db: Path, keep):
    con = sqlite3.connect(db)
    for curve, tors, eqn, rank in con.execute(
            "SELECT c.curve, c.tors, c.eqn, k.rank FROM t_curve c JOIN t_class k ON c.class = k.class"):
        n, cls, num = split_label(curve)
        if keep(n, curve):
            yield n, cls, num, eqn.replace(" ", ""), str(rank), str(tors)


def generator_count(text: str, start: int) -> int:
    """Number of top-level entries in the list opening at text[start] == '['."""
    depth, count, i = 0, 0, start
    while True:
        c = text[i]
        if c == "[":
            depth += 1
            if depth == 2:
                count += 1
        elif c == "]":
            depth -= 1
            if depth == 0:
                return count
        i += 1


def rows_from_elldata(directory: Path, keep):
    files = sorted(directory.glob("ell[0-9]*"), key=lambda p: int(p.name[3:]))
    if not files:
        raise SystemExit(f"no ell* files in {directory}")
    for path in files:
        lo = int(path.name[3:]) * 1000
        if not keep.may_need(lo, lo + 999):
            continue
        text = path.read_text()
        for m in ELLDATA_CURVE.finditer(text):
            curve = m.group(1)
            n, cls, num = split_label(curve)
            if not keep(n, curve):
                continue
            eqn = "[" + ",".join(m.group(i) for i in range(2, 7)) + "]"
            yield n, cls, num, eqn, str(generator_count(text, m.end() - 1)), "?"


class Filter:
    def __init__(self, lo, hi, labels, classes, squarefree):
        self.lo, self.hi, self.labels, self.classes, self.squarefree = lo, hi, labels, classes, squarefree

    def may_need(self, lo, hi):
        return bool(self.labels or self.classes) or (lo <= self.hi and self.lo <= hi)

    def __call__(self, n, curve):
        m = LABEL.match(curve)
        if curve in self.labels or (m and m.group(1) + m.group(2) in self.classes):
            return True
        if not self.lo <= n <= self.hi:
            return False
        return not self.squarefree or is_squarefree(n)


def is_squarefree(n: int) -> bool:
    d = 2
    while d * d <= n:
        if n % (d * d) == 0:
            return False
        if n % d == 0:
            n //= d
        d += 1
    return True


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    src = ap.add_mutually_exclusive_group(required=True)
    src.add_argument("--db", type=Path, help="Cremona sqlite database")
    src.add_argument("--fetch-mini", type=Path, metavar="DEST", help="download the mini database to DEST first")
    src.add_argument("--elldata", type=Path, metavar="DIR", help="directory of PARI elldata files")
    src.add_argument("--fetch-elldata", type=Path, metavar="DIR", help="download elldata into DIR first")
    ap.add_argument("--min-conductor", type=int, default=1)
    ap.add_argument("--max-conductor", type=int, default=9999)
    ap.add_argument("--squarefree-only", action="store_true", help="drop curves of non-squarefree conductor")
    ap.add_argument("--label", action="append", default=[], help="also include this curve (repeatable)")
    ap.add_argument("--class", dest="classes", action="append", default=[],
                    help="also include this isogeny class, e.g. 36613a (repeatable)")
    ap.add_argument("-o", "--out", type=Path, help="output file (default stdout)")
    args = ap.parse_args()

    keep = Filter(args.min_conductor, args.max_conductor, set(args.label), set(args.classes), args.squarefree_only)
    if args.db or args.fetch_mini:
        rows = rows_from_sqlite(fetch_mini(args.fetch_mini) if args.fetch_mini else args.db, keep)
    else:
        rows = rows_from_elldata(fetch_elldata(args.fetch_elldata) if args.fetch_elldata else args.elldata, keep)
    rows = sorted(rows, key=lambda r: (r[0], len(r[1]), r[1], r[2]))

    out = open(args.out, "w") if args.out else sys.stdout
    try:
        for n, cls, num, eqn, rank, tors in rows:
            out.write(f"{n} {cls} {num} {eqn} {rank} {tors}\n")
    finally:
        if args.out:
            out.close()
    print(f"{len(rows)} curves", file=sys.stderr)


if __name__ == "__main__":
    main()
