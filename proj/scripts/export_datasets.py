#!/usr/bin/env python3
"""Export the desk-scale benchmark datasets to plain CSV (features..., label).

Sources are datasets bundled with scikit-learn and the R `datasets`/`MASS`/
`rpart`/`HSAUR` collections shipped inside the `pydataset` sdist. Rows with
missing values are dropped. Run once; the CSVs are committed under data/uci.
"""
import argparse
import csv
import io
import pathlib
import tarfile

from sklearn import datasets as skd


def write(out_dir, name, header, rows):
    path = out_dir / f"{name}.csv"
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow(r)
    print(f"{path}: {len(rows)} rows")


def sklearn_sets(out_dir):
    for name, loader in [("iris", skd.load_iris), ("wine", skd.load_wine),
                         ("wdbc", skd.load_breast_cancer),
                         ("optdigits", skd.load_digits)]:
        b = loader()
        header = [f"f{i}" for i in range(b.data.shape[1])] + ["class"]
        rows = [[repr(float(v)) for v in x] + [str(b.target_names[y]) if name != "optdigits" else str(y)]
                for x, y in zip(b.data, b.target)]
        write(out_dir, name, header, rows)


def read_r_csv(tar, member):
    text = tar.extractfile(member).read().decode()
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    return header, list(reader)


def r_sets(out_dir, sdist):
    outer = tarfile.open(sdist)
    res = next(m for m in outer.getmembers() if m.name.endswith("resources.tar.gz"))
    inner = tarfile.open(fileobj=io.BytesIO(outer.extractfile(res).read()))
    members = {m.name.split("/csv/")[-1]: m for m in inner.getmembers() if "/csv/" in m.name}

    def table(key):
        return read_r_csv(inner, members[key])

    # name, list of (source key), feature columns, label builder
    specs = [
        ("biopsy", ["MASS/biopsy.csv"], ["V1", "V2", "V3", "V4", "V5", "V6", "V7", "V8", "V9"], lambda r: r["class"]),
        ("pima", ["MASS/Pima.tr.csv", "MASS/Pima.te.csv"], ["npreg", "glu", "bp", "skin", "bmi", "ped", "age"], lambda r: r["type"]),
        ("glass", ["MASS/fgl.csv"], ["RI", "Na", "Mg", "Al", "Si", "K", "Ca", "Ba", "Fe"], lambda r: r["type"]),
        ("crabs", ["MASS/crabs.csv"], ["FL", "RW", "CL", "CW", "BD"], lambda r: r["sp"] + r["sex"]),
        ("skulls", ["HSAUR/skulls.csv"], ["mb", "bh", "bl", "nh"], lambda r: r["epoch"]),
        ("kyphosis", ["rpart/kyphosis.csv"], ["Age", "Number", "Start"], lambda r: r["Kyphosis"]),
        ("cats", ["MASS/cats.csv"], ["Bwt", "Hwt"], lambda r: r["Sex"]),
        ("birthwt", ["MASS/birthwt.csv"], ["age", "lwt", "race", "smoke", "ptl", "ht", "ui", "ftv"], lambda r: r["low"]),
    ]
    for name, keys, feats, label in specs:
        rows = []
        for key in keys:
            header, body = table(key)
            for raw in body:
                rec = dict(zip(header, raw))
                vals = [rec[f] for f in feats]
                if any(v in ("", "NA") for v in vals):
                    continue
                rows.append(vals + [label(rec)])
        write(out_dir, name, feats + ["class"], rows)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--pydataset-sdist", required=True)
    ap.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parent.parent / "data" / "uci"))
    args = ap.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    sklearn_sets(out)
    r_sets(out, args.pydataset_sdist)


if __name__ == "__main__":
    main()
