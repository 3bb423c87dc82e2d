"""Verify a DECoR result CSV: schema line, columns and basic sanity"""
import csv
import math
import sys

from utils.data_saver import (
    BENCHMARK_COLUMNS,
    CODE_COLUMNS,
    CSV_SCHEMA_VERSION,
    ORACLE_COLUMNS,
    TRACE_COLUMNS,
    TRAINING_COLUMNS,
)

TABLE_COLUMNS = {
    "training": TRAINING_COLUMNS,
    "benchmark": BENCHMARK_COLUMNS,
    "pmli-design": TRACE_COLUMNS,
    "oracle": ORACLE_COLUMNS,
    "code": CODE_COLUMNS,
}


def verify(csv_file: str) -> bool:
    with open(csv_file, 'r', encoding='utf-8') as f:
        header = f.readline().split()
        if len(header) != 3 or header[:2] != ["#", CSV_SCHEMA_VERSION]:
            print(f"[ERROR] {csv_file}: first line is not '# {CSV_SCHEMA_VERSION} <table>'")
            return False
        table = header[2]
        reader = csv.DictReader(f)
        rows = list(reader)
        cols = reader.fieldnames or []

    expected = TABLE_COLUMNS.get(table)
    if expected is None:
        print(f"[ERROR] {csv_file}: unknown table '{table}'")
        return False
    if cols != expected:
        print(f"[ERROR] {csv_file}: columns {cols}, expected {expected}")
        return False
    print(f"[OK] {csv_file}: {table} table, {len(rows)} rows")

    ok = True
    if table == "training":
        values = [float(row["incumbent_value"]) for row in rows]
        if any(b < a for a, b in zip(values, values[1:])):
            print("[ERROR] incumbent value decreases between epochs")
            ok = False
        elif values:
            print(f"[OK] incumbent f: {values[0]:.6g} -> {values[-1]:.6g}")
    elif table == "benchmark":
        for n in sorted({int(row["N"]) for row in rows}):
            methods = [row["method"] for row in rows if int(row["N"]) == n]
            print(f"N={n}: " + ", ".join(f"{row['method']}={float(row['mse']):.4g}"
                                         for row in rows if int(row["N"]) == n))
            if len(set(methods)) != len(methods):
                print(f"[ERROR] N={n}: duplicate methods {methods}")
                ok = False
    elif table == "code":
        worst = max((abs(abs(complex(float(row["re"]), float(row["im"]))) - 1) for row in rows), default=0.0)
        if not math.isclose(worst, 0.0, abs_tol=1e-9):
            print(f"[ERROR] code is not unimodular (max deviation {worst:.3g})")
            ok = False
    return ok


if __name__ == "__main__":
    files = sys.argv[1:] or ["decor_train.csv"]
    results = [verify(path) for path in files]
    sys.exit(0 if all(results) else 1)
