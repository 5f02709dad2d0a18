import csv
from typing import Any, Dict, Iterable, List, Sequence

SWEEP_COLUMNS = ["format_version", "m", "n", "U", "algorithm", "accepted", "total", "ratio", "mean_heavy"]


def write_csv(path: str, columns: Sequence[str], rows: Iterable[Dict[str, Any]]) -> int:
    """
    Write dict rows as CSV with a header row.

    Args:
        path: Output file
        columns: Column order
        rows: Rows keyed by column name

    Returns:
        Number of data rows written
    """
    count = 0
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.DictWriter(f, fieldnames=list(columns))
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
            count += 1
    return count


def read_csv(path: str) -> List[Dict[str, str]]:
    with open(path, "r", newline="", encoding="utf-8") as f:
        return list(csv.DictReader(f))
