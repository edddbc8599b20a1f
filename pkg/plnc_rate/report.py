# Deterministic CSV and JSON output. Every report starts with the resolved
# configuration so that a file on its own says how it was produced.

import csv
import json
import math
from typing import Any, Dict, Iterable, List, Mapping, Sequence, TextIO

from .constants import SCHEMA_VERSION, SIGNIFICANT_DIGITS

Row = Mapping[str, Any]


def format_number(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return f"{value:.{SIGNIFICANT_DIGITS}g}"
    return str(value)


def _json_value(value: Any) -> Any:
    # JSON has no inf/nan, so those become the same strings as in CSV.
    if isinstance(value, float) and not isinstance(value, bool):
        if math.isnan(value) or math.isinf(value):
            return format_number(value)
        return float(format_number(value))
    return value


def write_csv(config: Mapping[str, Any], columns: Sequence[str], rows: Iterable[Row], stream: TextIO) -> None:
    stream.write(f"# schema={SCHEMA_VERSION}\n")
    for key in sorted(config):
        stream.write(f"# {key}={format_number(config[key])}\n")
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_number(row[column]) for column in columns])


def write_json(config: Mapping[str, Any], columns: Sequence[str], rows: Iterable[Row], stream: TextIO) -> None:
    preamble: Dict[str, Any] = {"schema": SCHEMA_VERSION}
    preamble.update({key: _json_value(config[key]) for key in sorted(config)})
    document: List[Dict[str, Any]] = [{"config": preamble}]
    for row in rows:
        document.append({column: _json_value(row[column]) for column in columns})
    stream.write(json.dumps(document, indent=2, ensure_ascii=False))
    stream.write("\n")


def write_report(fmt: str, config: Mapping[str, Any], columns: Sequence[str], rows: Iterable[Row],
                 stream: TextIO) -> None:
    if fmt == "json":
        write_json(config, columns, rows, stream)
    else:
        write_csv(config, columns, rows, stream)
