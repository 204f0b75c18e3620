import json
import os
import sys

import numpy as np


class ReportWriter:
    def __init__(self, output=None, stream=None):
        self.output = output
        self.stream = stream or sys.stdout
        if output:
            os.makedirs(os.path.dirname(os.path.abspath(output)), exist_ok=True)

    def create_csv(self, header, rows):
        """Write rows as CSV with 17 significant digits"""
        lines = [",".join(header)]
        for row in rows:
            values = [row[key] for key in header] if isinstance(row, dict) else row
            lines.append(",".join(self._format_value(v) for v in values))
        return self._emit("\n".join(lines) + "\n")

    def create_json(self, payload):
        """Write a JSON document with sorted keys"""
        text = json.dumps(self._plain(payload), sort_keys=True, indent=2)
        return self._emit(text + "\n")

    def write(self, fmt, header, rows):
        """Tabular output in the requested format"""
        if fmt == "json":
            records = []
            for row in rows:
                values = [row[key] for key in header] if isinstance(row, dict) else row
                records.append(dict(zip(header, values)))
            return self.create_json(records)
        return self.create_csv(header, rows)

    def _emit(self, text):
        if self.output:
            # newline="" keeps '\n' on every platform
            with open(self.output, 'w', encoding='utf-8', newline='') as report_file:
                report_file.write(text)
            return self.output
        self.stream.write(text)
        return None

    def _format_value(self, value):
        """Format one CSV cell"""
        if isinstance(value, (bool, np.bool_)):
            return "true" if value else "false"
        if isinstance(value, (int, np.integer)):
            return str(int(value))
        if isinstance(value, (float, np.floating)):
            return format(float(value), '.17g')
        return str(value)

    def _plain(self, value):
        """Convert numpy scalars and arrays to JSON-native types"""
        if isinstance(value, dict):
            return {str(k): self._plain(v) for k, v in value.items()}
        if isinstance(value, (list, tuple)):
            return [self._plain(v) for v in value]
        if isinstance(value, np.ndarray):
            return self._plain(value.tolist())
        if isinstance(value, np.bool_):
            return bool(value)
        if isinstance(value, np.integer):
            return int(value)
        if isinstance(value, np.floating):
            value = float(value)
        if isinstance(value, float) and not np.isfinite(value):
            return None
        return value
