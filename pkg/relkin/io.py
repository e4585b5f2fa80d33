import csv
import io
import json
import math
import pickle
import re
import sys

FLOAT_FORMAT = '.17g'
FLOAT_TOKEN = '@@float:'


def pickle_save(filename, obj):
    with open(filename, 'wb') as f:
        pickle.dump(obj, f)


def pickle_load(filename):
    with open(filename, 'rb') as f:
        obj = pickle.load(f)
    return obj


def format_float(value):
    """17 significant digits; integral values keep a trailing '.0'."""
    text = format(float(value), FLOAT_FORMAT)
    if text.lstrip('-').isdigit():
        text += '.0'
    return text


def _prepare(value, floats):
    if hasattr(value, 'tolist') and not isinstance(value, (str, bytes)):
        # numpy scalar or array
        value = value.tolist()
    if isinstance(value, float):
        if not math.isfinite(value):
            # json has no spelling for inf/nan that every reader accepts
            return repr(float(value))
        floats.append(value)
        return f'{FLOAT_TOKEN}{len(floats) - 1}'
    if isinstance(value, dict):
        return {k: _prepare(v, floats) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_prepare(v, floats) for v in value]
    return value


def dumps_json(obj):
    """
    Serialise deterministically, every finite float written with 17 significant digits.
    """
    floats = []
    text = json.dumps(_prepare(obj, floats), indent=2)
    text = re.sub(f'"{FLOAT_TOKEN}(\\d+)"', lambda match: format_float(floats[int(match.group(1))]), text)
    return text + '\n'


def dumps_csv(header, rows):
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_float(v) if isinstance(v, float) else v for v in row])
    return buffer.getvalue()


def write_text(text, path=None):
    """Write to `path`, or to stdout when no path is given."""
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, 'w', encoding='utf-8', newline='') as f:
        f.write(text)
