import fractions
import json

import numpy as np

from . import sets_base as sb
from . import _fp_lib as fp

_JSON_SAFE = 2**53


def to_jsonable(obj):
    '''
    Converts results to plain JSON values.

    Integers beyond :math:`2^{53}` become decimal strings, rationals
    become `"num/den"` and sets become sorted arrays.
    '''
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, (int, np.integer)):
        obj = int(obj)
        return str(obj) if abs(obj) > _JSON_SAFE else obj
    if isinstance(obj, fractions.Fraction):
        if obj.denominator == 1:
            return to_jsonable(obj.numerator)
        return '%d/%d' % (obj.numerator, obj.denominator)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, str):
        return obj
    if isinstance(obj, sb.Slope):
        return str(obj)
    if isinstance(obj, sb.IntSet):
        return [to_jsonable(e) for e in obj]
    if isinstance(obj, (sb.PlanarSet, sb.PairSetN)):
        return [[to_jsonable(x), to_jsonable(y)] for x, y in obj]
    if isinstance(obj, fp.FpSet):
        return {'p': obj.p, 'n': obj.n, 'points': [list(v) for v in obj]}
    if isinstance(obj, fp.FpPairSet):
        return {'p': obj.p, 'n': obj.n,
                'pairs': [[list(x), list(y)] for x, y in obj]}
    if isinstance(obj, sb.APCertificate):
        return {'k': obj.k,
                'entries': {_key(d): to_jsonable(obj[d]) for d in obj.differences}}
    if isinstance(obj, sb.CoverFailure):
        return {'k': obj.k, 'uncovered': [to_jsonable(d) for d in obj.uncovered]}
    if hasattr(obj, 'to_dict'):
        return to_jsonable(obj.to_dict())
    if isinstance(obj, dict):
        return {_key(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (set, frozenset)):
        return [to_jsonable(v) for v in sorted(obj, key=_sort_key)]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    raise TypeError('cannot serialize %r' % (obj,))


def _key(k):
    if isinstance(k, tuple):
        return ','.join(str(c) for c in k)
    return str(k)


def _sort_key(v):
    if isinstance(v, sb.Slope):
        return (1, 0) if v.is_infinite else (0, v.value)
    return v


def dumps(obj):
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2)


def csv_field(value):
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if value is None:
        return ''
    if isinstance(value, float):
        return '%.12g' % value
    if isinstance(value, (list, tuple, sb.IntSet)):
        value = ','.join(str(v) for v in value)
    value = str(value)
    if ',' in value or '"' in value:
        value = '"%s"' % value.replace('"', '""')
    return value


def csv_lines(header, rows):
    '''
    Comma-joined lines with a `#` header line.

    Args:
        header (list): Column names.
        rows (list): Rows, each a list or a dict keyed by column name.

    Returns:
        str: The text, newline terminated.
    '''
    lines = ['# ' + ','.join(header)]
    for row in rows:
        if isinstance(row, dict):
            row = [row.get(h) for h in header]
        lines.append(','.join(csv_field(v) for v in row))
    return '\n'.join(lines) + '\n'


def plain_lines(report, indent=0):
    pad = ' ' * indent
    out = []
    for key in sorted(report):
        value = report[key]
        if isinstance(value, dict):
            out.append('%s%s:' % (pad, key))
            out.append(plain_lines(value, indent + 2).rstrip('\n'))
        else:
            out.append('%s%s: %s' % (pad, key, json.dumps(to_jsonable(value))))
    return '\n'.join(out) + '\n'


def write(text, filename=None, stream=None):
    if filename:
        with open(filename, 'w') as fs:
            fs.write(text)
    elif stream is not None:
        stream.write(text)
