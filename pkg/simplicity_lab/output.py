"""
Artifact writers: CSV tables, JSON records and the run manifest.

Floats are written with 17 significant digits in CSV and in shortest round-trip form in JSON,
so identical runs produce identical bytes. No timestamps are written.
"""
import csv
import hashlib
import json
import logging
import os
import platform

import django
import numpy as np
import scipy

import simplicity_lab

__all__ = (
    'MANIFEST_NAME', 'format_value', 'jsonable', 'write_csv', 'write_json', 'write_manifest', 'config_hash',
)

logger = logging.getLogger(__name__)

MANIFEST_NAME = 'manifest.json'


def format_value(value):
    """
    The CSV text of a single cell.
    """
    if isinstance(value, (bool, np.bool_)):
        return 'true' if value else 'false'
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return '%.17g' % value
    if value is None:
        return ''
    return str(value)


def jsonable(value):
    """
    Convert numpy and complex values into plain JSON types; complex numbers become ``[re, im]``.
    """
    if isinstance(value, dict):
        return dict((str(k), jsonable(v)) for k, v in value.items())
    if isinstance(value, (list, tuple, np.ndarray)):
        return [jsonable(v) for v in value]
    if isinstance(value, (complex, np.complexfloating)):
        return [float(value.real), float(value.imag)]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    return value


def _dump(payload):
    return json.dumps(jsonable(payload), sort_keys=True, indent=2) + '\n'


def write_csv(path, verifies, columns, rows):
    """
    Write a CSV table whose first line is a comment naming what it verifies, followed by the header row.
    """
    with open(path, 'w', newline='') as handle:
        handle.write('# verifies: {0}\n'.format(verifies))
        writer = csv.writer(handle, lineterminator='\n')
        writer.writerow(columns)
        for row in rows:
            writer.writerow([format_value(cell) for cell in row])
    logger.info("Wrote %s", path)
    return path


def write_json(path, verifies, payload):
    """
    Write a JSON record; the ``verifies`` key names what it verifies.
    """
    record = dict(payload)
    record['verifies'] = verifies
    with open(path, 'w') as handle:
        handle.write(_dump(record))
    logger.info("Wrote %s", path)
    return path


def config_hash(resolved):
    """
    SHA-256 of the canonical resolved configuration, without the output section.
    """
    canonical = dict((k, v) for k, v in resolved.items() if k != 'output')
    return hashlib.sha256(_dump(canonical).encode('utf-8')).hexdigest()


def versions():
    return {
        'python': platform.python_version(),
        'numpy': np.__version__,
        'scipy': scipy.__version__,
        'django': django.get_version(),
        'simplicity_lab': simplicity_lab.__version__,
    }


def write_manifest(directory, config, artifacts):
    """
    Write the run manifest: the resolved configuration with its hash, the seed, the package
    versions and the artifact names.
    """
    path = os.path.join(directory, MANIFEST_NAME)
    manifest = {
        'config': config.resolved,
        'config_sha256': config_hash(config.resolved),
        'seed': config.seed,
        'versions': versions(),
        'artifacts': sorted(os.path.basename(p) for p in artifacts),
    }
    with open(path, 'w') as handle:
        handle.write(_dump(manifest))
    logger.info("Wrote %s", path)
    return path
