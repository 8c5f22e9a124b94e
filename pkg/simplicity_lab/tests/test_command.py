from io import StringIO
import json
import os
import tempfile

from django.core.management import call_command
from django.core.management.base import CommandError

from simplicity_lab.forms import parse_config
from simplicity_lab.output import MANIFEST_NAME, config_hash
from simplicity_lab.runner import EXIT_INVALID, EXIT_OK, run
from simplicity_lab.tests.utils import NumericTestCase

SMALL_MODEL = {'kind': 'discrete', 'lower': [0, 0], 'upper': [3, 3]}


class RunnerTests(NumericTestCase):
    """
    Running subcommands and writing their artifacts.
    """

    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.out_dir = self._tmp.name

    def tearDown(self):
        self._tmp.cleanup()

    def _run(self, subcommand, out_dir=None, **sections):
        config = parse_config(json.dumps(sections), subcommand, out_dir=out_dir or self.out_dir)
        return run(subcommand, config), config

    def _read(self, *parts):
        with open(os.path.join(*parts)) as handle:
            return handle.read()

    def test_spectrum_artifacts(self):
        result, config = self._run('spectrum', model=SMALL_MODEL, disorder={'seed': 4})
        self.assertEqual(result.exit_code, EXIT_OK)
        names = sorted(os.path.basename(path) for path in result.artifacts)
        self.assertEqual(names, ['manifest.json', 'spectrum.csv', 'spectrum.json'])

        lines = self._read(self.out_dir, 'spectrum', 'spectrum.csv').splitlines()
        self.assertTrue(lines[0].startswith('# verifies: '))
        self.assertEqual(lines[1], 'index,eigenvalue')
        self.assertEqual(len(lines), 2 + 16)

        manifest = json.loads(self._read(self.out_dir, 'spectrum', MANIFEST_NAME))
        self.assertEqual(manifest['seed'], 4)
        self.assertEqual(manifest['config_sha256'], config_hash(config.resolved))
        self.assertIn('numpy', manifest['versions'])

    def test_identical_runs_identical_bytes(self):
        first, _ = self._run('census', model=SMALL_MODEL, experiment={'trials': 6})
        self.assertEqual(first.exit_code, EXIT_OK)
        contents = dict((path, self._read(path)) for path in first.artifacts)
        second, _ = self._run('census', model=SMALL_MODEL, experiment={'trials': 6})
        self.assertEqual(sorted(second.artifacts), sorted(contents))
        for path, text in contents.items():
            self.assertEqual(self._read(path), text, path)

    def test_census_table(self):
        result, _ = self._run('census', model=SMALL_MODEL, experiment={'trials': 5, 'require_simple': True})
        self.assertEqual(result.exit_code, EXIT_OK)
        lines = self._read(self.out_dir, 'census', 'census.csv').splitlines()
        self.assertEqual(lines[1], 'trial,min_gap,cluster_count,largest_cluster')
        self.assertEqual([line.split(',')[0] for line in lines[2:]], ['0', '1', '2', '3', '4'])

    def test_span_needs_model_b(self):
        result, _ = self._run('span', model=SMALL_MODEL)
        self.assertEqual(result.exit_code, EXIT_INVALID)
        self.assertFalse(os.path.exists(os.path.join(self.out_dir, 'span')))

    def test_span(self):
        model = {'kind': 'model_b', 'lower': [-4, -4], 'upper': [5, 5], 'period': [2, 2], 'f': [1.0, 1.3, 1.7, 2.2]}
        result, _ = self._run('span', model=model, experiment={'coupling': 0.7})
        self.assertEqual(result.exit_code, EXIT_OK, result.message)
        span = json.loads(self._read(self.out_dir, 'span', 'span.json'))
        self.assertEqual(span['achieved_rank'], 4)

    def test_decay(self):
        model = {'kind': 'discrete', 'lower': [-8, -8], 'upper': [8, 8]}
        result, _ = self._run('decay', model=model, experiment={'z': [0, 4], 'L_list': [1, 2, 3, 4, 5]})
        self.assertEqual(result.exit_code, EXIT_OK, result.message)
        record = json.loads(self._read(self.out_dir, 'decay', 'decay.json'))
        self.assertGreater(record['eta'], 0.0)
        self.assertIsNone(record['underflow_from'])

    def test_splitting(self):
        result, _ = self._run('splitting', model={'kind': 'two_site', 'a': 1.0, 'b': 0.0}, experiment={'z_list': [[0, 20], [0, 40], [0, 80]]})
        self.assertEqual(result.exit_code, EXIT_OK, result.message)

    def test_bs(self):
        result, _ = self._run('bs', model=SMALL_MODEL, experiment={'coupling': 2.5})
        self.assertEqual(result.exit_code, EXIT_OK, result.message)
        lines = self._read(self.out_dir, 'bs', 'bs.csv').splitlines()
        self.assertEqual(len(lines), 2 + 3)
        self.assertTrue(all(line.endswith(',true') for line in lines[2:]))

        averaging = json.loads(self._read(self.out_dir, 'bs', 'averaging.json'))
        self.assertEqual(averaging['points'], 2001)
        self.assertLessEqual(averaging['lhs'], averaging['rhs'] + averaging['error_budget'])


class CommandTests(NumericTestCase):
    """
    The ``simplicity`` management command.
    """

    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.out_dir = self._tmp.name

    def tearDown(self):
        self._tmp.cleanup()

    def _write_config(self, document):
        path = os.path.join(self.out_dir, 'config.json')
        with open(path, 'w') as handle:
            json.dump(document, handle)
        return path

    def test_spectrum(self):
        path = self._write_config({'model': SMALL_MODEL})
        stdout = StringIO()
        call_command('simplicity', 'spectrum', config=path, seed=3, out_dir=self.out_dir, stdout=stdout)
        self.assertIn('spectrum finished, seed 3.', stdout.getvalue())
        self.assertTrue(os.path.exists(os.path.join(self.out_dir, 'spectrum', 'spectrum.csv')))

    def test_invalid_config(self):
        path = self._write_config({'model': {'kind': 'model_b', 'lower': [0, 0], 'upper': [3, 3]}, 'disorder': {'lo': 2, 'hi': 1}})
        stderr = StringIO()
        with self.assertRaises(CommandError) as context:
            call_command('simplicity', 'census', config=path, out_dir=self.out_dir, stderr=stderr)
        self.assertEqual(context.exception.returncode, 2)
        self.assertIn('model.period', stderr.getvalue())
        self.assertIn('disorder.hi', stderr.getvalue())
        self.assertFalse(os.path.exists(os.path.join(self.out_dir, 'census')))

    def test_missing_config_file(self):
        with self.assertRaises(CommandError) as context:
            call_command('simplicity', 'spectrum', config=os.path.join(self.out_dir, 'missing.json'), out_dir=self.out_dir)
        self.assertEqual(context.exception.returncode, 2)

    def test_runtime_domain_error(self):
        path = self._write_config({'model': SMALL_MODEL})
        with self.assertRaises(CommandError) as context:
            call_command('simplicity', 'span', config=path, out_dir=self.out_dir)
        self.assertEqual(context.exception.returncode, 2)

    def test_verify_identities(self):
        stdout = StringIO()
        call_command('simplicity', 'verify-identities', out_dir=self.out_dir, workers=2, stdout=stdout)
        with open(os.path.join(self.out_dir, 'verify-identities', 'ledger.json')) as handle:
            ledger = json.load(handle)
        self.assertTrue(ledger['passed'])
        self.assertGreaterEqual(len(ledger['entries']), 20)
