import json

from simplicity_lab import appsettings
from simplicity_lab.forms import ConfigError, parse_config
from simplicity_lab.models import ModelKind
from simplicity_lab.tests.utils import NumericTestCase


def _config(**sections):
    return json.dumps(sections)


class ParseConfigTests(NumericTestCase):
    """
    Validation and defaults of the run configuration.
    """

    def assertConfigErrors(self, text, subcommand, expected_paths):
        with self.assertRaises(ConfigError) as context:
            parse_config(text, subcommand)
        paths = [path for path, message in context.exception.errors]
        for path in expected_paths:
            self.assertIn(path, paths)
        return context.exception

    def test_defaults(self):
        config = parse_config('', 'spectrum')
        self.assertEqual(config.model.kind, ModelKind.DISCRETE)
        self.assertEqual(config.model.box.shape, (8, 8))
        self.assertEqual(config.seed, appsettings.SIMPLICITY_LAB_DEFAULT_SEED)
        self.assertEqual(config.experiment['tau'], appsettings.SIMPLICITY_LAB_DEGENERACY_TOLERANCE)
        self.assertEqual(config.experiment['z_list'], (50j, 100j, 200j))
        self.assertEqual(config.out_dir, appsettings.SIMPLICITY_LAB_OUTPUT_DIR)

    def test_overrides(self):
        config = parse_config(_config(disorder={'seed': 3}, output={'out_dir': '/tmp/a'}), 'census', seed=9, out_dir='/tmp/b')
        self.assertEqual(config.seed, 9)
        self.assertEqual(config.out_dir, '/tmp/b')
        self.assertEqual(config.resolved['disorder']['seed'], 9)

    def test_model_b(self):
        text = _config(model={'kind': 'model_b', 'lower': [0, 0], 'upper': [5, 5], 'period': [2, 3], 'f': [1, 2, 3, 4, 5, 6]})
        config = parse_config(text, 'span')
        self.assertEqual(config.model.geometry.period, (2, 3))
        self.assertEqual(config.model.f, (1.0, 2.0, 3.0, 4.0, 5.0, 6.0))

    def test_complex_values(self):
        text = _config(experiment={'z': [0.5, 2], 'z_list': ['1+10j', 20, [0, 40]], 'z0': '2+1j'})
        config = parse_config(text, 'bs')
        self.assertEqual(config.experiment['z'], 0.5 + 2j)
        self.assertEqual(config.experiment['z_list'], (1 + 10j, 20 + 0j, 40j))
        self.assertEqual(config.resolved['experiment']['z0'], [2.0, 1.0])
        json.loads(config.to_json())

    def test_resolved_is_canonical(self):
        first = parse_config(_config(experiment={'trials': 5}), 'census').to_json()
        second = parse_config(_config(experiment={'trials': 5}), 'census').to_json()
        self.assertEqual(first, second)

    def test_invalid_json(self):
        self.assertConfigErrors('{"model": ', 'spectrum', [''])
        self.assertConfigErrors('[1, 2]', 'spectrum', [''])

    def test_unknown_keys_are_suggested(self):
        error = self.assertConfigErrors(_config(modle={}, experiment={'trails': 3}), 'census', ['modle', 'experiment.trails'])
        self.assertIn("Did you mean 'model'?", str(error))
        self.assertIn("Did you mean 'trials'?", str(error))

    def test_all_errors_are_collected(self):
        text = _config(
            model={'kind': 'model_b', 'lower': [0, 0], 'upper': [3]},
            disorder={'lo': 1.0, 'hi': 0.0},
            experiment={'trials': 0, 'z0': [1, -1], 'L_list': [3, 2, 4, 5]},
        )
        self.assertConfigErrors(text, 'census', [
            'model.upper', 'model.period', 'disorder.hi', 'experiment.trials', 'experiment.z0', 'experiment.L_list',
        ])

    def test_coupling_matrix_must_be_positive_definite(self):
        text = _config(model={'kind': 'model_a', 'W': [[1, 2], [2, 1]]})
        self.assertConfigErrors(text, 'spectrum', ['model.W'])

    def test_unknown_subcommand(self):
        self.assertConfigErrors('', 'plot', ['subcommand'])

    def test_profile_mismatch_is_a_model_error(self):
        text = _config(model={'kind': 'model_b', 'lower': [0, 0], 'upper': [3, 3], 'period': [2, 2], 'f': [1, 2]})
        self.assertConfigErrors(text, 'span', ['model'])

    def test_wrong_types(self):
        text = _config(model={'lower': [0, 0.5]}, experiment={'mu_list': 'many', 'require_simple': True})
        self.assertConfigErrors(text, 'spectrum', ['model.lower', 'experiment.mu_list'])
