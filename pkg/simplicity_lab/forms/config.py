"""
Validation of JSON run configurations.

Every section of the document is cleaned by its own form; violations of all sections
are collected and reported together, each with the key path it belongs to.
"""
from dataclasses import dataclass, field
import difflib
import json

from django import forms
from django.core.exceptions import NON_FIELD_ERRORS
from django.utils.translation import gettext_lazy as _

from simplicity_lab import appsettings
from simplicity_lab.exceptions import DomainError, SimplicityLabError
from simplicity_lab.lattice import LatticeBox
from simplicity_lab.models import DisorderLaw, DisorderSpec, ModelKind, ModelSpec
from simplicity_lab.models.hamiltonians import validate_coupling_matrix
from .fields import ComplexField, ComplexListField, FloatListField, IntegerVectorField, RealMatrixField

__all__ = (
    'SUBCOMMANDS', 'ConfigError', 'RunConfig', 'ModelForm', 'DisorderForm', 'ExperimentForm', 'OutputForm',
    'parse_config',
)

SUBCOMMANDS = ('verify-identities', 'spectrum', 'bs', 'census', 'decay', 'splitting', 'span')


class ConfigError(SimplicityLabError):
    """
    The run configuration is invalid. ``errors`` lists every ``(path, message)`` violation.
    """

    def __init__(self, errors):
        self.errors = list(errors)
        super(ConfigError, self).__init__("\n".join("{0}: {1}".format(path or '(document)', message) for path, message in self.errors))


class ModelForm(forms.Form):
    kind = forms.ChoiceField(choices=ModelKind.choices, required=False)
    lower = IntegerVectorField(required=False, min_length=1)
    upper = IntegerVectorField(required=False, min_length=1)
    W = RealMatrixField(required=False)
    period = IntegerVectorField(required=False, min_length=1)
    f = FloatListField(required=False, min_length=1)
    a = forms.FloatField(required=False)
    b = forms.FloatField(required=False)
    R = forms.IntegerField(required=False, min_value=4)

    defaults = {
        'kind': ModelKind.DISCRETE,
        'lower': (0, 0),
        'upper': (7, 7),
        'W': ((1.0,),),
        'period': None,
        'f': None,
        'a': 1.0,
        'b': 0.0,
        'R': None,
    }

    def clean_W(self):
        W = self.cleaned_data.get('W')
        if W is not None:
            try:
                validate_coupling_matrix(W)
            except DomainError as e:
                raise forms.ValidationError(str(e), code='constraint')
        return W

    def clean(self):
        cleaned_data = super(ModelForm, self).clean()
        lower = cleaned_data.get('lower')
        upper = cleaned_data.get('upper')
        if lower and upper and len(lower) != len(upper):
            self.add_error('upper', _("The box corners need the same dimension."))
        if cleaned_data.get('kind') == ModelKind.MODEL_B and not cleaned_data.get('period') and 'period' not in self._errors:
            self.add_error('period', _("A tile period is required for Model B."))
        return cleaned_data


class DisorderForm(forms.Form):
    law = forms.ChoiceField(choices=DisorderLaw.choices, required=False)
    lo = forms.FloatField(required=False)
    hi = forms.FloatField(required=False)
    mean = forms.FloatField(required=False)
    sd = forms.FloatField(required=False)
    seed = forms.IntegerField(required=False, min_value=0, max_value=2 ** 64 - 1)

    defaults = {
        'law': DisorderLaw.UNIFORM,
        'lo': 0.0,
        'hi': 1.0,
        'mean': 0.5,
        'sd': 1.0,
        'seed': None,
    }

    def clean(self):
        cleaned_data = super(DisorderForm, self).clean()
        lo = cleaned_data.get('lo')
        hi = cleaned_data.get('hi')
        if lo is not None and hi is not None and not lo < hi:
            self.add_error('hi', _("The support [lo, hi] is empty."))
        if cleaned_data.get('sd') is not None and cleaned_data['sd'] <= 0:
            self.add_error('sd', _("The standard deviation must be positive."))
        return cleaned_data


class ExperimentForm(forms.Form):
    trials = forms.IntegerField(required=False, min_value=1)
    tau = forms.FloatField(required=False, min_value=0.0)
    z = ComplexField(required=False)
    z_list = ComplexListField(required=False, min_length=1)
    L_list = IntegerVectorField(required=False, min_length=1)
    lambda_max = forms.FloatField(required=False, min_value=50.0)
    lambda_points = forms.IntegerField(required=False, min_value=3)
    lambda_list = FloatListField(required=False, min_length=2)
    coupling = forms.FloatField(required=False)
    energy_window = FloatListField(required=False, length=2)
    mu_list = FloatListField(required=False)
    z0 = ComplexField(required=False)
    require_simple = forms.BooleanField(required=False)

    defaults = {
        'trials': 100,
        'tau': None,
        'z': 2j,
        'z_list': (50j, 100j, 200j),
        'L_list': (1, 2, 3, 4, 5, 6),
        'lambda_max': 50.0,
        'lambda_points': 2001,
        'lambda_list': (1e2, 1e3, 1e4, 1e5, 1e6),
        'coupling': 1.0,
        'energy_window': (0.0, 0.5),
        'mu_list': None,
        'z0': 1 + 1j,
        'require_simple': False,
    }

    def clean_tau(self):
        tau = self.cleaned_data.get('tau')
        if tau is not None and tau <= 0:
            raise forms.ValidationError(_("The cluster tolerance must be positive."), code='constraint')
        return tau

    def clean_L_list(self):
        L_list = self.cleaned_data.get('L_list')
        if L_list and (L_list[0] < 1 or any(b <= a for a, b in zip(L_list, L_list[1:]))):
            raise forms.ValidationError(_("Distances must be positive and strictly increasing."), code='constraint')
        return L_list

    def clean_lambda_list(self):
        lambda_list = self.cleaned_data.get('lambda_list')
        if lambda_list and (lambda_list[0] <= 0 or any(b <= a for a, b in zip(lambda_list, lambda_list[1:]))):
            raise forms.ValidationError(_("Couplings must be positive and strictly increasing."), code='constraint')
        return lambda_list

    def clean_energy_window(self):
        window = self.cleaned_data.get('energy_window')
        if window and window[0] > window[1]:
            raise forms.ValidationError(_("The energy window [lo, hi] is empty."), code='constraint')
        return window

    def clean_z0(self):
        z0 = self.cleaned_data.get('z0')
        if z0 is not None and z0.imag <= 0:
            raise forms.ValidationError(_("z0 must lie in the upper half plane."), code='constraint')
        return z0

    def clean_coupling(self):
        coupling = self.cleaned_data.get('coupling')
        if coupling == 0:
            raise forms.ValidationError(_("The coupling must be non-zero."), code='constraint')
        return coupling


class OutputForm(forms.Form):
    out_dir = forms.CharField(required=False)

    defaults = {
        'out_dir': None,
    }


SECTIONS = (
    ('model', ModelForm),
    ('disorder', DisorderForm),
    ('experiment', ExperimentForm),
    ('output', OutputForm),
)


@dataclass(frozen=True)
class RunConfig:
    """
    A fully validated run: the model and disorder to sample, the experiment parameters
    and where to write. ``resolved`` is the canonical document with every default filled in.
    """
    subcommand: str
    model: ModelSpec
    disorder: DisorderSpec
    experiment: dict
    out_dir: str
    resolved: dict = field(repr=False)

    @property
    def seed(self):
        return self.disorder.master_seed

    def to_json(self):
        return json.dumps(self.resolved, sort_keys=True, indent=2) + '\n'


def _unknown_keys(path, given, known):
    errors = []
    for key in sorted(set(given) - set(known)):
        message = "Unknown key '{0}'.".format(key)
        suggestions = difflib.get_close_matches(key, list(known), n=1)
        if suggestions:
            message += " Did you mean '{0}'?".format(suggestions[0])
        errors.append(('{0}.{1}'.format(path, key) if path else key, message))
    return errors


def _form_errors(section, form):
    errors = []
    for name, messages in sorted(form.errors.items()):
        path = section if name == NON_FIELD_ERRORS else '{0}.{1}'.format(section, name)
        errors.extend((path, str(message)) for message in messages)
    return errors


def _jsonable(value):
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def _resolve(form):
    """
    Cleaned values with the section defaults for everything left out.
    """
    values = {}
    for name, default in form.defaults.items():
        value = form.cleaned_data.get(name)
        if value is None or (name not in form.data):
            value = default
        values[name] = value
    return values


def parse_config(text, subcommand, seed=None, out_dir=None):
    """
    Validate a JSON run configuration and resolve its defaults.

    ``seed`` overrides ``disorder.seed`` and ``out_dir`` overrides ``output.out_dir``.
    Raises :class:`ConfigError` with every violation found.
    """
    errors = []
    if subcommand not in SUBCOMMANDS:
        errors.append(('subcommand', "Unknown subcommand '{0}', choose from {1}.".format(subcommand, ', '.join(SUBCOMMANDS))))

    try:
        document = json.loads(text) if text and text.strip() else {}
    except ValueError as e:
        raise ConfigError(errors + [('', "Not valid JSON: {0}".format(e))])
    if not isinstance(document, dict):
        raise ConfigError(errors + [('', "The configuration must be a JSON object.")])

    errors.extend(_unknown_keys('', document, dict(SECTIONS)))
    sections = {}
    for section, form_class in SECTIONS:
        data = document.get(section, {})
        if not isinstance(data, dict):
            errors.append((section, "Section must be a JSON object."))
            continue
        form = form_class(data=data)
        errors.extend(_unknown_keys(section, data, form.fields))
        if not form.is_valid():
            errors.extend(_form_errors(section, form))
            continue
        sections[section] = _resolve(form)
    if errors:
        raise ConfigError(errors)

    model = sections['model']
    if model['R'] is None:
        model['R'] = appsettings.SIMPLICITY_LAB_TWO_SITE_RADIUS
    disorder = sections['disorder']
    if seed is not None:
        disorder['seed'] = int(seed)
    if disorder['seed'] is None:
        disorder['seed'] = appsettings.SIMPLICITY_LAB_DEFAULT_SEED
    experiment = sections['experiment']
    if experiment['tau'] is None:
        experiment['tau'] = appsettings.SIMPLICITY_LAB_DEGENERACY_TOLERANCE
    output = sections['output']
    if out_dir is not None:
        output['out_dir'] = out_dir
    if output['out_dir'] is None:
        output['out_dir'] = appsettings.SIMPLICITY_LAB_OUTPUT_DIR

    try:
        model_spec = ModelSpec(
            kind=model['kind'],
            box=LatticeBox(model['lower'], model['upper']) if model['kind'] != ModelKind.TWO_SITE else None,
            W=model['W'],
            period=model['period'],
            f=model['f'],
            a=model['a'],
            b=model['b'],
            R=model['R'],
        )
    except DomainError as e:
        errors.append(('model', str(e)))
    try:
        disorder_spec = DisorderSpec(
            law=disorder['law'], lo=disorder['lo'], hi=disorder['hi'],
            mean=disorder['mean'], sd=disorder['sd'], master_seed=disorder['seed'],
        )
    except DomainError as e:
        errors.append(('disorder', str(e)))
    if errors:
        raise ConfigError(errors)

    resolved = {
        'subcommand': subcommand,
        'model': dict((k, _jsonable(v)) for k, v in model.items()),
        'disorder': dict((k, _jsonable(v)) for k, v in disorder.items()),
        'experiment': dict((k, _jsonable(v)) for k, v in experiment.items()),
        'output': dict((k, _jsonable(v)) for k, v in output.items()),
    }
    return RunConfig(
        subcommand=subcommand,
        model=model_spec,
        disorder=disorder_spec,
        experiment=experiment,
        out_dir=output['out_dir'],
        resolved=resolved,
    )
