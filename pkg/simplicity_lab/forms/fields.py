"""
Form fields for values parsed from a JSON run configuration.
"""
import numbers

from django import forms
from django.core.exceptions import ValidationError
import numpy as np


def _is_number(value):
    return isinstance(value, numbers.Real) and not isinstance(value, bool)


class _ListField(forms.Field):
    """
    A JSON list of items, cleaned item by item.
    """
    default_error_messages = {
        'not_a_list': "Enter a list.",
        'min_length': "Enter at least %(min_length)d values.",
        'length': "Enter exactly %(length)d values.",
    }

    def __init__(self, *args, **kwargs):
        self.min_length = kwargs.pop('min_length', None)
        self.length = kwargs.pop('length', None)
        super(_ListField, self).__init__(*args, **kwargs)

    def item_to_python(self, item, position):
        raise NotImplementedError

    def to_python(self, value):
        if value is None or value == '':
            return None
        if not isinstance(value, (list, tuple)):
            raise ValidationError(self.error_messages['not_a_list'], code='not_a_list')
        items = tuple(self.item_to_python(item, i) for i, item in enumerate(value))
        if self.length is not None and len(items) != self.length:
            raise ValidationError(self.error_messages['length'], code='length', params={'length': self.length})
        if self.min_length is not None and len(items) < self.min_length:
            raise ValidationError(self.error_messages['min_length'], code='min_length', params={'min_length': self.min_length})
        return items


class IntegerVectorField(_ListField):
    """
    A list of integers, e.g. a box corner or a tile period.
    """

    def item_to_python(self, item, position):
        if not isinstance(item, int) or isinstance(item, bool):
            raise ValidationError("Entry {0} is not an integer.".format(position), code='invalid')
        return item


class FloatListField(_ListField):

    def item_to_python(self, item, position):
        if not _is_number(item) or not np.isfinite(item):
            raise ValidationError("Entry {0} is not a finite number.".format(position), code='invalid')
        return float(item)


class ComplexField(forms.Field):
    """
    A complex number given as a real number, a ``[re, im]`` pair or a Python literal such as ``"1+1j"``.
    """
    default_error_messages = {
        'invalid': "Enter a complex number as a number, a [re, im] pair or a literal like \"1+1j\".",
    }

    def to_python(self, value):
        if value is None or value == '':
            return None
        return self.parse(value, self.error_messages['invalid'])

    @staticmethod
    def parse(value, message):
        if _is_number(value):
            result = complex(value)
        elif isinstance(value, (list, tuple)) and len(value) == 2 and all(_is_number(x) for x in value):
            result = complex(value[0], value[1])
        elif isinstance(value, str):
            try:
                result = complex(value.replace(' ', ''))
            except ValueError:
                raise ValidationError(message, code='invalid')
        else:
            raise ValidationError(message, code='invalid')
        if not np.isfinite(result.real) or not np.isfinite(result.imag):
            raise ValidationError(message, code='invalid')
        return result


class ComplexListField(_ListField):

    def item_to_python(self, item, position):
        return ComplexField.parse(item, "Entry {0} is not a complex number.".format(position))


class RealMatrixField(forms.Field):
    """
    A square matrix given as a list of rows.
    """
    default_error_messages = {
        'invalid': "Enter a square matrix as a list of rows of finite numbers.",
    }

    def to_python(self, value):
        if value is None or value == '':
            return None
        if (not isinstance(value, (list, tuple)) or not value
                or not all(isinstance(row, (list, tuple)) and len(row) == len(value) for row in value)
                or not all(_is_number(x) and np.isfinite(x) for row in value for x in row)):
            raise ValidationError(self.error_messages['invalid'], code='invalid')
        return tuple(tuple(float(x) for x in row) for row in value)
