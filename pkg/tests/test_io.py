import json

import numpy as np
import pytest

from relkin.io import dumps_csv, dumps_json, format_float, pickle_load, pickle_save, write_text


@pytest.mark.parametrize('value, text', [
    (0.1, '0.10000000000000001'),
    (2.0, '2.0'),
    (-3.0, '-3.0'),
    (0.5, '0.5'),
    (np.float64(0.25), '0.25'),
])
def test_format_float(value, text):
    assert format_float(value) == text


def test_dumps_json_round_trips_floats():
    values = [0.1, 1 / 3, np.float64(np.pi), 1e-300, 2.0]
    loaded = json.loads(dumps_json({'values': values}))
    assert loaded['values'] == [float(v) for v in values]
    assert all(isinstance(v, float) for v in loaded['values'])


def test_dumps_json_uses_seventeen_digits():
    text = dumps_json({'x': 0.1, 'n': 3, 'flag': True, 'name': 'rest'})
    assert '"x": 0.10000000000000001' in text
    assert '"n": 3' in text
    assert '"flag": true' in text
    assert '"name": "rest"' in text


def test_dumps_json_tags_non_finite():
    record = {'a': np.inf, 'b': [-np.inf, np.nan], 'c': np.int64(3), 'd': np.float64(np.inf),
              'e': np.array([np.float64(-np.inf), 1.5])}
    loaded = json.loads(dumps_json(record))
    assert loaded == {'a': 'inf', 'b': ['-inf', 'nan'], 'c': 3, 'd': 'inf', 'e': ['-inf', 1.5]}


def test_dumps_json_is_deterministic():
    record = {'x': 0.30000000000000004, 'y': (1, 2.5)}
    assert dumps_json(record) == dumps_json(dict(record))


def test_dumps_csv():
    text = dumps_csv(['J', 'v'], [[0.5, 0.1], [1.0, 'rest']])
    assert text == 'J,v\n0.5,0.10000000000000001\n1.0,rest\n'


def test_write_text(tmp_path, capsys):
    write_text('hello\n')
    assert capsys.readouterr().out == 'hello\n'
    target = tmp_path / 'out.txt'
    write_text('a,b\n', str(target))
    assert target.read_text() == 'a,b\n'


def test_pickle(tmp_path):
    target = str(tmp_path / 'result.pk')
    pickle_save(target, (np.arange(3), {'k': 1.5}))
    array, record = pickle_load(target)
    np.testing.assert_array_equal(array, [0, 1, 2])
    assert record == {'k': 1.5}
