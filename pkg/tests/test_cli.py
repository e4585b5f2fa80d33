import json

import numpy as np
import pytest
from scipy import constants

from relkin.cli import STATE_COLUMNS, main

EPSILON = 1e-12

REQUIRED_ERRATA = {'V0_misprint', 'sigma_normalisation', 'determinant_exponent', 'ladder_sum_exponent',
                   'half_period_shift'}


def run_json(capsys, argv):
    code = main(argv)
    return code, json.loads(capsys.readouterr().out)


def test_convert_rapidity(capsys):
    code, record = run_json(capsys, ['convert', '--mass', '1', '--rapidity', '1', '--format', 'json'])
    assert code == 0
    assert list(record) == list(STATE_COLUMNS)
    np.testing.assert_allclose(record['p0'], 1.543081, atol=1e-6)
    np.testing.assert_allclose(record['v'], np.tanh(1.0), rtol=EPSILON)


def test_convert_special_states(capsys):
    code, record = run_json(capsys, ['convert', '--mass', '0', '--phi', '2'])
    assert code == 0
    assert record['p0'] == 0.5 and record['p'] == 0.5
    assert record['psi'] == 'light-speed'
    assert record['chi'] == 0.0

    code, record = run_json(capsys, ['convert', '--mass', '1', '--momenta', '1,0'])
    assert code == 0
    assert record['psi'] == 0.0
    assert record['chi'] == 'rest'


def test_convert_csv(capsys):
    assert main(['convert', '--mass', '2', '--velocity', '0.6', '--format', 'csv']) == 0
    header, row = capsys.readouterr().out.splitlines()
    assert header.split(',') == list(STATE_COLUMNS)
    np.testing.assert_allclose(float(row.split(',')[1]), 2.5, rtol=EPSILON)


def test_convert_errors():
    assert main(['convert', '--mass', '-1', '--rapidity', '1']) == 2
    assert main(['convert', '--mass', '1', '--momenta', '1,2']) == 2
    assert main(['convert', '--mass', '1', '--momenta', 'a,b']) == 2
    assert main(['convert', '--mass', '1', '--rapidity', '800']) == 2
    with pytest.raises(SystemExit):
        main(['convert', '--mass', '1'])


def test_run_solve_mass(capsys):
    code, record = run_json(capsys, ['run', 'solve-mass', '--K', '1.1'])
    assert code == 0
    assert abs(record['exact'] - 0.555) < 0.005
    np.testing.assert_allclose(record['approx'], 0.5222, atol=1e-4)

    code, record = run_json(capsys, ['run', 'solve-mass', '--K', '0.5'])
    assert record['pm_roots'] is None


def test_run_hyperdist(capsys):
    code, record = run_json(capsys, ['run', 'hyperdist', '--z', '0,1', '--w', '0,2'])
    assert code == 0
    np.testing.assert_allclose(record['distance'], np.log(2.0), rtol=EPSILON)
    assert record['endpoints'] == [[0.0, 0.0], ['inf', 0.0]]
    assert record['method_agreement'] < EPSILON

    assert main(['run', 'hyperdist', '--z', '0,-1', '--w', '0,2']) == 2


def test_run_ladder(capsys):
    assert main(['run', 'ladder', '--mass', '1', '--kappa', '1', '--jmax', '2', '--format', 'csv']) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == 'J,alpha,v,lambda'
    assert len(lines) == 6
    v = [float(line.split(',')[2]) for line in lines[1:]]
    assert all(a > b for a, b in zip(v, v[1:]))


def test_run_trajectory(tmp_path):
    out = tmp_path / 'trajectory.csv'
    assert main(['run', 'trajectory', '--tau-end', '0.01', '--step', '0.001', '--format', 'csv',
                 '--out', str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0].split(',')[:3] == ['tau', 't', 'x']
    assert len(lines) == 12

    assert main(['run', 'trajectory', '--step', '-1']) == 2


def test_verify_gamma(capsys):
    code, report = run_json(capsys, ['verify', '--suite', 'gamma'])
    assert code == 0
    (suite,) = report['suites']
    exact = [c for c in suite['checks'] if c['tol'] == 0.0]
    assert exact and all(c['residual'] == 0.0 for c in exact)
    assert {e['id'] for e in suite['errata']} >= {'V0_misprint', 'sigma_normalisation', 'lorentz_sign'}


def test_verify_tolerance_override(capsys):
    code, report = run_json(capsys, ['verify', '--suite', 'kinematics', '--tolerance', 'mass_shell=1e-6'])
    assert code == 0
    (check,) = [c for c in report['suites'][0]['checks'] if c['id'] == 'mass_shell']
    assert check['tol'] == 1e-6

    assert main(['verify', '--suite', 'kinematics', '--tolerance', 'no_such_check=1']) == 2
    assert main(['verify', '--suite', 'kinematics', '--tolerance', 'mass_shell=-1']) == 2


def test_verify_is_deterministic(tmp_path, monkeypatch):
    first, second = tmp_path / 'a.json', tmp_path / 'b.json'
    assert main(['verify', '--suite', 'qdeform', '--seed', '7', '--out', str(first)]) == 0
    assert main(['verify', '--suite', 'qdeform', '--seed', '7', '--out', str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()

    monkeypatch.setenv('RELKIN_SEED', '123')
    assert main(['verify', '--suite', 'qdeform', '--out', str(first)]) == 0
    assert json.loads(first.read_text())['seed'] == 123


def test_verify_all(tmp_path):
    out = tmp_path / 'report.json'
    assert main(['verify', '--suite', 'all', '--seed', '42', '--out', str(out)]) == 0
    report = json.loads(out.read_text())
    assert set(report) == {'version', 'seed', 'prng', 'suites'}
    assert report['seed'] == 42 and report['prng'] == 'MT19937'
    assert [s['name'] for s in report['suites']] == ['kinematics', 'dynamics', 'spinor', 'qdeform', 'gamma',
                                                     'halfplane']
    for suite in report['suites']:
        for check in suite['checks']:
            assert set(check) == {'id', 'paper_ref', 'residual', 'tol', 'pass'}
            assert check['paper_ref'].startswith(('Eq', '§'))
            assert check['pass'], (suite['name'], check['id'])
    errata = {e['id'] for suite in report['suites'] for e in suite['errata']}
    assert errata >= REQUIRED_ERRATA


def test_convert_si_velocities(capsys):
    c = constants.c
    code, record = run_json(capsys, ['convert', '--units', 'si', '--mass', '2', '--velocity', repr(0.6 * c)])
    assert code == 0
    assert record['mass'] == pytest.approx(2.0, rel=EPSILON)
    np.testing.assert_allclose([record['v'], record['v_bar']], [0.6 * c, 0.8 * c], rtol=1e-12)
    np.testing.assert_allclose(record['v'] ** 2 + record['v_bar'] ** 2, c ** 2, rtol=1e-12)
    np.testing.assert_allclose(record['p0'], 2.5 * c, rtol=1e-12)


def test_identity_failure_exits_one(capsys):
    assert main(['verify', '--suite', 'kinematics', '--tolerance', 'mass_shell=1e-300']) == 1
    report = json.loads(capsys.readouterr().out)
    (check,) = [c for c in report['suites'][0]['checks'] if c['id'] == 'mass_shell']
    assert check['pass'] is False


def test_integration_failure_exits_three():
    assert main(['run', 'trajectory', '--tau-end', '1', '--step', '0.5']) == 3
