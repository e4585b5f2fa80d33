import argparse
import logging
import sys

import numpy as np

from relkin.config import OUTPUT_FORMATS, UNIT_SYSTEMS, RunConfig, Units
from relkin.dynamics import FIELD_KINDS, TRAJECTORY_COLUMNS, FieldConfig, LorentzIntegrator, ParticleState
from relkin.errors import (ConvergenceError, DomainError, IntegrationError, LightSpeedStateError,
                           RestStateError)
from relkin.halfplane import HalfPlanePoint, distance, distance_closed_form, geodesic_endpoints
from relkin.io import dumps_csv, dumps_json, write_text
from relkin.kinematics import (MomentumState, angles_from_momenta, momenta_from_counter_rapidity,
                               momenta_from_rapidity, rapidity_from_velocity, velocity_pair)
from relkin.qdeform import LADDER_COLUMNS, quantized_ladder, solve_mass_equation
from relkin.verify import SUITE_NAMES, run_verification

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_IDENTITY_FAILURE = 1
EXIT_DOMAIN = 2
EXIT_CONVERGENCE = 3

LOG_FORMAT = '%(asctime)s - %(levelname)s - %(message)s'
STATE_COLUMNS = ('mass', 'p0', 'p', 'psi', 'chi', 'phi', 'pi0', 'v', 'v_bar')


def _floats(text, count):
    try:
        values = [float(part) for part in text.split(',')]
    except ValueError:
        raise DomainError(f'expected {count} comma-separated numbers, got {text!r}')
    if len(values) != count:
        raise DomainError(f'expected {count} comma-separated numbers, got {text!r}')
    return values


def state_record(state, units):
    """
    Full conversion record; rest and light-speed angles are reported by name.
    Under SI units mass is in kg, v and v_bar in m/s (v^2 + v_bar^2 = c^2), and p0, p, pi0 stay
    momenta in kg m/s (p0 is the energy divided by c); phi is in s / (kg m).
    """
    try:
        angles = angles_from_momenta(state)
        psi, chi, phi, pi0 = angles.psi, angles.chi, angles.phi, angles.pi0
    except RestStateError as e:
        psi, chi, phi, pi0 = e.psi, 'rest', 'rest', 0.0
    except LightSpeedStateError as e:
        psi, chi, phi, pi0 = 'light-speed', e.chi, e.phi, e.pi0
    velocities = velocity_pair(state)
    return {
        'mass': units.mass_from_internal(state.mass),
        'p0': state.p0,
        'p': state.p,
        'psi': psi,
        'chi': chi,
        'phi': phi,
        'pi0': pi0,
        'v': units.velocity_from_internal(velocities.v),
        'v_bar': units.velocity_from_internal(velocities.v_bar),
    }


def convert_state(args, units):
    mass = units.mass_to_internal(args.mass)
    if args.rapidity is not None:
        if mass == 0.0:
            raise DomainError('the rapidity form needs mass > 0; give --phi for a massless state')
        return momenta_from_rapidity(mass, args.rapidity)
    if args.counter_rapidity is not None:
        return momenta_from_counter_rapidity(mass, chi=args.counter_rapidity)
    if args.phi is not None:
        return momenta_from_counter_rapidity(mass, phi=args.phi)
    if args.momenta is not None:
        p0, p = _floats(args.momenta, 2)
        return MomentumState(mass, p0, p)
    v = units.velocity_to_internal(args.velocity)
    if mass == 0.0:
        raise DomainError('a velocity below light speed needs mass > 0')
    return momenta_from_rapidity(mass, rapidity_from_velocity(v))


def render(config, record=None, columns=None, rows=None):
    """Format a single record or a table in the configured output format."""
    if rows is None:
        columns, rows = list(record), [list(record.values())]
        if config.output_format == 'json':
            return dumps_json(record)
    if config.output_format == 'json':
        return dumps_json([dict(zip(columns, row)) for row in rows])
    if config.output_format == 'csv':
        return dumps_csv(columns, rows)
    if record is not None:
        return ''.join(f'{key}: {value}\n' for key, value in record.items())
    width = max(len(c) for c in columns)
    lines = ['  '.join(c.rjust(max(width, 12)) for c in columns)]
    lines += ['  '.join(f'{v:>{max(width, 12)}.6g}' if isinstance(v, float) else str(v).rjust(max(width, 12))
                        for v in row) for row in rows]
    return '\n'.join(lines) + '\n'


def cmd_convert(args, config):
    record = state_record(convert_state(args, config.units), config.units)
    write_text(render(config, record), args.out)
    return EXIT_OK


def run_trajectory(args, config):
    mass = config.units.mass_to_internal(args.mass)
    initial = ParticleState.on_shell(mass, _floats(args.r, 3), _floats(args.p, 3), charge=args.charge)
    if args.field == 'uniform_electric':
        fields = FieldConfig.uniform_electric(_floats(args.E, 3))
    elif args.field == 'uniform_magnetic':
        fields = FieldConfig.uniform_magnetic(_floats(args.B, 3))
    else:
        fields = FieldConfig.coulomb(args.k)
    integrator = LorentzIntegrator(initial, fields, args.tau_end, args.step, progress=args.verbose > 0)
    integrator.integrate()
    rows = [[float(v) for v in row] for row in integrator.as_array()]
    return render(config, columns=TRAJECTORY_COLUMNS, rows=rows)


def run_solve_mass(args, config):
    roots = solve_mass_equation(args.K, args.pi0)
    record = {
        'K': roots.K,
        'pi0': roots.pi0,
        'zero_root': roots.zero_root,
        'pm_roots': list(roots.pm_roots) if roots.pm_roots else None,
        'exact': None if roots.y_exact is None else roots.y_exact * roots.pi0,
        'approx': None if roots.y_cubic is None else roots.y_cubic * roots.pi0,
        'relative_gap': roots.relative_gap,
        'residual': roots.residual,
    }
    return render(config, record)


def run_ladder(args, config):
    rows = [[row.J, row.alpha, row.v, row.wavelength]
            for row in quantized_ladder(config.units.mass_to_internal(args.mass), args.kappa, args.jmax,
                                        planck=config.units.h)]
    return render(config, columns=LADDER_COLUMNS, rows=rows)


def run_hyperdist(args, config):
    z, w = HalfPlanePoint.parse(args.z), HalfPlanePoint.parse(args.w)
    d = distance(z, w)
    endpoints = [p.as_list() for p in geodesic_endpoints(z, w)] if z != w else None
    record = {
        'distance': d,
        'endpoints': endpoints,
        'method_agreement': abs(d - distance_closed_form(z, w)),
    }
    return render(config, record)


RUNNERS = {
    'trajectory': run_trajectory,
    'solve-mass': run_solve_mass,
    'ladder': run_ladder,
    'hyperdist': run_hyperdist,
}


def cmd_run(args, config):
    write_text(RUNNERS[args.task](args, config), args.out)
    return EXIT_OK


def cmd_verify(args, config):
    report, passed = run_verification(config, args.suite, progress=args.verbose > 0)
    if config.output_format == 'human':
        lines = []
        for suite in report['suites']:
            for check in suite['checks']:
                status = 'ok' if check['pass'] else 'FAIL'
                lines.append(f"{suite['name']:<11} {check['id']:<32} {check['residual']:.3e} <= {check['tol']:.1e} "
                             f"{status}")
            lines += [f"{suite['name']:<11} erratum {e['id']}" for e in suite['errata']]
        text = '\n'.join(lines) + '\n'
    else:
        text = dumps_json(report)
    write_text(text, args.out)
    return EXIT_OK if passed else EXIT_IDENTITY_FAILURE


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--format', choices=OUTPUT_FORMATS, default='json', dest='output_format')
    common.add_argument('--seed', type=int, default=None, help='seed of the randomised suites')
    common.add_argument('--tolerance', action='append', default=[], metavar='NAME=VALUE',
                        help='override one tolerance, repeatable')
    common.add_argument('--out', default=None, help='output file, stdout if omitted')
    common.add_argument('--units', choices=UNIT_SYSTEMS, default='natural',
                        help='si: mass in kg, velocities in m/s, momenta and energies/c in kg m/s')
    common.add_argument('-v', '--verbose', action='count', default=0)

    parser = argparse.ArgumentParser(prog='relkin', description='Rapidity and counter-rapidity kinematics')
    commands = parser.add_subparsers(dest='command', required=True)

    convert = commands.add_parser('convert', parents=[common], help='convert between state representations')
    convert.add_argument('--mass', type=float, required=True)
    given = convert.add_mutually_exclusive_group(required=True)
    given.add_argument('--rapidity', type=float)
    given.add_argument('--counter-rapidity', type=float)
    given.add_argument('--phi', type=float)
    given.add_argument('--momenta', metavar='P0,P')
    given.add_argument('--velocity', type=float)
    convert.set_defaults(handler=cmd_convert)

    run = commands.add_parser('run', help='trajectories, solvers and geometry queries')
    tasks = run.add_subparsers(dest='task', required=True)

    trajectory = tasks.add_parser('trajectory', parents=[common])
    trajectory.add_argument('--mass', type=float, default=1.0)
    trajectory.add_argument('--charge', type=float, default=1.0)
    trajectory.add_argument('--r', default='0,0,0', metavar='X,Y,Z')
    trajectory.add_argument('--p', default='0,0,0', metavar='PX,PY,PZ')
    trajectory.add_argument('--field', choices=FIELD_KINDS, default='uniform_electric')
    trajectory.add_argument('--E', default='1,0,0', metavar='EX,EY,EZ')
    trajectory.add_argument('--B', default='0,0,1', metavar='BX,BY,BZ')
    trajectory.add_argument('--k', type=float, default=-0.1, help='Coulomb strength')
    trajectory.add_argument('--tau-end', type=float, default=1.0)
    trajectory.add_argument('--step', type=float, default=1e-3)

    solve_mass = tasks.add_parser('solve-mass', parents=[common])
    solve_mass.add_argument('--K', type=float, required=True)
    solve_mass.add_argument('--pi0', type=float, default=1.0)

    ladder = tasks.add_parser('ladder', parents=[common])
    ladder.add_argument('--mass', type=float, required=True)
    ladder.add_argument('--kappa', type=float, required=True)
    ladder.add_argument('--jmax', type=float, required=True)

    hyperdist = tasks.add_parser('hyperdist', parents=[common])
    hyperdist.add_argument('--z', required=True, metavar='RE,IM')
    hyperdist.add_argument('--w', required=True, metavar='RE,IM')
    run.set_defaults(handler=cmd_run)

    verify = commands.add_parser('verify', parents=[common], help='run the property suites')
    verify.add_argument('--suite', choices=('all',) + SUITE_NAMES, default='all')
    verify.set_defaults(handler=cmd_verify)
    return parser


def make_config(args):
    kwargs = {'output_format': args.output_format, 'units': Units.from_name(args.units)}
    if args.seed is not None:
        kwargs['seed'] = args.seed
    config = RunConfig(**kwargs)
    for assignment in args.tolerance:
        config.override_tolerance(assignment)
    return config


def main(argv=None):
    args = build_parser().parse_args(argv)
    level = logging.WARNING if args.verbose == 0 else logging.INFO if args.verbose == 1 else logging.DEBUG
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr)

    try:
        return args.handler(args, make_config(args))
    except (ConvergenceError, IntegrationError) as e:
        logger.error('%s', e)
        return EXIT_CONVERGENCE
    except DomainError as e:
        logger.error('%s', e)
        return EXIT_DOMAIN


if __name__ == '__main__':
    sys.exit(main())
