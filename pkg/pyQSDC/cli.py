"""
Command line front end: ``qsdc simulate | sweep | curves | verify``.

Output goes to --out (stdout when omitted) as CSV or JSON.  Every row or
object carries the package version, the seed and the full command
configuration so a result file can be reproduced.

Exit codes: 0 success (including an aborted protocol run), 1 failed
verification, 2 invalid arguments, 3 I/O failure.
"""

import argparse
import csv
import json
import logging
import os
import sys
from multiprocessing import Pool

from . import __version__, analysis
from .analysis import CURVE_ALIASES, DEFAULT_SUCCESS_DETECTIONS, CurveKind, Protocol
from .channel import AttackParams
from .config import ProtocolConfig, load_attack_grid
from .exceptions import ProtocolException, QSDCException
from .protocol import estimate_detection_rate, exact_detection_rate, run_dpp, run_fpp
from .utilities import derive_seed, within_three_sigma
from .verify import run_acceptance

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_IO = 3

SEED_ENVIRONMENT_VARIABLE = 'QSDC_SEED'
DEFAULT_SWEEP_GRID = tuple((a, t) for a in (0.0, 0.25, 0.5, 0.75, 1.0) for t in (0.0, 0.25, 0.5, 0.75, 1.0))
DEFAULT_VERIFY_TRIALS = 100000
NUMBER_FORMAT = '#.9g'


def parse_attack(spec):
    """
    Turns an --attack value into AttackParams.

    'none' -> None (no eavesdropper)
    'identity' -> AttackParams.identity()
    'a,t' -> AttackParams.from_moduli(a, t)
    'flip:b' -> AttackParams.flip_and_phase(b)
    """
    if spec is None or spec.strip().lower() == 'none':
        return None
    spec = spec.strip().lower()
    if spec == 'identity':
        return AttackParams.identity()
    try:
        if spec.startswith('flip:'):
            return AttackParams.flip_and_phase(float(spec[len('flip:'):]))
        a, t = (float(value) for value in spec.split(','))
    except ValueError:
        raise ProtocolException("--attack must be 'none', 'identity', 'a,t' or 'flip:b', got {!r}".format(spec))
    return AttackParams.from_moduli(a, t)


class CliConfig(object):
    """Validated command line options"""

    def __init__(self, subcommand, protocol='fpp', n_pairs=100, control_prob=0.5, attack_spec=None, trials=None,
                 seed=None, output_path=None, output_format='csv', **options):
        self.subcommand = subcommand
        self.protocol = Protocol(protocol)
        if isinstance(n_pairs, bool) or not isinstance(n_pairs, int) or n_pairs < 1:
            raise ProtocolException('--n-pairs must be an integer >= 1, got {!r}'.format(n_pairs))
        self.n_pairs = n_pairs
        if not 0.0 <= control_prob < 1.0:
            raise ProtocolException('--control-prob must be in [0, 1), got {!r}'.format(control_prob))
        self.control_prob = control_prob
        self.attack_spec = attack_spec
        self.attack = parse_attack(attack_spec)
        if trials is not None and trials < 1:
            raise ProtocolException('--trials must be >= 1, got {!r}'.format(trials))
        self.trials = trials
        self.seed = self._resolve_seed(seed)
        self.output_path = output_path
        if output_format not in ('csv', 'json'):
            raise ProtocolException('--format must be csv or json, got {!r}'.format(output_format))
        self.output_format = output_format
        self.options = options

    def __repr__(self):
        return 'CliConfig(subcommand = %r, protocol = %s, seed = %s)' % (self.subcommand, self.protocol.value,
                                                                         self.seed)

    @staticmethod
    def _resolve_seed(seed):
        if seed is not None:
            return seed
        value = os.environ.get(SEED_ENVIRONMENT_VARIABLE)
        if value is None or value == '':
            return 0
        try:
            return int(value)
        except ValueError:
            raise ProtocolException('{} must be an integer, got {!r}'.format(SEED_ENVIRONMENT_VARIABLE, value))

    @classmethod
    def from_namespace(cls, args):
        options = dict(vars(args))
        for key in ('verbose', 'func'):
            options.pop(key, None)
        return cls(options.pop('subcommand'),
                   protocol=options.pop('protocol'),
                   n_pairs=options.pop('n_pairs'),
                   control_prob=options.pop('control_prob'),
                   attack_spec=options.pop('attack'),
                   trials=options.pop('trials'),
                   seed=options.pop('seed'),
                   output_path=options.pop('out'),
                   output_format=options.pop('format'),
                   **options)

    def option(self, name, default=None):
        return self.options.get(name, default)

    def to_dict(self):
        config = {'subcommand': self.subcommand,
                  'protocol': self.protocol.value,
                  'n_pairs': self.n_pairs,
                  'control_prob': self.control_prob,
                  'attack': self.attack_spec,
                  'trials': self.trials,
                  'seed': self.seed,
                  'format': self.output_format}
        config.update(self.options)
        return config


def _format_value(value):
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if value is None:
        return ''
    if isinstance(value, float):
        return format(value, NUMBER_FORMAT)
    return value


def _meta(config):
    return {'version': __version__, 'seed': config.seed, 'config': json.dumps(config.to_dict(), sort_keys=True)}


def write_table(config, header, rows):
    """
    Writes rows under header to config.output_path (stdout when None),
    followed by the version/seed/config columns.
    """
    meta = _meta(config)
    if config.output_format == 'json':
        document = {'meta': {'version': meta['version'], 'seed': meta['seed'], 'config': config.to_dict()},
                    'columns': list(header),
                    'rows': [dict(zip(header, row)) for row in rows]}
        _write_text(config.output_path, json.dumps(document, indent=2) + '\n')
        return

    def write_csv(f):
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(list(header) + list(meta))
        for row in rows:
            writer.writerow([_format_value(value) for value in row] + list(meta.values()))

    if config.output_path is None:
        write_csv(sys.stdout)
    else:
        with open(config.output_path, 'w', newline='') as f:
            write_csv(f)


def _write_text(path, text):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, 'w') as f:
            f.write(text)


def _analytic_rate(protocol, attack):
    if protocol is Protocol.FPP:
        return analysis.detect_prob_fpp(attack.a, attack.t)
    return analysis.detect_prob_dpp(attack.b)


def cmd_simulate(config):
    """
    One protocol run written as a single row, or with --trials a Monte
    Carlo estimate of the per-check detection rate.
    """
    if config.trials is not None:
        attack = config.attack if config.attack is not None else AttackParams.identity()
        transmission = config.option('transmission', 1)
        rate, stderr = estimate_detection_rate(config.protocol, attack, config.trials, config.seed, transmission)
        exact = exact_detection_rate(config.protocol, attack, transmission)
        header = ['protocol', 'transmission', 'trials', 'empirical_detection_rate', 'stderr',
                  'analytic_detection_rate', 'exact_detection_rate', 'within_3sigma']
        row = [config.protocol.value, transmission, config.trials, rate, stderr,
               _analytic_rate(config.protocol, attack), exact, within_three_sigma(rate, exact, config.trials)]
        write_table(config, header, [row])
        return EXIT_OK

    protocol_config = ProtocolConfig(config.n_pairs,
                                     control_prob=config.control_prob,
                                     attack=config.attack,
                                     eve_on_first_transmission=not config.option('no_eve_first', False),
                                     eve_on_second_transmission=config.option('eve_second', False),
                                     seed=config.seed,
                                     abort_threshold=config.option('abort_threshold', 0.0))
    runner = run_fpp if config.protocol is Protocol.FPP else run_dpp
    report = runner(protocol_config).to_dict()
    if report['aborted']:
        logger.info('protocol run aborted at check %s', report['aborted_at'])
    write_table(config, list(report), [list(report.values())])
    return EXIT_OK


def _sweep_point(task):
    """Evaluates one grid point; module level so worker processes can unpickle it"""
    index, a, t, protocol, trials, seed, transmission = task
    attack = AttackParams.from_moduli(a, t)
    rate, stderr = estimate_detection_rate(protocol, attack, trials, derive_seed(seed, index), transmission)
    exact = exact_detection_rate(protocol, attack, transmission)
    return [index, a, t, rate, stderr, _analytic_rate(Protocol(protocol), attack), exact,
            within_three_sigma(rate, exact, trials)]


def cmd_sweep(config):
    """
    Empirical vs closed-form detection rate over an (a, t) grid.  Rows are
    written in grid order whatever order the workers finish in.
    """
    grid_file = config.option('grid_file')
    grid = load_attack_grid(grid_file) if grid_file else list(DEFAULT_SWEEP_GRID)
    trials = config.trials if config.trials is not None else DEFAULT_VERIFY_TRIALS
    jobs = config.option('jobs', 1)
    if jobs < 1:
        raise ProtocolException('--jobs must be >= 1, got {!r}'.format(jobs))
    tasks = [(index, a, t, config.protocol.value, trials, config.seed, config.option('transmission', 1))
             for index, (a, t) in enumerate(grid)]
    logger.info('sweeping %s grid points with %s trials each on %s workers', len(tasks), trials, jobs)

    if jobs == 1:
        rows = [_sweep_point(task) for task in tasks]
    else:
        with Pool(processes=jobs) as pool:
            rows = pool.map(_sweep_point, tasks)

    header = ['index', 'a', 't', 'empirical_rate', 'stderr', 'analytic_rate', 'exact_rate', 'within_3sigma']
    write_table(config, header, rows)
    return EXIT_OK


def cmd_curves(config):
    kind = CurveKind(config.option('kind'))
    table = analysis.emit_curves(kind,
                                 points=config.option('points', 101),
                                 d_values=tuple(config.option('d_values') or DEFAULT_SUCCESS_DETECTIONS),
                                 c=config.control_prob,
                                 info_max=config.option('info_max', 20.0))
    write_table(config, table.header, table.rows)
    return EXIT_OK


def cmd_verify(config):
    """Runs the acceptance checks; exit 1 if any fails"""
    trials = config.trials if config.trials is not None else DEFAULT_VERIFY_TRIALS
    results = run_acceptance(trials=trials, seed=config.seed)
    write_table(config, ['check', 'passed', 'detail'], [[r.name, r.passed, r.detail] for r in results])
    if all(result.passed for result in results):
        return EXIT_OK
    logger.error('failed checks: %s', ', '.join(result.name for result in results if not result.passed))
    return EXIT_VERIFY_FAILED


COMMANDS = {'simulate': cmd_simulate, 'sweep': cmd_sweep, 'curves': cmd_curves, 'verify': cmd_verify}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--protocol', choices=[p.value for p in Protocol], default='fpp')
    common.add_argument('--n-pairs', type=int, default=100, help='message EPR pairs per run')
    common.add_argument('--control-prob', type=float, default=0.5, help='control mode probability c')
    common.add_argument('--attack', default=None, help="'none', 'identity', 'a,t' or 'flip:b'")
    common.add_argument('--trials', type=int, default=None, help='Monte Carlo trials')
    common.add_argument('--seed', type=int, default=None,
                        help='seed; defaults to ${} or 0'.format(SEED_ENVIRONMENT_VARIABLE))
    common.add_argument('--out', default=None, help='output file; stdout when omitted')
    common.add_argument('--format', choices=['csv', 'json'], default='csv')

    parser = argparse.ArgumentParser(prog='qsdc', description='Quantum secure direct communication simulator')
    parser.add_argument('--version', action='version', version='%(prog)s ' + __version__)
    parser.add_argument('-v', '--verbose', action='count', default=0)
    subparsers = parser.add_subparsers(dest='subcommand')
    subparsers.required = True

    simulate = subparsers.add_parser('simulate', parents=[common], help='run a protocol or estimate detection')
    simulate.add_argument('--eve-second', action='store_true', help='Eve also attacks the second transmission')
    simulate.add_argument('--no-eve-first', action='store_true', help='Eve leaves the first transmission alone')
    simulate.add_argument('--abort-threshold', type=float, default=0.0)
    simulate.add_argument('--transmission', type=int, choices=[1, 2], default=1)

    sweep = subparsers.add_parser('sweep', parents=[common], help='detection rate over an attack grid')
    sweep.add_argument('--grid-file', default=None, help='tab separated file with an ATTACK_TABLE section')
    sweep.add_argument('--jobs', type=int, default=1, help='worker processes')
    sweep.add_argument('--transmission', type=int, choices=[1, 2], default=1)

    curves = subparsers.add_parser('curves', parents=[common], help='information and success curve tables')
    curves.add_argument('kind', choices=[k.value for k in CurveKind] + sorted(CURVE_ALIASES),
                        help='fig2: information vs detection, fig3: eavesdropping success vs information')
    curves.add_argument('--points', type=int, default=101)
    curves.add_argument('--d-values', type=float, nargs='+', default=None)
    curves.add_argument('--info-max', type=float, default=20.0)

    subparsers.add_parser('verify', parents=[common], help='run the acceptance checks')
    return parser


def main(argv=None):
    """
    Entry point of the qsdc command.
    :param argv: argument list; sys.argv[1:] when None
    :return: exit code
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format='%(asctime)s %(name)s %(levelname)s %(message)s')

    try:
        config = CliConfig.from_namespace(args)
        return COMMANDS[config.subcommand](config)
    except QSDCException as e:
        logger.error('%s', e)
        sys.stderr.write('qsdc: error: {}\n'.format(e))
        return EXIT_USAGE
    except OSError as e:
        logger.error('%s', e)
        sys.stderr.write('qsdc: I/O error: {}\n'.format(e))
        return EXIT_IO
