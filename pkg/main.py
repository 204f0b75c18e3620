import argparse
import logging
import sys

from fourwave import classical, coherent, kummer, quantum
from fourwave.config import build_config
from fourwave.errors import ConfigError, FourWaveError
from fourwave.report_writer import ReportWriter
from fourwave.sector import basis_states, sector_report, shape_of
from fourwave.verifier import VerificationRun

logger = logging.getLogger("fwm")

VERIFY_FAILED = 3


def cmd_sector(cfg, writer):
    cfg.require("c")
    writer.create_json(sector_report(cfg.c, cfg.params))
    return 0


def cmd_spectrum(cfg, writer):
    cfg.require("c")
    rows = quantum.spectrum_rows(cfg.c, cfg.params)
    writer.write(cfg.format, ["k", "lambda", "energy"], rows)
    return 0


def cmd_transition(cfg, writer):
    """|<m|U(t)|n>|^2 on the time grid"""
    cfg.require("c")
    if not cfg.params.is_resonant():
        logger.info("detuning %g: using the numerical sector eigenbasis", cfg.params.detuning)
    rows = [(t, quantum.transition_probability(cfg.c, cfg.m, cfg.n, t, cfg.params, allow_fallback=True))
            for t in cfg.times]
    writer.write(cfg.format, ["t", "prob"], rows)
    return 0


def cmd_evolve(cfg, writer):
    """Amplitude <m|U(t)|n> on the time grid"""
    cfg.require("c")
    N = shape_of(cfg.c).N
    for name, index in (("n", cfg.n), ("m", cfg.m)):
        if not 0 <= index <= N:
            raise ConfigError(f"--{name} {index} outside 0..{N}")
    rows = []
    for t in cfg.times:
        amplitude = quantum.propagator(cfg.c, cfg.params, t, allow_fallback=True).matrix[cfg.m, cfg.n]
        rows.append((t, amplitude.real, amplitude.imag))
    writer.write(cfg.format, ["t", "re", "im"], rows)
    return 0


def _initial_reduced(cfg):
    """Reduced start point and outer phases from --z or from --b/--I0/--psi"""
    if cfg.z is not None:
        aa = classical.to_action_angle(cfg.z)
        return aa.reduced, aa.psi[1:]
    cfg.require("b", "I0")
    return classical.ReducedCoords(cfg.I0, cfg.psi[0], cfg.b), cfg.psi[1:]


def cmd_classical(cfg, writer):
    rc0, outer = _initial_reduced(cfg)
    traj = classical.trajectory(rc0, cfg.params, cfg.times)
    logger.info("classical run: %s", traj.method)
    phases = classical.integrate_outer_phases(traj, cfg.params, outer)
    states = classical.reconstruct_states(traj, phases)
    energy = classical.hamiltonian(states[0], cfg.params)
    rows = []
    for i, t in enumerate(traj.times):
        drift = classical.hamiltonian(states[i], cfg.params) - energy
        rows.append((t, traj.I0[i], traj.psi0[i], phases[0, i], phases[1, i], phases[2, i], drift))
    writer.write(cfg.format, ["t", "I0", "psi0", "psi1", "psi2", "psi3", "E_drift"], rows)
    return 0


def cmd_kummer(cfg, writer):
    """Mesh of the shape, or the trajectory on it when an initial I0 is given"""
    if cfg.I0 is None and cfg.z is None:
        cfg.require("b")
        writer.write(cfg.format, ["I0", "psi0", "x", "y"], kummer.shape_mesh(cfg.b).tolist())
        return 0
    rc0, _ = _initial_reduced(cfg)
    traj = classical.trajectory(rc0, cfg.params, cfg.times)
    report = kummer.trajectory_on_shape(traj, cfg.params)
    logger.info("max |C| %.3e, max |H - E| %.3e", report["max_casimir"], report["max_energy_error"])
    polyline = report["polyline"]
    writer.write(cfg.format, ["t", "x", "y", "I0"], polyline.tolist())
    return 0


def cmd_coherent(cfg, writer):
    """<z| exp(i t H / hbar) |n> for the n-th basis state of sector c"""
    cfg.require("c", "z")
    states = basis_states(cfg.c)
    if not 0 <= cfg.n < len(states):
        raise ConfigError(f"--n {cfg.n} outside 0..{len(states) - 1}")
    rows = []
    for t in cfg.times:
        amplitude = coherent.fock_coherent_amplitude(cfg.z, states[cfg.n], t, cfg.params)
        rows.append((t, amplitude.real, amplitude.imag, abs(amplitude)))
    writer.write(cfg.format, ["t", "re", "im", "abs"], rows)
    return 0


def cmd_verify(cfg, writer):
    run = VerificationRun()
    report = run.run()
    writer.create_json(report)
    for failure in report["failures"]:
        logger.error("FAILED %s: deviation %s", failure["name"], failure["deviation"])
    return VERIFY_FAILED if report["failures"] else 0


COMMANDS = {
    "sector": (cmd_sector, "Shape, subcase and lambda0 of a sector (JSON)"),
    "spectrum": (cmd_spectrum, "Dual Hahn eigenvalues and sector energies"),
    "transition": (cmd_transition, "Transition probability between two sector states"),
    "evolve": (cmd_evolve, "Propagator amplitude between two sector states"),
    "classical": (cmd_classical, "Classical trajectory in action-angle variables"),
    "kummer": (cmd_kummer, "Kummer shape mesh or a trajectory on it"),
    "coherent": (cmd_coherent, "Coherent state to Fock state amplitude"),
    "verify": (cmd_verify, "Run the invariant suite"),
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', type=str, help='JSON file whose keys are the flag names')
    common.add_argument('--c', type=str, help='Sector label c1,c2,c3')
    common.add_argument('--omega', type=str, help='Frequencies omega0,omega1,omega2,omega3')
    common.add_argument('--g', type=float, help='Coupling constant')
    common.add_argument('--hbar', type=float, help='Action unit (default: 1)')
    common.add_argument('--n', type=int, help='Initial local index')
    common.add_argument('--m', type=int, help='Final local index')
    common.add_argument('--t0', type=float, help='Start time (default: 0)')
    common.add_argument('--t1', type=float, help='End time (default: 10)')
    common.add_argument('--steps', type=int, help='Number of time steps (default: 200)')
    common.add_argument('--T', type=int, help='Fock truncation, total quanta (default: 6)')
    common.add_argument('--format', type=str, help='csv or json (default: csv)')
    common.add_argument('--output', type=str, help='Output file (default: stdout)')
    common.add_argument('--b', type=str, help='Frozen actions b1,b2,b3')
    common.add_argument('--I0', type=float, help='Initial I0')
    common.add_argument('--psi', type=str, help='Initial angles psi0[,psi1,psi2,psi3]')
    common.add_argument('--z', type=str, help='Initial mode amplitudes z0,z1,z2,z3 (Python complex syntax)')
    common.add_argument('-v', '--verbose', action='store_true', default=None, help='Debug logging')

    parser = argparse.ArgumentParser(prog='fwm', description='Four-wave mixing: classical and quantum toolkit')
    subparsers = parser.add_subparsers(dest='command', required=True)
    for name, (_, help_text) in COMMANDS.items():
        subparsers.add_parser(name, parents=[common], help=help_text)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    flags = {k: v for k, v in vars(args).items() if k not in ('command', 'config')}
    logging.basicConfig(format="[%(module)-12s] %(message)s", stream=sys.stderr,
                        level=logging.DEBUG if args.verbose else logging.INFO)
    try:
        cfg = build_config(flags, args.config)
        if cfg.verbose:
            logging.getLogger().setLevel(logging.DEBUG)
        writer = ReportWriter(cfg.output)
        handler, _ = COMMANDS[args.command]
        return handler(cfg, writer)
    except FourWaveError as e:
        logger.error("%s: %s", type(e).__name__, e)
        return e.exit_code


if __name__ == '__main__':
    sys.exit(main())
