# src/cli/commands.py
import argparse
import logging
import sys
from typing import List, Optional

import numpy as np
import pandas as pd

from src.cli.bench import BenchRunner
from src.cli.state_io import StateFileHandler
from src.cone.cone_geometry import (decompose, default_centre, face_of, search_rank_one_centre,
                                    spectral_ensemble)
from src.config.settings import DECISION_TOL, Settings
from src.linalg.decompositions import rank_tol
from src.multipartite.genuine_entanglement import genuine_threshold
from src.separability import EXIT_CODES
from src.separability.thresholds import check
from src.separability.werner_ensemble import werner_separable_ensemble, werner_target
from src.states.demo_states import DemoStates
from src.states.quantum_states import MixedState, PureState, SchmidtSpectrum
from src.states.state_operations import bipartition_reshape, generalized_spectrum, schmidt_coefficients
from src.utils.errors import InputShapeError, SeparabilityError, StateFileError
from src.utils.performance_decorator import check_memory_budget

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_ENTANGLED = 3
EXIT_INCONCLUSIVE = 4
EXIT_IO = 5


def _fmt(value: Optional[float]) -> str:
    return "n/a" if value is None else f"{value:.8f}"


def _configure_logging(verbosity: int):
    level = logging.ERROR if verbosity == 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(stream=sys.stderr, level=level,
                        format="%(levelname)s %(name)s: %(message)s", force=True)


def _load_pure(path: str, settings: Settings) -> PureState:
    state = StateFileHandler.read_state(path)
    if not isinstance(state, PureState):
        raise InputShapeError(f"{path}: expected a pure state, got a mixed state")
    check_memory_budget(state.dims.total, settings.max_total_dim)
    return state


def _load_mixed(path: str, settings: Settings) -> MixedState:
    state = StateFileHandler.read_state(path)
    if isinstance(state, PureState):
        state = state.to_mixed()
    check_memory_budget(state.dims.total, settings.max_total_dim)
    return state


def cmd_schmidt(args, settings: Settings) -> int:
    """Print the (generalized) Schmidt spectrum across a cut and the rank-one test"""
    z = _load_pure(args.input, settings)
    cut = tuple(args.cut)
    if args.metrics:
        A = StateFileHandler.read_operator(args.metrics[0])
        B = StateFileHandler.read_operator(args.metrics[1])
        sigma = generalized_spectrum(bipartition_reshape(z, cut), A, B, tol=settings.rank_tol)
    else:
        sigma = schmidt_coefficients(z, cut, tol=settings.rank_tol)

    values = " ".join(f"{s:.8f}" for s in sigma.sigmas)
    flag = "separable" if sigma.rank == 1 else "entangled"
    print(f"{values}, rank {sigma.rank}, {flag}")
    return EXIT_OK


def cmd_check(args, settings: Settings) -> int:
    """Run the separability pipeline and map the verdict to an exit code"""
    rho = _load_mixed(args.input, settings)
    if not rho.dims.is_bipartite():
        raise InputShapeError(f"check needs a bipartite state, got dims {list(rho.dims.dims)}")
    centre_factors = None
    if args.marginals:
        centre_factors = tuple(StateFileHandler.read_operator(path) for path in args.marginals)

    verdict = check(rho, centre_factors=centre_factors, tol=settings.rank_tol, psd_tol=settings.psd_tol)
    print(f"status: {verdict.status.value}")
    print(f"lambda: {_fmt(verdict.lam)}")
    print(f"lambda_star: {_fmt(verdict.lambda_star)}")
    print(f"lambda_bar: {_fmt(verdict.lambda_bar)}")
    print(f"ppt: {str(verdict.ppt).lower()} (min eigenvalue {verdict.min_pt_eigenvalue:.3e})")
    print(f"K: {verdict.K if verdict.K is not None else 'n/a'}")
    print(f"criterion: {verdict.criterion}")
    if verdict.reason:
        print(f"reason: {verdict.reason}")
    return EXIT_CODES[verdict.status]


def cmd_genuine(args, settings: Settings) -> int:
    """Scan all bipartitions and test genuine entanglement at the supplied lambda"""
    z = _load_pure(args.input, settings)
    M = [StateFileHandler.read_operator(path) for path in args.marginals] if args.marginals else None
    scan = genuine_threshold(z, M, tol=settings.rank_tol, n_jobs=settings.n_jobs,
                             max_total_dim=settings.max_total_dim)

    table = pd.DataFrame([
        {
            "cut": _cut_label(cut.subset, z.dims.n),
            "sigma0": f"{cut.sigma0:.8f}",
            "sigma1": f"{cut.sigma1:.8f}",
            "product": f"{cut.product:.8f}"
        }
        for cut in scan.cuts
    ])
    print(table.to_string(index=False))
    print(f"min cut: {_cut_label(scan.min_cut, z.dims.n)}")
    print(f"lambda_star: {_fmt(scan.lambda_star)}")
    if M is not None:
        print(f"lambda_star_remapped: {_fmt(scan.lambda_star_remapped)}")

    entangled = args.lam > scan.lambda_star + DECISION_TOL
    print(f"lambda: {_fmt(args.lam)}, {'genuinely entangled' if entangled else 'not detected'}")
    return EXIT_ENTANGLED if entangled else EXIT_OK


def _cut_label(subset, n: int) -> str:
    rest = [i for i in range(n) if i not in subset]
    return "".join(map(str, subset)) + "|" + "".join(map(str, rest))


def cmd_werner(args, settings: Settings) -> int:
    """Write the explicit product ensemble of the Werner state at its threshold"""
    N1, N2 = args.dims
    sigma = SchmidtSpectrum.from_values(args.sigma)
    ensemble = werner_separable_ensemble(sigma, N1, N2)
    lambda_star = 1.0 / (1.0 + N1 * N2 * sigma.product)
    residual = ensemble.residual(werner_target(sigma, N1, N2, lambda_star))
    if residual > settings.recon_tol:
        logger.warning("reconstruction residual %.3e exceeds %.1e", residual, settings.recon_tol)

    StateFileHandler.write_ensemble(args.out, ensemble, metadata={
        "sigma": [float(s) for s in sigma.sigmas],
        "lambda_star": lambda_star
    })
    print(f"lambda_star: {_fmt(lambda_star)}")
    print(f"terms: {len(ensemble)}")
    print(f"residual: {residual:.3e}")
    return EXIT_OK


def cmd_bench(args, settings: Settings) -> int:
    """Seeded comparison of the cone criterion with the PPT oracle"""
    if args.instances < 1:
        logger.error("instances must be >= 1, got %d", args.instances)
        return EXIT_USAGE
    report = BenchRunner(tuple(args.dims), args.instances, args.seed, settings).run()
    report.write(args.out)
    if args.csv:
        report.write_csv(args.csv)

    counts = ", ".join(f"{key}={value}" for key, value in report.counts.items())
    print(f"instances: {report.instances} ({counts})")
    print(f"ppt_agreement_rate: {report.ppt_agreement_rate:.6f}")
    print(f"k1_agreement_rate: {report.k1_agreement_rate:.6f}")
    return EXIT_OK


def cmd_decompose(args, settings: Settings) -> int:
    """Print rho = (1 - lambda) C + lambda E and optionally write E"""
    rho = _load_mixed(args.input, settings)
    if args.search_trials:
        rng = np.random.default_rng(args.seed)
        search = search_rank_one_centre(rho, args.search_trials, rng, tol=settings.rank_tol)
        if search.best_decomposition is None:
            raise SeparabilityError("centre search found no valid decomposition")
        decomposition = search.best_decomposition
        print(f"search: best rank(E) {search.best_rank} over {len(search.history)} trials")
    else:
        if args.centre:
            C = _load_mixed(args.centre, settings)
        else:
            C = default_centre(face_of(rho, settings.rank_tol), rho.dims)
        decomposition = decompose(rho, C, tol=settings.rank_tol)

    residual = decomposition.residual(rho)
    if residual > settings.recon_tol:
        logger.warning("reconstruction residual %.3e exceeds %.1e", residual, settings.recon_tol)
    print(f"lambda: {_fmt(decomposition.lam)}")
    print(f"mu_star: {_fmt(decomposition.mu_star)}")
    print(f"rank(rho): {rank_tol(rho.matrix, settings.rank_tol)}")
    print(f"rank(E): {rank_tol(decomposition.E.matrix, settings.rank_tol)}")
    print(f"K: {len(spectral_ensemble(decomposition.E, settings.rank_tol))}")
    print(f"residual: {residual:.3e}")
    if args.out:
        StateFileHandler.write(args.out, decomposition.E, metadata={
            "lambda": decomposition.lam,
            "mu_star": decomposition.mu_star
        })
    return EXIT_OK


def cmd_demo(args, settings: Settings) -> int:
    """Write a catalog state to a StateFile"""
    params = {key: value for key, value in (
        ("lam", args.lam), ("n", args.n), ("d", args.d), ("seed", args.seed),
        ("dims", tuple(args.dims) if args.dims else None),
        ("indices", tuple(args.indices) if args.indices else None)
    ) if value is not None}
    state = DemoStates.load_state(args.name, **params)
    check_memory_budget(state.dims.total, settings.max_total_dim)
    StateFileHandler.write(args.out, state, metadata={"demo": args.name, **{
        key: list(value) if isinstance(value, tuple) else value for key, value in params.items()
    }})
    print(f"wrote {args.name} on dims {list(state.dims.dims)} to {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--rank-tol", type=float, default=None, help="Relative rank tolerance")
    common.add_argument("--psd-tol", type=float, default=None, help="PSD tolerance on partial-transpose eigenvalues")
    common.add_argument("--recon-tol", type=float, default=None, help="Reconstruction residual tolerance")
    common.add_argument("--n-jobs", type=int, default=None, help="joblib workers")
    common.add_argument("--max-dim", type=int, default=None, help="Total-dimension cap")
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v info, -vv debug (stderr)")

    parser = argparse.ArgumentParser(
        prog="cone_check",
        description="Separability and genuine-entanglement certificates by cone decomposition"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    schmidt = commands.add_parser("schmidt", parents=[common], help="Schmidt spectrum across a cut")
    schmidt.add_argument("--in", dest="input", required=True, help="Pure StateFile")
    schmidt.add_argument("--cut", type=int, nargs="+", default=[0], help="Factor indices on the row side")
    schmidt.add_argument("--metrics", nargs=2, metavar=("A", "B"), help="Operator files for the GSVD metrics")
    schmidt.set_defaults(handler=cmd_schmidt)

    check_cmd = commands.add_parser("check", parents=[common], help="Bipartite separability verdict")
    check_cmd.add_argument("--in", dest="input", required=True, help="Mixed StateFile")
    check_cmd.add_argument("--marginals", nargs=2, metavar=("M1", "M2"), help="Operator files for the centre")
    check_cmd.set_defaults(handler=cmd_check)

    genuine = commands.add_parser("genuine", parents=[common], help="Genuine multipartite entanglement threshold")
    genuine.add_argument("--in", dest="input", required=True, help="Pure StateFile with n >= 3 factors")
    genuine.add_argument("--lam", type=float, required=True, help="Mixing weight of the pure state")
    genuine.add_argument("--marginals", nargs="+", help="One operator file per factor")
    genuine.set_defaults(handler=cmd_genuine)

    werner = commands.add_parser("werner", parents=[common], help="Explicit separable ensemble at lambda*")
    werner.add_argument("--sigma", type=float, nargs="+", required=True, help="Schmidt coefficients (normalized internally)")
    werner.add_argument("--dims", type=int, nargs=2, required=True, metavar=("N1", "N2"))
    werner.add_argument("--out", required=True, help="Output file for the product terms")
    werner.set_defaults(handler=cmd_werner)

    bench = commands.add_parser("bench", parents=[common], help="Seeded benchmark against the PPT oracle")
    bench.add_argument("--dims", type=int, nargs=2, required=True, metavar=("N1", "N2"))
    bench.add_argument("--instances", type=int, required=True)
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--out", required=True, help="JSON report path")
    bench.add_argument("--csv", help="Optional per-instance CSV table")
    bench.set_defaults(handler=cmd_bench)

    decompose_cmd = commands.add_parser("decompose", parents=[common], help="Cone decomposition of a state")
    decompose_cmd.add_argument("--in", dest="input", required=True, help="Mixed StateFile")
    decompose_cmd.add_argument("--centre", help="Mixed StateFile used as the centre C")
    decompose_cmd.add_argument("--search-trials", type=int, default=0, help="Random product centres to try")
    decompose_cmd.add_argument("--seed", type=int, default=0)
    decompose_cmd.add_argument("--out", help="Write the boundary state E")
    decompose_cmd.set_defaults(handler=cmd_decompose)

    demo = commands.add_parser("demo", parents=[common], help="Write a catalog state")
    demo.add_argument("--name", required=True, choices=DemoStates.available_states())
    demo.add_argument("--lam", type=float)
    demo.add_argument("--n", type=int)
    demo.add_argument("--d", type=int)
    demo.add_argument("--dims", type=int, nargs="+")
    demo.add_argument("--indices", type=int, nargs="+", help="Basis indices, one per factor")
    demo.add_argument("--seed", type=int)
    demo.add_argument("--out", required=True)
    demo.set_defaults(handler=cmd_demo)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args.verbose)

    try:
        settings = Settings.from_env().with_overrides(
            rank_tol=args.rank_tol,
            psd_tol=args.psd_tol,
            recon_tol=args.recon_tol,
            n_jobs=args.n_jobs,
            max_total_dim=args.max_dim
        )
        return args.handler(args, settings)
    except OSError as exc:
        logger.error("I/O error: %s", exc)
        return EXIT_IO
    except (StateFileError, SeparabilityError, ValueError) as exc:
        logger.error("%s", exc)
        return EXIT_USAGE
