"""
CLI Commands
One handler per command; each returns (report, exit code)
"""
import argparse
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

from loguru import logger

from catalog.registry import BuiltinFamily, list_builtins, resolve_builtin
from core.covector_system import (
    CovectorSystem,
    instantiate,
    load_covector_system,
    parse_assignment,
    parse_bindings,
    parse_rational,
    validate,
)
from core.exceptions import InputFormatError, InvalidSystemError, WDVVFailureError
from core.kohno_checker import (
    check_connection_flatness_at,
    crosscheck_equivalence,
    has_kohno_property,
    resolution_of_identity,
)
from core.vee_checker import gram_metric, gram_metric_symbolic, is_vee_system, require_nonsingular
from frobenius.regularization import PATH_PARAMETER, along_locus, regularize, regularized_metric
from frobenius.sampling import make_rng, sample_admissible_points
from frobenius.structure import (
    FrobeniusData,
    check_associativity_at,
    endomorphism_sum,
    run_point_checks,
    unity_scale,
)
from hamiltonian.loop_grid import LoopSpec, load_loop_spec, random_loop
from hamiltonian.nonlocal_operator import assemble_nonlocal_operator, run_loop_tests
from hamiltonian.poisson_conditions import run_poisson_checks
from hierarchy.lenard_magri import (
    involutivity_check,
    lenard_magri_check,
    local_pointwise_identity_check,
)
from hierarchy.poly_frobenius import POLY_BUILTINS, builtin_poly_frobenius
from hierarchy.principal_hierarchy import build_hierarchy, verify_recursion
from utils.config import settings

Result = Tuple[Dict, int]

PASS, FAIL = 0, 1


# Source resolution


def load_source(args: argparse.Namespace) -> Tuple[CovectorSystem, Optional[BuiltinFamily]]:
    """Exactly one of --input / --builtin"""
    if bool(args.input) == bool(args.builtin):
        raise InputFormatError("Give exactly one of --input FILE or --builtin NAME")
    if args.input:
        return load_covector_system(args.input), None
    family = resolve_builtin(args.builtin)
    return family.build(), family


def concrete_system(args: argparse.Namespace) -> CovectorSystem:
    """Bound, validated system; invalid input raises InvalidSystemError"""
    system, _ = load_source(args)
    system = instantiate(system, parse_bindings(args.param))
    report = validate(system)
    if not report.ok:
        raise InvalidSystemError(report.messages)
    return system


def _regularization_target(args: argparse.Namespace, system: CovectorSystem, family: Optional[BuiltinFamily]):
    """(path system, parameter, limit, bindings, scale) from --path / --at / --scale"""
    bindings = parse_bindings(args.param)
    recorded = family.degenerate_path if family else None
    if args.path:
        parameter, expression = parse_assignment(args.path)
        path_system = along_locus(system, parameter, expression)
        bindings.update(parse_bindings(args.at))
        target = (path_system, PATH_PARAMETER, Fraction(0))
    else:
        at = parse_bindings(args.at)
        if len(at) != 1:
            raise InputFormatError("Without --path, --at must name exactly one parameter and its limit")
        parameter, limit = next(iter(at.items()))
        target = (system, parameter, limit)
    if args.scale is not None:
        scale = parse_rational(args.scale)
    elif recorded is not None and recorded.parameter == parameter:
        scale = recorded.scale
    else:
        scale = Fraction(1)
    return (*target, bindings, scale)


def frobenius_source(args: argparse.Namespace) -> FrobeniusData:
    """Gram-metric structure, or the regularized limit when --at is given"""
    if getattr(args, "at", None) or getattr(args, "path", None):
        system, family = load_source(args)
        path_system, parameter, limit, bindings, scale = _regularization_target(args, system, family)
        return regularize(path_system, parameter, limit, bindings, scale)
    return FrobeniusData.from_covector_system(concrete_system(args))


def _points(data: FrobeniusData, args: argparse.Namespace) -> List[Tuple[Fraction, ...]]:
    rng = make_rng(args.seed)
    return sample_admissible_points(data.dimension, data.is_admissible, args.points, rng)


# Handlers


def cmd_validate(args: argparse.Namespace) -> Result:
    system, _ = load_source(args)
    bindings = parse_bindings(args.param)
    if bindings or not system.parameters:
        system = instantiate(system, bindings)
    report = validate(system)
    return {"system": system.name, "validation": report.to_dict()}, PASS if report.ok else FAIL


def cmd_check_vee(args: argparse.Namespace) -> Result:
    system = concrete_system(args)
    verdict = is_vee_system(system)
    return {"system": system.name, "vee": verdict.to_dict()}, PASS if verdict.holds else FAIL


def cmd_check_kohno(args: argparse.Namespace) -> Result:
    system = concrete_system(args)
    verdict = has_kohno_property(system)
    gram = require_nonsingular(system)
    points = _points(FrobeniusData.from_covector_system(system), args)
    flatness = [check_connection_flatness_at(system, gram, point) for point in points]
    report = {
        "system": system.name,
        "kohno": verdict.to_dict(),
        "resolutionOfIdentity": resolution_of_identity(system, gram),
        "flatness": [{"point": list(p), "flat": flat} for p, flat in zip(points, flatness)],
    }
    return report, PASS if verdict.holds and all(flatness) else FAIL


def cmd_check_equivalence(args: argparse.Namespace) -> Result:
    system = concrete_system(args)
    report = crosscheck_equivalence(system)
    return {"system": system.name, **report.to_dict()}, PASS if report.agree else FAIL


def cmd_gram(args: argparse.Namespace) -> Result:
    system, _ = load_source(args)
    bindings = parse_bindings(args.param)
    if system.parameters and not bindings:
        return {"system": system.name, "parameters": list(system.parameters),
                "gram": gram_metric_symbolic(system)}, PASS
    system = instantiate(system, bindings)
    gram = gram_metric(system)
    return {"system": system.name, "gram": gram.matrix, "rank": gram.rank,
            "inverse": gram.inverse, "singular": gram.is_singular}, PASS


def cmd_build_frobenius(args: argparse.Namespace) -> Result:
    data = frobenius_source(args)
    reports = run_point_checks(data, _points(data, args))
    passed = all(report.passed for report in reports)
    report = {
        **data.to_dict(),
        "unity": unity_scale(data),
        "points": [r.to_dict() for r in reports],
        "passed": passed,
    }
    return report, PASS if passed else FAIL


def cmd_check_wdvv(args: argparse.Namespace) -> Result:
    if args.builtin in POLY_BUILTINS:
        try:
            data = builtin_poly_frobenius(args.builtin)
        except WDVVFailureError as e:
            return {"system": args.builtin, "wdvv": False, "error": str(e)}, FAIL
        return {"system": data.name, "wdvv": True}, PASS
    data = frobenius_source(args)
    points = _points(data, args)
    results = [check_associativity_at(data, point) for point in points]
    failures = [list(p) for p, ok in zip(points, results) if not ok]
    return {"system": data.name, "wdvv": not failures, "failingPoints": failures}, PASS if not failures else FAIL


def cmd_regularize(args: argparse.Namespace) -> Result:
    system, family = load_source(args)
    path_system, parameter, limit, bindings, scale = _regularization_target(args, system, family)
    limit_metric = regularized_metric(path_system, parameter, limit, scale)
    if set(limit_metric.parameters) - set(bindings):
        return {"system": system.name, "scale": scale, **limit_metric.to_dict()}, PASS
    data = regularize(path_system, parameter, limit, bindings, scale)
    report = {
        **data.to_dict(),
        "scale": scale,
        "order": limit_metric.order,
        "survivors": data.covector_system.labels,
        "endomorphismSum": endomorphism_sum(data),
        "unity": unity_scale(data),
    }
    return report, PASS


def cmd_check_poisson_conditions(args: argparse.Namespace) -> Result:
    data = frobenius_source(args)
    reports = run_poisson_checks(data, _points(data, args))
    passed = all(report.passed for report in reports)
    return {"system": data.name, "points": [r.to_dict() for r in reports], "passed": passed}, PASS if passed else FAIL


def _tolerance(args: argparse.Namespace) -> float:
    """--tol bounds the residuals and the integrand means alike"""
    return settings.residual_tolerance if args.tol is None else args.tol


def _loops(data: FrobeniusData, args: argparse.Namespace, rng, bound: Optional[int] = None) -> List[LoopSpec]:
    if args.loop:
        return [load_loop_spec(args.loop)]
    return [random_loop(data, rng, bound=bound) for _ in range(args.loops)]


def cmd_loop_test(args: argparse.Namespace) -> Result:
    data = frobenius_source(args)
    rng = make_rng(args.seed)
    operator = assemble_nonlocal_operator(data)
    grids = [spec.to_grid(args.grid) for spec in _loops(data, args, rng)]
    results = run_loop_tests(operator, grids, rng, args.pairs, mean_tolerance=args.tol)
    tolerance = _tolerance(args)
    passed = all(
        r.agreement < settings.agreement_tolerance and r.skew_residual < tolerance for r in results
    )
    report = {"system": data.name, "grid": args.grid, "loops": [r.to_dict() for r in results], "passed": passed}
    return report, PASS if passed else FAIL


def cmd_hierarchy(args: argparse.Namespace) -> Result:
    data = builtin_poly_frobenius(args.builtin or "kdv2d")
    hierarchy = build_hierarchy(data, args.levels)
    recursion = verify_recursion(data, hierarchy)
    rng = make_rng(args.seed)
    tolerance = _tolerance(args)
    loops = []
    passed = all(check.passed for check in recursion)
    for index, spec in enumerate(_loops(data, args, rng, bound=settings.hierarchy_coordinate_bound)):
        grid = spec.to_grid(args.grid)
        pointwise = local_pointwise_identity_check(data, hierarchy, grid)
        chains = lenard_magri_check(data, hierarchy, grid, mean_tolerance=args.tol)
        involution = involutivity_check(data, hierarchy, grid)
        passed &= all(r.residual < tolerance for r in pointwise + chains + involution)
        loops.append({
            "loop": index,
            "pointwise": [r.to_dict() for r in pointwise],
            "lenardMagri": [r.to_dict() for r in chains],
            "involutivity": max((r.residual for r in involution), default=0.0),
        })
    report = {
        "system": data.name,
        "densities": [level.to_dict() for chain in hierarchy.values() for level in chain],
        "recursion": [check.to_dict() for check in recursion],
        "loops": loops,
        "passed": passed,
    }
    return report, PASS if passed else FAIL


def cmd_list_builtin(args: argparse.Namespace) -> Result:
    families = [family.to_dict() for family in list_builtins()]
    families += [{"name": name, "description": "Polynomial Frobenius structure"} for name in POLY_BUILTINS]
    return {"builtins": families}, PASS


def cmd_export_builtin(args: argparse.Namespace) -> Result:
    system = resolve_builtin(args.name).build()
    return system.to_dict(), PASS


COMMANDS: Dict[str, Callable[[argparse.Namespace], Result]] = {
    "validate": cmd_validate,
    "check-vee": cmd_check_vee,
    "check-kohno": cmd_check_kohno,
    "check-equivalence": cmd_check_equivalence,
    "gram": cmd_gram,
    "build-frobenius": cmd_build_frobenius,
    "check-wdvv": cmd_check_wdvv,
    "regularize": cmd_regularize,
    "check-poisson-conditions": cmd_check_poisson_conditions,
    "loop-test": cmd_loop_test,
    "hierarchy": cmd_hierarchy,
    "list-builtin": cmd_list_builtin,
    "export-builtin": cmd_export_builtin,
}


def run_command(args: argparse.Namespace) -> Result:
    logger.debug(f"Running {args.command}")
    return COMMANDS[args.command](args)
