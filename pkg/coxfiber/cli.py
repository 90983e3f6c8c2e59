"""
The ``coxfiber`` command line tool.

Every command reads fan or morphism JSON files and prints a short human
readable report, or JSON with ``--json``. Exit codes are stable: ``0`` when
the command succeeded and every check passed, ``1`` when a mathematical check
failed and ``2`` for unreadable input or bad usage.
"""

import argparse
import logging
import os
import sys

from coxfiber.client import CoxFiberClient, SEED_VARIABLE
from coxfiber.data import (
    dumps,
    fan_from_dict,
    read_json,
    write_fan,
    write_morphism,
)
from coxfiber.exceptions import (
    CoxFiberCheckError,
    CoxFiberInvalidError,
    HypothesisFailed,
    MalformedInput,
)
from coxfiber.toric.fan import is_complete

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INVALID = 2


def _integers(text):
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(
            "expected comma separated integers, got {0!r}".format(text)
        )


def _status(passed):
    return "PASS" if passed else "FAIL"


def _emit(args, value, lines):
    if getattr(args, "json", False):
        print(dumps(value))
    else:
        for line in lines:
            print(line)


def _check_lines(checks):
    lines = []
    for check in checks:
        line = "{0}: {1}".format(check.name, _status(check.passed))
        if not check.passed and check.witness is not None:
            line = "{0} (witness {1})".format(line, check.witness)
        lines.append(line)
    return lines


def cmd_validate(client, args):
    data = read_json(args.fan)
    try:
        fan = fan_from_dict(data)
    except CoxFiberInvalidError as exc:
        if isinstance(exc, MalformedInput):
            raise
        value = {"valid": False, "error": type(exc).__name__, "message": str(exc)}
        _emit(args, value, ["invalid: {0}: {1}".format(type(exc).__name__, exc)])
        return EXIT_CHECK_FAILED
    complete = is_complete(fan)
    value = {
        "valid": True,
        "name": fan.name,
        "rank": fan.rank,
        "rays": fan.nrays,
        "max_cones": len(fan.max_cones),
        "complete": complete,
    }
    _emit(
        args,
        value,
        [
            "{0}: valid".format(fan.label),
            "rank {0}, {1} rays, {2} maximal cones".format(
                fan.rank, fan.nrays, len(fan.max_cones)
            ),
            "complete: {0}".format("yes" if complete else "no"),
        ],
    )
    return EXIT_OK


def cmd_classgroup(client, args):
    data = client.fan(args.fan).class_group()
    group = data.class_group
    degrees = [list(d) for d in data.ray_degrees()]
    value = {
        "class_group": group.describe(),
        "normal_form": {
            "free_rank": group.free_rank,
            "invariant_factors": list(group.invariant_factors),
        },
        "ray_degrees": degrees,
    }
    lines = ["Cl = {0}".format(group.describe())]
    lines += ["D{0}: {1}".format(i + 1, d) for i, d in enumerate(degrees)]
    _emit(args, value, lines)
    return EXIT_OK


def cmd_fiber_fan(client, args):
    fiber = client.morphism(args.map).fiber_fan()
    value = {
        "fiber_fan": fiber.fiber_fan.to_dict(),
        "kernel_basis": [list(b) for b in fiber.kernel_basis],
        "ray_correspondence": list(fiber.ray_correspondence),
        "complete": is_complete(fiber.fiber_fan),
    }
    lines = [
        "N0 basis: {0}".format([list(b) for b in fiber.kernel_basis]),
        "rays:",
    ]
    for ray, source in zip(fiber.fiber_fan.rays, fiber.ray_correspondence):
        lines.append("  {0} <- source ray {1}".format(list(ray), source))
    lines.append("max cones: {0}".format([list(c) for c in fiber.fiber_fan.max_cones]))
    _emit(args, value, lines)
    return EXIT_OK


def cmd_vertical(client, args):
    vertical = client.morphism(args.map).vertical()
    value = {
        "vertical_rays": list(vertical.vertical_ray_set),
        "cl_pi": vertical.cl_pi.describe(),
        "cl_eta": vertical.cl_eta.describe(),
        "torsion_free": vertical.torsion_free,
    }
    _emit(
        args,
        value,
        [
            "vertical rays: {0}".format(list(vertical.vertical_ray_set)),
            "Cl_pi = {0}".format(vertical.cl_pi.describe()),
            "Cl_eta = {0}".format(vertical.cl_eta.describe()),
            "vertical torsion free: {0}".format(_status(vertical.torsion_free)),
        ],
    )
    return EXIT_OK if vertical.torsion_free else EXIT_CHECK_FAILED


def cmd_verify_theorem(client, args):
    morphism = client.morphism(args.map)
    try:
        report = morphism.verify_theorem(args.box)
    except HypothesisFailed as exc:
        value = {
            "hypotheses": {
                c.name: {"pass": c.passed, "witness": c.witness} for c in exc.checks
            },
            "pass": False,
        }
        _emit(args, value, _check_lines(exc.checks))
        return EXIT_CHECK_FAILED
    if getattr(args, "json", False):
        print(dumps(report))
    else:
        lines = _check_lines(report.hypotheses)
        if report.grading_iso is None:
            lines.append("grading isomorphism: FAIL ({0})".format(report.grading_error))
        else:
            lines.append(
                "grading isomorphism: {0} -> {1}".format(
                    report.grading_iso.map.source.describe(),
                    report.grading_iso.map.target.describe(),
                )
            )
        lines.append("degree zero dimension: {0}".format(report.degree_zero_dimension))
        for row in report.table:
            lines.append(
                "{0}: {1} {2} {3}".format(
                    list(row.degree), row.dim_quotient, row.dim_fiber, _status(row.passed)
                )
            )
        lines.append("{0} degrees, {1}".format(len(report.table), _status(report.passed)))
        print("\n".join(lines))
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


def cmd_verify_lattices(client, args):
    result = client.morphism(args.map).verify_lattices()
    value = {
        "ok": result.ok,
        "saturations_equal": result.saturations_equal,
        "lattices_equal": result.lattices_equal,
        "witness": None if result.witness is None else list(result.witness),
        "vertical_characters": [list(m) for m in result.left],
        "pullbacks": [list(m) for m in result.right],
    }
    lines = [
        "vertical characters: {0}".format(value["vertical_characters"]),
        "pullbacks: {0}".format(value["pullbacks"]),
        "saturations equal: {0}".format(_status(result.saturations_equal)),
        "lattices equal: {0}".format(_status(result.lattices_equal)),
    ]
    if result.witness is not None:
        lines.append("witness: {0}".format(value["witness"]))
    _emit(args, value, lines)
    return EXIT_OK if result.ok else EXIT_CHECK_FAILED


def cmd_prim1_check(client, args):
    seed = client.seed if args.seed is None else args.seed
    result = client.morphism(args.map).prim1_check(seed)
    value = {
        "seed": seed,
        "ok": result.ok,
        "quotient": result.quotient.describe(),
        "cl_pi": result.cl_pi.describe(),
        "primitive": result.primitive,
    }
    _emit(
        args,
        value,
        [
            "seed: {0}".format(seed),
            "K0_eta / i*(K0) = {0}".format(result.quotient.describe()),
            "Cl_pi = {0}".format(result.cl_pi.describe()),
            "primitive: {0}".format("yes" if result.primitive else "no"),
            "prim1: {0}".format(_status(result.ok)),
        ],
    )
    return EXIT_OK if result.ok else EXIT_CHECK_FAILED


def cmd_wps_bundle(client, args):
    morphism = client.wps_bundle(args.weights, args.v).morphism
    os.makedirs(args.out, exist_ok=True)
    fan_path = os.path.join(args.out, "fan.json")
    base_path = os.path.join(args.out, "base.json")
    map_path = os.path.join(args.out, "morphism.json")
    write_fan(morphism.source, fan_path)
    write_fan(morphism.target, base_path)
    write_morphism(morphism, map_path, fan_path, base_path)
    value = {"fan": fan_path, "base": base_path, "morphism": map_path}
    _emit(
        args,
        value,
        [
            "wrote {0} ({1} rays)".format(fan_path, morphism.source.nrays),
            "wrote {0}".format(base_path),
            "wrote {0}".format(map_path),
        ],
    )
    return EXIT_OK


def cmd_certify_nonfg(client, args):
    certificate = client.morphism(args.map).certify(args.cite, args.box)
    if getattr(args, "json", False):
        print(dumps(certificate))
    else:
        lines = _check_lines(certificate.checks)
        lines.append("assumption: {0}".format(certificate.assumptions[0]))
        lines.append("valid: {0}".format("yes" if certificate.valid else "no"))
        lines.append(certificate.conclusion)
        print("\n".join(lines))
    return EXIT_OK if certificate.valid else EXIT_CHECK_FAILED


def cmd_ledger(client, args):
    ledger = client.morphism(args.map).ledger()
    value = ledger.to_dict()
    _emit(
        args,
        value,
        [
            "Cl(X~) = {0}".format(value["cl_tilde"]),
            "Cl_pi(X~) = {0}".format(value["cl_pi_tilde"]),
            "Cl(X~0) = {0}".format(value["cl_fiber_tilde"]),
            "restriction: {0}".format(value["restriction"]),
            "restriction surjective: {0}".format(_status(ledger.surjective)),
            value["note"],
        ],
    )
    return EXIT_OK if ledger.surjective else EXIT_CHECK_FAILED


def build_parser():
    parser = argparse.ArgumentParser(
        prog="coxfiber",
        description="Class groups, fiber fans and Cox rings of toric fiber spaces.",
    )
    parser.add_argument(
        "-v",
        dest="verbose",
        action="count",
        default=0,
        help="log progress to stderr (-vv for debug output)",
    )
    commands = parser.add_subparsers(dest="command", metavar="COMMAND")
    commands.required = True

    def command(name, handler, help_text, needs_map=False, json_flag=True):
        sub = commands.add_parser(name, help=help_text)
        if needs_map:
            sub.add_argument("--map", required=True, help="morphism JSON file")
        if json_flag:
            sub.add_argument("--json", action="store_true", help="print JSON")
        sub.set_defaults(handler=handler)
        return sub

    command("validate", cmd_validate, "validate a fan").add_argument("fan")
    command("classgroup", cmd_classgroup, "class group and ray degrees").add_argument(
        "fan"
    )
    command("fiber-fan", cmd_fiber_fan, "fan of the general fiber", needs_map=True)
    command("vertical", cmd_vertical, "vertical classes", needs_map=True)
    verify = command(
        "verify-theorem",
        cmd_verify_theorem,
        "compare the quotient presentation with the fiber Cox ring",
        needs_map=True,
    )
    verify.add_argument("--box", type=int, default=10, help="degree box radius")
    command(
        "verify-lattices",
        cmd_verify_lattices,
        "vertical characters against pullbacks",
        needs_map=True,
    )
    prim1 = command(
        "prim1-check",
        cmd_prim1_check,
        "principal divisors of a vertical-free subgroup",
        needs_map=True,
    )
    prim1.add_argument(
        "--seed",
        type=int,
        default=None,
        help="search seed (default: ${0} or 0)".format(SEED_VARIABLE),
    )
    bundle = command("wps-bundle", cmd_wps_bundle, "weighted projective bundle over P1")
    bundle.add_argument("--weights", type=_integers, required=True)
    bundle.add_argument(
        "--v", type=_integers, required=True, help="twist, e.g. --v=-1,0"
    )
    bundle.add_argument("-o", "--out", required=True, help="output directory")
    certify = command(
        "certify-nonfg",
        cmd_certify_nonfg,
        "non-finite generation certificate for the blow-up",
        needs_map=True,
    )
    certify.add_argument("--cite", required=True, help="external input citation")
    certify.add_argument("--box", type=int, default=5, help="degree box radius")
    command("ledger", cmd_ledger, "class group ledger of the blow-up", needs_map=True)
    return parser


def configure_logging(verbosity):
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity > 1:
        level = logging.DEBUG
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.verbose)
    try:
        client = CoxFiberClient()
        return args.handler(client, args)
    except CoxFiberInvalidError as exc:
        print("error: {0}".format(exc), file=sys.stderr)
        return EXIT_INVALID
    except HypothesisFailed as exc:
        for line in _check_lines(exc.checks or []):
            print(line)
        print("error: {0}".format(exc), file=sys.stderr)
        return EXIT_CHECK_FAILED
    except CoxFiberCheckError as exc:
        print("check failed: {0}: {1}".format(type(exc).__name__, exc), file=sys.stderr)
        return EXIT_CHECK_FAILED
