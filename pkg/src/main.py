"""Command-line front end for the pfister-descent toolkit.

JSON goes to stdout (or --out), logs and the selftest table go to stderr.
Exit codes: 0 for any verdict (unknown included), 1 for usage and input errors,
2 when a certificate or report fails to verify.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Optional

from src.brauer.symbols import QSymbol
from src.config import settings
from src.exceptions import CertificateError, ImpossibleCaseError, InstanceFormatError, PfisterError, SideConditionError
from src.fields.rational import FunctionField
from src.forms.isotropy import SearchBudget
from src.models.codec import decode_budget
from src.models.schemas import InstanceFile
from src.repositories.instance_repository import InstanceRepository
from src.services.algebra_service import AlgebraService
from src.services.selftest import SUITES, run_selftest

logger = logging.getLogger(__name__)

USAGE_ERROR = 1
VERIFY_FAILURE = 2


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that reports usage errors with exit code 1."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")


def _budget_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget-degree", type=int, default=None, help="Degree bound of candidate witnesses")
    common.add_argument("--budget-trials", type=int, default=None, help="Candidates tried per search")
    common.add_argument("--seed", type=int, default=None, help=f"Search seed (default PFISTER_SEED={settings.SEED})")
    common.add_argument("--out", type=Path, default=None, help="Write JSON output to file")
    return common


def _symbol_flags() -> argparse.ArgumentParser:
    flags = argparse.ArgumentParser(add_help=False)
    flags.add_argument("--field", default=None, help='Field declaration, e.g. "F2(t1,t2)"')
    flags.add_argument("--a", default=None, help="Left slot of the symbol")
    flags.add_argument("--b", default=None, help="Right slot of the symbol")
    flags.add_argument("--in", dest="instance", type=Path, default=None, help="Instance file")
    return flags


def build_parser() -> argparse.ArgumentParser:
    common = _budget_flags()
    symbol = _symbol_flags()
    parser = _Parser(prog=settings.APP_NAME, description="Quadratic forms and quaternion algebras in characteristic 2")
    parser.add_argument("--version", action="version", version=f"%(prog)s {settings.APP_VERSION}")
    parser.add_argument("--log-level", default=settings.LOG_LEVEL, help="Logging level on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("split", parents=[common, symbol], help="Decide whether [a,b) is split")
    iso = sub.add_parser("isomorphic", parents=[common, symbol], help="Decide whether two symbols are isomorphic")
    iso.add_argument("--a2", default=None, help="Left slot of the second symbol")
    iso.add_argument("--b2", default=None, help="Right slot of the second symbol")
    sub.add_parser("hyperbolic", parents=[common, symbol], help="Decide hyperbolicity of a form or norm form")
    sub.add_parser("witt", parents=[common, symbol], help="Witt decomposition of a form or norm form")
    sub.add_parser("norm-form", parents=[common, symbol], help="Norm form <<b; a]] of [a,b)")
    sub.add_parser("common-slot", parents=[common, symbol], help="Common left slot of a list of symbols")
    sub.add_parser("linkage", parents=[common, symbol], help="Inseparable linkage of a list of symbols")

    descend = sub.add_parser("descend", parents=[common], help="Run a descent on an instance")
    descend.add_argument("target", choices=["triple", "quad"])
    descend.add_argument("--in", dest="instance", type=Path, required=True, help="Instance file")

    verify = sub.add_parser("verify", parents=[common], help="Replay a descent report against its instance")
    verify.add_argument("--report", type=Path, required=True, help="Report written by descend")
    verify.add_argument("--in", dest="instance", type=Path, required=True, help="Instance the report was built from")

    fixtures = sub.add_parser("fixtures", parents=[common], help="Write a named fixture instance")
    fixtures.add_argument("--kind", required=True, help="Fixture family, e.g. generic_triple or quad_case_b")
    fixtures.add_argument("--n", type=int, default=None)
    fixtures.add_argument("--m", type=int, default=None)
    fixtures.add_argument("--k", type=int, default=None)
    fixtures.add_argument("--index", type=int, default=None)
    fixtures.add_argument("--variant", choices=["plus_one", "norm"], default=None)
    fixtures.add_argument("--count", type=int, default=None)
    fixtures.add_argument("--degree", type=int, default=None)
    fixtures.add_argument("--field", default=None, help="Field of linked_quad or random_symbols")
    fixtures.add_argument("--a", default=None, help="Common left slot of linked_quad")
    fixtures.add_argument("--bs", nargs=3, default=None, help="Three right slots of linked_quad")

    selftest = sub.add_parser("selftest", parents=[common], help="Run the built-in acceptance suites")
    selftest.add_argument("--scale", type=float, default=1.0, help="Sample size factor; 1.0 is the full run")
    selftest.add_argument("--only", action="append", choices=[name for name, _ in SUITES], default=None)
    return parser


class _Command:
    """One parsed invocation: resolves inputs and budgets, then dispatches."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.repository = InstanceRepository()

    def budget(self, instance: Optional[InstanceFile] = None) -> SearchBudget:
        base = decode_budget(instance.budget) if instance is not None else SearchBudget.default()
        return base.with_overrides(
            degree_bound=self.args.budget_degree,
            trials=self.args.budget_trials,
            seed=self.args.seed,
        )

    def load(self) -> tuple[AlgebraService, Any]:
        """Object named by --in, or the symbol given by --field/--a/--b."""
        args = self.args
        if args.instance is not None:
            instance = self.repository.load_instance(args.instance)
            service = AlgebraService(self.budget(instance))
            _, obj = service.decode_instance(instance)
            return service, obj
        if args.field is None or args.a is None or args.b is None:
            raise InstanceFormatError("give --in, or all of --field, --a and --b")
        field = FunctionField.parse_declaration(args.field)
        return AlgebraService(self.budget()), QSymbol(field.parse(args.a), field.parse(args.b))

    def emit(self, payload: Any) -> None:
        self.repository.write(payload, self.args.out)

    def run(self) -> int:
        handler = getattr(self, f"cmd_{self.args.command.replace('-', '_')}")
        return handler()

    # -- subcommands ----------------------------------------------------------

    def cmd_split(self) -> int:
        service, q = self.load()
        self.emit(service.split(_expect(q, QSymbol, "a symbol")))
        return 0

    def cmd_isomorphic(self) -> int:
        args = self.args
        if args.instance is not None:
            service, symbols = self.load()
            if not isinstance(symbols, list) or len(symbols) != 2:
                raise InstanceFormatError("isomorphic needs a symbols instance with exactly two symbols")
            first, second = symbols
        else:
            service, first = self.load()
            if args.a2 is None or args.b2 is None:
                raise InstanceFormatError("give --a2 and --b2 for the second symbol")
            field = first.field
            second = QSymbol(field.parse(args.a2), field.parse(args.b2))
        self.emit(service.isomorphic(first, second))
        return 0

    def cmd_hyperbolic(self) -> int:
        service, obj = self.load()
        self.emit(service.hyperbolic(obj))
        return 0

    def cmd_witt(self) -> int:
        service, obj = self.load()
        self.emit(service.witt(obj))
        return 0

    def cmd_norm_form(self) -> int:
        service, q = self.load()
        self.emit(service.norm_form(_expect(q, QSymbol, "a symbol")))
        return 0

    def cmd_common_slot(self) -> int:
        service, symbols = self.load()
        self.emit(service.common_slot(_symbol_list(symbols)))
        return 0

    def cmd_linkage(self) -> int:
        service, symbols = self.load()
        self.emit(service.linkage(_symbol_list(symbols)))
        return 0

    def cmd_descend(self) -> int:
        instance = self.repository.load_instance(self.args.instance)
        if instance.kind != self.args.target:
            raise InstanceFormatError(f"descend {self.args.target} got a {instance.kind} instance")
        service = AlgebraService(self.budget(instance))
        _, obj = service.decode_instance(instance)
        report = service.descend(obj)
        logger.info(f"Descent finished: {report.status}, case {report.case}, {len(report.generators)} generators")
        self.emit(service.report_document(report))
        return 0

    def cmd_verify(self) -> int:
        report = self.repository.load_report(self.args.report)
        instance = self.repository.load_instance(self.args.instance)
        service = AlgebraService(self.budget(instance))
        _, original = service.decode_instance(instance)
        problems = service.verify(report, original)
        for problem in problems:
            logger.warning(f"Verification problem: {problem}")
        self.emit({"schema_version": settings.SCHEMA_VERSION, "verified": not problems, "problems": problems})
        return 0 if not problems else VERIFY_FAILURE

    def cmd_fixtures(self) -> int:
        args = self.args
        params = {
            name: getattr(args, name)
            for name in ("n", "m", "k", "index", "variant", "count", "degree")
            if getattr(args, name) is not None
        }
        if args.seed is not None and args.kind == "random_symbols":
            params["seed"] = args.seed
        if args.field is not None:
            field = FunctionField.parse_declaration(args.field)
            params["field"] = field
            if args.a is not None:
                params["a"] = field.parse(args.a)
            if args.bs is not None:
                params["bs"] = [field.parse(b) for b in args.bs]
        self.emit(AlgebraService(self.budget()).fixture(args.kind, params))
        return 0

    def cmd_selftest(self) -> int:
        args = self.args
        results = run_selftest(self.budget(), scale=args.scale, only=tuple(args.only or ()))
        width = max((len(r.name) for r in results), default=0)
        for r in results:
            sys.stderr.write(f"{r.name:<{width}}  {'pass' if r.passed else 'FAIL'}  {r.detail}\n")
        passed = all(r.passed for r in results)
        self.emit(
            {
                "schema_version": settings.SCHEMA_VERSION,
                "passed": passed,
                "suites": [{"name": r.name, "passed": r.passed, "detail": r.detail} for r in results],
            }
        )
        return 0 if passed else VERIFY_FAILURE


def _expect(obj: Any, kind: type, description: str) -> Any:
    if not isinstance(obj, kind):
        raise InstanceFormatError(f"expected {description}, got a {type(obj).__name__}")
    return obj


def _symbol_list(obj: Any) -> list[QSymbol]:
    if isinstance(obj, QSymbol):
        return [obj]
    if isinstance(obj, list) and all(isinstance(q, QSymbol) for q in obj):
        return obj
    raise InstanceFormatError("expected a symbols instance")


def main(argv: Optional[list[str]] = None) -> int:
    """Run one subcommand and return its exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=args.log_level.upper(),
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return _Command(args).run()
    except (CertificateError, ImpossibleCaseError, SideConditionError) as e:
        logger.error(f"Verification failed: {e}")
        return VERIFY_FAILURE
    except PfisterError as e:
        logger.error(str(e))
        return USAGE_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
