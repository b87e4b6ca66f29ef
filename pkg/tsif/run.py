# -*- coding: utf-8 -*-
import logging
import sys
from pathlib import Path

import gin

from tsif.catalog.loader import Catalog, default_catalog, fit_upper_bound, load_catalog, max_by_length, validate_catalog
from tsif.conditional.gap_loss import check_principal_conditions, gap_automaton, gap_loss_params
from tsif.constants import ExitCode, Feature, Precondition
from tsif.database.records import InvariantRecord, read_database, write_database
from tsif.database.solver import demo_solve
from tsif.database.verify import verify_database
from tsif.errors import CatalogError
from tsif.mining.hypotheses import BooleanFunction
from tsif.mining.pipeline import mine
from tsif.mining.prove import prove
from tsif.run_utils import (
    bind_config,
    bind_if_set,
    build_parser,
    log_full_line,
    log_table_row,
    save_config_file,
    setup_logging,
)
from tsif.synthesis.facet import annotate, facet_check
from tsif.synthesis.linear import synthesize


def run_catalog(args, catalog: Catalog) -> int:
    if args.action == "list":
        header = ["constraint", "short", "upper bound", "automaton"]
        widths = [32, 6, 40, 9]
        log_table_row(header, widths=widths)
        for spec in catalog.specs():
            bound = spec.bound.describe() if spec.bound is not None else "-"
            automaton = "yes" if catalog.has_register_automaton(spec) else "no"
            log_table_row([spec.name, spec.short_name, bound, automaton], widths=widths)
        return ExitCode.success
    log_full_line("Checking the catalog against the oracle", logging.INFO)
    report = validate_catalog(catalog, transducer_len=args.max_len)
    widths = [32, 14, 6, 60]
    log_table_row(["subject", "check", "passed", "detail"], widths=widths)
    for check in report.checks:
        log_table_row([check.subject, check.check, check.passed, check.detail], widths=widths)
    for spec in catalog.specs():
        fitted = fit_upper_bound(max_by_length(catalog, spec, 12))
        agrees = fitted is not None and spec.bound is not None and all(
            fitted.value(n) == spec.bound.value(n) for n in range(1, 13)
        )
        log_table_row([spec.name, "fitted bound", agrees, fitted.describe() if fitted else "none"], widths=widths)
    logging.info(f"Catalog check {'passed' if report.passed else 'failed'}.")
    return ExitCode.success if report.passed else ExitCode.verification_failure


def run_synth(args, catalog: Catalog) -> int:
    pair = catalog.parse_pair(args.pair)
    bind_if_set("Synthesis.coeff_bound", args.coeff_bound)
    log_full_line(f"Synthesizing linear invariants of {args.pair}", logging.INFO)
    invariants = synthesize(pair, delayed=args.delayed, non_default=args.non_default, catalog=catalog)
    if args.facets and not args.non_default:
        invariants = annotate(invariants, pair, catalog)
    for invariant in invariants:
        facet = invariant.facet.describe() if invariant.facet is not None else ""
        log_table_row([invariant.describe(), facet], widths=[40, 70])
        print(invariant.describe())
    if args.out:
        params = {"command": "synth", "delayed": args.delayed, "non_default": args.non_default}
        records = [InvariantRecord.from_linear(invariant, params) for invariant in invariants]
        write_database(args.out, records, append=args.append)
        save_config_file(args.out)
    return ExitCode.success


def run_mine(args, catalog: Catalog) -> int:
    pair = catalog.parse_pair(args.pair)
    if args.n_lo is not None or args.n_hi is not None:
        n_lo, n_hi = _query("Mining.n_range", (7, 12))
        bind_if_set("Mining.n_range", (args.n_lo or n_lo, args.n_hi or n_hi))
    bind_if_set("Mining.max_conjuncts", args.max_conjuncts)
    log_full_line(f"Mining non-linear invariants of {args.pair}", logging.INFO)
    result = mine(pair, catalog=catalog)
    if args.dump_dataset:
        result.dataset.write(args.dump_dataset, args.format)
    for invariant in result.final:
        log_table_row([invariant.function.describe(), invariant.kind.value, invariant.n_min], widths=[60, 18, 5])
        print(invariant.describe())
    if args.out:
        lengths = result.dataset.lengths
        params = {"command": "mine", "n_range": [lengths[0], lengths[-1]]}
        records = [InvariantRecord.from_nonlinear(invariant, params) for invariant in result.final]
        write_database(args.out, records, append=args.append)
        save_config_file(args.out)
    return ExitCode.success


def _query(parameter: str, default):
    try:
        return gin.query_parameter(parameter)
    except ValueError:
        return default


def run_prove(args, catalog: Catalog) -> int:
    pair = catalog.parse_pair(args.pair)
    function = BooleanFunction.parse(args.function)
    invariant = prove(function, pair, catalog)
    print(invariant.describe())
    return ExitCode.success if invariant.proved else ExitCode.verification_failure


def run_facet(args, catalog: Catalog) -> int:
    database = read_database(args.db)
    if database.errors:
        for number, message in database.errors:
            logging.error(f"{args.db}:{number}: {message}")
        return ExitCode.usage_error
    for record in database.records:
        if not record.is_linear or record.precondition != Precondition.none:
            continue
        pair = [catalog.spec(name) for name in record.pair]
        status = facet_check(record.linear(), pair, catalog)
        record.facet = status.to_json()
        log_table_row([record.describe(), status.describe()], widths=[50, 70])
    write_database(args.db, database.records)
    return ExitCode.success


def run_gap(args, catalog: Catalog) -> int:
    spec = catalog.spec(args.constraint)
    automaton = gap_automaton(spec, args.delta, catalog)
    certificate = automaton.certificate.to_json()
    logging.info(f"Gap automaton of {spec.name} at gap {args.delta}: {len(automaton.dfa)} states, {certificate}.")
    print(f"{spec.name} delta={args.delta}: {len(automaton.dfa)} states, certificate {certificate}")
    if args.dot:
        Path(args.dot).write_text(automaton.dfa.to_dot(f"{spec.name}_gap_{args.delta}"))
    if args.check:
        if spec.feature != Feature.one:
            raise ValueError(f"Principal conditions are checked for nb_* constraints, not {spec.name}.")
        report = check_principal_conditions(spec, gap_loss_params(spec, catalog))
        for name, passed, detail in report.checks:
            log_table_row([name, passed, detail], widths=[24, 6, 60])
        return ExitCode.success if report.passed else ExitCode.verification_failure
    return ExitCode.success


def run_verify(args, catalog: Catalog) -> int:
    database = read_database(args.db)
    for number, message in database.errors:
        logging.error(f"{args.db}:{number}: {message}")
    bind_if_set("Verification.max_n", args.max_n)
    report = verify_database(database.records, catalog=catalog)
    for violation in report.violations:
        log_table_row([violation.record, violation.n, violation.witness, violation.results], widths=[50, 3, 24, 10])
    print(f"{len(database.records)} records, {report.signatures} series, {len(report.violations)} violations")
    return ExitCode.success if report.passed and not database.errors else ExitCode.verification_failure


def run_demo_solve(args, catalog: Catalog) -> int:
    pair = catalog.parse_pair(args.pair)
    targets = tuple(args.targets) if args.targets else None
    records = read_database(args.db).records if args.db else None
    stats = demo_solve(
        pair, targets, args.length, use_invariants=args.invariants, seed=args.seed, records=records, catalog=catalog
    )
    witness = list(stats.witness.values) if stats.witness is not None else None
    print(
        f"targets={stats.targets} n={args.length} solved={stats.solved} nodes={stats.nodes} "
        f"backtracks={stats.backtracks} witness={witness}"
    )
    if stats.excluded_by:
        print(f"excluded by {stats.excluded_by}")
    return ExitCode.success


def run_export_dot(args, catalog: Catalog) -> int:
    if args.what == "transducer":
        text = catalog.transducer(args.name).to_dot()
    elif args.what == "register":
        text = catalog.register_automaton(catalog.spec(args.name)).to_dot()
    else:
        text = gap_automaton(catalog.spec(args.name), args.delta, catalog).dfa.to_dot(f"{args.name}_gap_{args.delta}")
    if args.out:
        Path(args.out).write_text(text)
    else:
        print(text)
    return ExitCode.success


COMMANDS = {
    "catalog": run_catalog,
    "synth": run_synth,
    "mine": run_mine,
    "prove": run_prove,
    "facet": run_facet,
    "gap": run_gap,
    "verify": run_verify,
    "demo-solve": run_demo_solve,
    "export-dot": run_export_dot,
}


def main(my_args=tuple(sys.argv[1:])) -> int:
    try:
        args = build_parser().parse_args(my_args)
    except SystemExit as e:
        return e.code
    log_format = "%(asctime)s - %(levelname)s - %(name)s : %(message)s"
    date_format = "%Y-%m-%d %H:%M:%S"
    setup_logging(date_format, log_format, args.verbose)
    try:
        bind_config(args.config, args.bindings)
        catalog = load_catalog(args.catalog) if args.catalog else default_catalog()
        return COMMANDS[args.command](args, catalog)
    except (CatalogError, ValueError, KeyError, OSError) as e:
        logging.error(f"{e.__class__.__name__}: {e}")
        logging.debug("Error details:", exc_info=True)
        return ExitCode.usage_error
    except Exception as e:
        logging.error(f"Unexpected {e.__class__.__name__}: {e}")
        logging.debug("Error details:", exc_info=True)
        return ExitCode.verification_failure


"""Main module."""
if __name__ == "__main__":
    sys.exit(main())
