import logging
import shutil
import warnings
from argparse import ArgumentParser, BooleanOptionalAction as BOA
from dataclasses import asdict, is_dataclass
from enum import Enum
from fractions import Fraction
from json import JSONEncoder
from pathlib import Path

import gin
import numpy as np


def build_parser() -> ArgumentParser:
    """Builds an ArgumentParser for the command line.

    Returns:
        The configured ArgumentParser.
    """
    parser = ArgumentParser(description="Synthesis and proof of invariants for time-series constraints")
    parser.add_argument("-v", "--verbose", default=False, action=BOA, help="Set to log verbosely.")
    parser.add_argument("-c", "--config", type=Path, nargs="*", default=[], help="Gin config files to parse.")
    parser.add_argument(
        "-b", "--bindings", nargs="*", default=[], help="Extra gin bindings, e.g. 'Mining.max_conjuncts=2'."
    )
    parser.add_argument("--catalog", type=Path, help="Load the constraint catalog from this JSON file.")
    commands = parser.add_subparsers(dest="command", required=True)

    catalog = commands.add_parser("catalog", help="List or check the constraint catalog.")
    catalog.add_argument("action", choices=["list", "check"])
    catalog.add_argument("--max-len", type=int, default=9, help="Longest signature used by the transducer checks.")

    synth = commands.add_parser("synth", help="Synthesize linear invariants of a constraint pair.")
    synth.add_argument("-p", "--pair", required=True, help="Two comma-separated constraint names.")
    synth.add_argument("--delayed", default=False, action=BOA, help="Use the delayed intersection of the automata.")
    synth.add_argument("--non-default", default=False, action=BOA, help="Assume both results differ from 0.")
    synth.add_argument("--coeff-bound", type=int, help="Largest absolute coefficient searched.")
    synth.add_argument("--facets", default=False, action=BOA, help="Also decide whether each invariant is a facet.")
    synth.add_argument("-o", "--out", type=Path, help="Database file to write.")
    synth.add_argument("--append", default=False, action=BOA, help="Append to an existing database.")

    mine = commands.add_parser("mine", help="Mine and prove non-linear invariants of a constraint pair.")
    mine.add_argument("-p", "--pair", required=True, help="Two comma-separated constraint names.")
    mine.add_argument("--n-lo", type=int, help="Shortest series length of the dataset.")
    mine.add_argument("--n-hi", type=int, help="Longest series length of the dataset.")
    mine.add_argument("--max-conjuncts", type=int, help="Largest number of conjuncts per function.")
    mine.add_argument("--dump-dataset", type=Path, help="Write the dataset to this file.")
    mine.add_argument("--format", choices=["json", "parquet"], default="json", help="Dataset dump format.")
    mine.add_argument("-o", "--out", type=Path, help="Database file to write.")
    mine.add_argument("--append", default=False, action=BOA, help="Append to an existing database.")

    prove = commands.add_parser("prove", help="Prove or refute one Boolean function.")
    prove.add_argument("-p", "--pair", required=True, help="Two comma-separated constraint names.")
    prove.add_argument("-f", "--function", required=True, help="Conjunction such as 'R1 mod 2 = 1 and R1 = R2'.")

    facet = commands.add_parser("facet", help="Annotate the linear records of a database with their facet status.")
    facet.add_argument("--db", type=Path, required=True, help="Database file, rewritten in place.")

    gap = commands.add_parser("gap", help="Build the automaton of the series at a given gap from the upper bound.")
    gap.add_argument("--constraint", required=True, help="Constraint name.")
    gap.add_argument("--delta", type=int, required=True, help="Gap to the upper bound.")
    gap.add_argument("--dot", type=Path, help="Write the automaton as Graphviz text.")
    gap.add_argument("--check", default=False, action=BOA, help="Also check the principal conditions.")

    verify = commands.add_parser("verify", help="Check a database against every series up to a length.")
    verify.add_argument("--db", type=Path, required=True, help="Database file.")
    verify.add_argument("--max-n", type=int, help="Longest series length checked.")

    solve = commands.add_parser("demo-solve", help="Search a series with given results, with or without invariants.")
    solve.add_argument("-p", "--pair", required=True, help="Two comma-separated constraint names.")
    solve.add_argument("-n", "--length", type=int, required=True, help="Series length.")
    solve.add_argument("--targets", type=int, nargs=2, help="Target results; drawn from a random series if omitted.")
    solve.add_argument("-s", "--seed", type=int, default=1234, help="Random seed.")
    solve.add_argument("--db", type=Path, help="Database to take the invariants from.")
    solve.add_argument("--invariants", default=True, action=BOA, help="Use the invariants.")

    export = commands.add_parser("export-dot", help="Write an automaton as Graphviz text.")
    export.add_argument("--what", choices=["transducer", "register", "gap"], required=True)
    export.add_argument("--name", required=True, help="Pattern name for transducers, constraint name otherwise.")
    export.add_argument("--delta", type=int, default=0, help="Gap for gap automata.")
    export.add_argument("-o", "--out", type=Path, help="Output file; standard output if omitted.")
    return parser


class TsifJsonEncoder(JSONEncoder):
    """JSON converter for objects that are not serializable by default."""

    def default(self, obj):
        if isinstance(obj, Enum):
            return obj.value
        if isinstance(obj, (Fraction, Path)):
            return str(obj)
        if isinstance(obj, np.integer):
            return int(obj)
        if isinstance(obj, np.ndarray):
            return obj.tolist()
        if isinstance(obj, (set, frozenset)):
            return sorted(obj)
        if is_dataclass(obj):
            return asdict(obj)
        return JSONEncoder.default(self, obj)


class Align(str, Enum):
    LEFT = "<"
    CENTER = "^"
    RIGHT = ">"


def log_table_row(
    cells: list,
    level: int = logging.INFO,
    widths: list[int] = None,
    header: list[str] = None,
    align: Align = Align.LEFT,
):
    """Logs a table row.

    Args:
        cells: List of cells to log.
        level: Logging level.
        widths: List of widths for each cell.
        header: List of headers to calculate widths if widths not supplied.
        align: Alignment of the cells.
    """
    table_cells = cells
    if not widths and header:
        widths = [len(head) for head in header]
    if widths:
        table_cells = []
        for cell, width in zip(cells, widths):
            cell = str(cell)[:width]
            table_cells.append("{: {align}{width}}".format(cell, align=align.value, width=width))
    logging.log(level, " | ".join(f"{cell}" for cell in table_cells))


def log_full_line(msg: str, level: int = logging.INFO, char: str = "-", num_newlines: int = 0):
    """Logs a full line of a given character with a message centered.

    Args:
        msg: Message to log.
        level: Logging level.
        char: Character to use for the line.
        num_newlines: Number of newlines to append.
    """
    terminal_size = shutil.get_terminal_size((80, 20))
    reserved_chars = len(logging.getLevelName(level)) + 28
    width = terminal_size.columns - reserved_chars
    logging.log(level, "{0:{char}^{width}}{1}".format(msg, "\n" * num_newlines, char=char, width=width))


def setup_logging(date_format, log_format, verbose):
    """
    Set up the root logger with the given formats.

    Args:
        date_format: Format for the date.
        log_format: Format for the log.
        verbose: Whether to log debug messages.
    """
    logging.basicConfig(format=log_format, datefmt=date_format, force=True)
    if not verbose:
        logging.getLogger().setLevel(logging.INFO)
        warnings.filterwarnings("ignore")
    else:
        logging.getLogger().setLevel(logging.DEBUG)
        warnings.filterwarnings("default")


def bind_config(config_files: list, bindings: list):
    """Parses the gin files and bindings; without files the packaged defaults are used."""
    files = [str(path) for path in config_files]
    if not files and default_config().is_file():
        files = [str(default_config())]
    gin.clear_config()
    gin.parse_config_files_and_bindings(files, bindings, finalize_config=False)


def default_config() -> Path:
    return Path(__file__).resolve().parent.parent / "configs" / "default.gin"


def bind_if_set(parameter: str, value):
    """Binds a command-line value onto a gin parameter unless it was omitted."""
    if value is not None:
        logging.debug(f"Binding {parameter}={value!r}.")
        gin.bind_parameter(parameter, value)


def save_config_file(out: Path):
    """Writes the operative gin config next to an output file."""
    config_path = Path(f"{out}.gin")
    with config_path.open("w") as f:
        f.write(gin.operative_config_str())
    return config_path
