import json
import logging
from pathlib import Path

from scripts.plotting.plotting import Plotter
from tsif.database.records import read_database
from tsif.mining.dataset import Dataset


def plot_dataset(dump_path, save_dir, pair=(), db_path=None):
    """Plots a dataset written by ``tsif mine --dump-dataset`` for every series length.

    Args:
        dump_path: JSON dataset dump.
        save_dir: Directory to save the plots to.
        pair: Constraint names used as axis labels.
        db_path: Optional database; its linear invariants of the same pair are drawn as dashed lines.
    """
    with open(dump_path) as dump_file:
        dataset = Dataset.from_json(json.load(dump_file), pair)
    invariants = []
    if db_path is not None:
        records = read_database(db_path).records
        same_pair = [record for record in records if not pair or tuple(record.pair) == tuple(pair)]
        invariants = [record.linear() for record in same_pair if record.is_linear]
    save_dir = Path(save_dir)
    save_dir.mkdir(parents=True, exist_ok=True)
    paths = Plotter(dataset, save_dir, Path(dump_path).stem).all_lengths(invariants)
    logging.info(f"Generated {len(paths)} plots in {save_dir}")
    return paths
