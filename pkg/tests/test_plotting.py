from scripts.plotting.utils import plot_dataset
from tsif.database.records import InvariantRecord, write_database
from tsif.mining.dataset import generate_dataset
from tsif.synthesis.linear import synthesize


def test_plot_dataset_dump(peaks_valleys, catalog, tmp_path):
    dump = tmp_path / "pv.json"
    generate_dataset(peaks_valleys, (7, 8), catalog).write(dump)
    db = tmp_path / "pv.jsonl"
    write_database(db, [InvariantRecord.from_linear(inv) for inv in synthesize(peaks_valleys, catalog=catalog)])
    paths = plot_dataset(dump, tmp_path / "plots", ("nb_peak", "nb_valley"), db)
    assert [path.name for path in paths] == ["polytope_7_pv.png", "polytope_8_pv.png"]
    assert all(path.stat().st_size > 0 for path in paths)
