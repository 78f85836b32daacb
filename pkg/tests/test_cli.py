import numpy as np
import pytest

from hazelift.cli import main
from hazelift.enhance import EnhanceConfig
from hazelift.image import load_image, save_image
from hazelift.synthetic import add_haze, flat_band_image, make_scene


@pytest.fixture
def band_png(tmp_path, rng):
    path = tmp_path / "band.png"
    save_image(flat_band_image(160, 160, 0.4, rng), path)
    return path


@pytest.fixture
def noise_png(tmp_path, rng):
    path = tmp_path / "noise.png"
    save_image(flat_band_image(160, 160, 0.0, rng), path)
    return path


class TestDetect:
    def test_csv_on_stdout(self, capsys, band_png, noise_png):
        assert main(["detect", str(band_png), str(noise_png)]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "name,filter,window,threshold,ratio,decision"
        band_row = lines[1].split(",")
        assert band_row[0] == "band.png"
        assert band_row[1:4] == ["sdf", "15", "otsu"]
        assert band_row[5] == "sky"
        assert lines[2].split(",")[5] == "no_sky"

    def test_export_maps(self, capsys, tmp_path, band_png):
        out = tmp_path / "maps"
        assert main(["detect", "--export-maps", str(out), str(band_png)]) == 0
        assert (out / "band_binary.png").is_file()
        assert (out / "band_gradient.png").is_file()
        binary = load_image(out / "band_binary.png")
        assert set(np.unique(binary)) <= {0.0, 1.0}

    def test_missing_file_sets_exit_code(self, capsys, tmp_path, band_png):
        code = main(["detect", str(band_png), str(tmp_path / "gone.png")])
        assert code == 1
        assert "error" in capsys.readouterr().err

    def test_filter_and_threshold_flags(self, capsys, band_png):
        assert main(["detect", "--filter", "rf", "--window", "9",
                     "--threshold", "isodata", "--tau", "0.05", str(band_png)]) == 0
        row = capsys.readouterr().out.splitlines()[1].split(",")
        assert row[1:4] == ["rf", "9", "isodata"]


class TestEnhance:
    def test_end_to_end(self, capsys, tmp_path, rng):
        rows = ["input,reference,group"]
        for i in range(2):
            clear = make_scene(48, 48, 0.3, rng)
            path = tmp_path / f"img{i}.png"
            save_image(add_haze(clear, rng), path)
            rows.append(f"{path},,g")
        manifest = tmp_path / "m.csv"
        manifest.write_text("\n".join(rows) + "\n")
        cfg = tmp_path / "run.cfg"
        EnhanceConfig(mode="pa2", iterations=6, clahe_tiles=4).to_file(cfg)
        metrics_csv = tmp_path / "metrics.csv"
        code = main(["enhance", "--manifest", str(manifest),
                     "--out", str(tmp_path / "out"), "--config", str(cfg),
                     "--metrics-csv", str(metrics_csv)])
        assert code == 0
        assert (tmp_path / "out" / "img0_pa2.png").is_file()
        lines = metrics_csv.read_text().splitlines()
        assert lines[0].startswith("image,algorithm,qe")
        assert len(lines) == 4  # header + 2 records + AVERAGE

    def test_config_file_overrides_mode_flag(self, tmp_path, rng):
        img = tmp_path / "img.png"
        save_image(add_haze(make_scene(48, 48, 0.3, rng), rng), img)
        manifest = tmp_path / "m.csv"
        manifest.write_text(f"input,reference,group\n{img},,g\n")
        cfg = tmp_path / "run.cfg"
        cfg.write_text("mode=pa2-lir\niterations=5\nclahe_tiles=4\n")
        assert main(["enhance", "--mode", "pa2", "--manifest", str(manifest),
                     "--out", str(tmp_path / "o1"), "--config", str(cfg)]) == 0
        assert (tmp_path / "o1" / "img_pa2-lir.png").is_file()
        # a config without mode leaves the flag in charge
        cfg.write_text("iterations=5\nclahe_tiles=4\n")
        assert main(["enhance", "--mode", "pa2", "--manifest", str(manifest),
                     "--out", str(tmp_path / "o2"), "--config", str(cfg)]) == 0
        assert (tmp_path / "o2" / "img_pa2.png").is_file()

    def test_nonzero_exit_on_failure(self, tmp_path, rng, capsys):
        img = tmp_path / "img.png"
        save_image(flat_band_image(20, 20, 0.0, rng), img)
        manifest = tmp_path / "m.csv"
        manifest.write_text(f"input,reference,group\n{img},,g\n")
        img.write_bytes(b"broken")
        code = main(["enhance", "--manifest", str(manifest),
                     "--out", str(tmp_path / "out"), "--mode", "pa2"])
        assert code == 1


class TestBench:
    def test_writes_sorted_csv(self, tmp_path, rng):
        img = tmp_path / "img.png"
        save_image(rng.random((48, 48)), img)
        out = tmp_path / "bench.csv"
        assert main(["bench", "--filters", "rf,sdf", "--windows", "3,5",
                     "--image", str(img), "--out", str(out), "--repeats", "3"]) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "kind,window,seconds"
        assert [l.split(",")[0] for l in lines[1:]] == ["rf", "rf", "sdf", "sdf"]


class TestCluster:
    def test_labels_csv_on_stdout(self, capsys, tmp_path):
        ratios = tmp_path / "ratios.csv"
        ratios.write_text("name,ratio\na.png,0.0\nb.png,0.15\nc.png,0.2\n")
        assert main(["cluster", "--ratios", str(ratios)]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "name,ratio,cluster,label"
        labels = {l.split(",")[0]: l.split(",")[3] for l in lines[1:]}
        assert labels == {"a.png": "no_sky", "b.png": "sky", "c.png": "sky"}

    def test_accepts_detect_output(self, capsys, band_png, noise_png, tmp_path):
        assert main(["detect", str(band_png), str(noise_png)]) == 0
        detect_csv = tmp_path / "detect.csv"
        detect_csv.write_text(capsys.readouterr().out)
        assert main(["cluster", "--ratios", str(detect_csv)]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert len(lines) == 3

    def test_rejects_csv_without_columns(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("x,y\n1,2\n")
        with pytest.raises(SystemExit):
            main(["cluster", "--ratios", str(bad)])
