import numpy as np
import pytest
from hypothesis import given, strategies as st

from benignbench.corpus import (
    ManifestEntry,
    family_counts,
    load_frame,
    load_manifest,
    select_frames,
    validate_corpus,
    write_manifest,
)
from benignbench.errors import ManifestError
from benignbench.image import write_png

HEADER = "frame_id,video_id,frame_index,label,family,path\n"


def write_text_manifest(tmp_path, rows):
    path = tmp_path / "manifest.csv"
    path.write_text(HEADER + "".join(r + "\n" for r in rows), encoding="utf-8")
    return path


def make_entry(frame_id="f0", video_id="v0", frame_index=0, label="real",
               family="pristine", path="f0.png"):
    return ManifestEntry(frame_id, video_id, frame_index, label, family, path)


class TestLoadManifest:
    def test_two_rows(self, tmp_path):
        path = write_text_manifest(
            tmp_path,
            [
                "a,v1,0,real,pristine,frames/a.png",
                "b,v1,1,fake,deepfake,frames/b.png",
            ],
        )
        entries = load_manifest(path)
        assert [e.frame_id for e in entries] == ["a", "b"]
        assert entries[1].family == "deepfake"
        assert entries[0].frame_index == 0

    def test_duplicate_frame_id_names_id(self, tmp_path):
        path = write_text_manifest(
            tmp_path,
            ["a,v1,0,real,pristine,a.png", "a,v2,1,fake,deepfake,b.png"],
        )
        with pytest.raises(ManifestError, match="'a'"):
            load_manifest(path)

    def test_family_counts_fixture(self, tmp_path):
        # 1 real + one fake of each family, counted by inspection
        path = write_text_manifest(
            tmp_path,
            [
                "r0,v0,0,real,pristine,r0.png",
                "d0,v1,0,fake,deepfake,d0.png",
                "s0,v2,0,fake,faceswap,s0.png",
                "t0,v3,0,fake,face2face,t0.png",
                "n0,v4,0,fake,neuraltextures,n0.png",
            ],
        )
        counts = family_counts(load_manifest(path))
        assert counts == {
            "pristine": 1,
            "deepfake": 1,
            "faceswap": 1,
            "face2face": 1,
            "neuraltextures": 1,
        }

    def test_missing_file(self, tmp_path):
        with pytest.raises(ManifestError, match="not found"):
            load_manifest(tmp_path / "none.csv")

    @pytest.mark.parametrize(
        "row,match",
        [
            ("a,v,x,real,pristine,a.png", "frame_index"),
            ("a,v,-1,real,pristine,a.png", "negative"),
            ("a,v,0,bogus,pristine,a.png", "label"),
            ("a,v,0,real,bogus,a.png", "family"),
            ("a,v,0,real,pristine", "fields"),
            (",v,0,real,pristine,a.png", "frame_id"),
            ("a,v,0,real,pristine,", "path"),
        ],
    )
    def test_malformed_row_reports_row_number(self, tmp_path, row, match):
        path = write_text_manifest(tmp_path, ["ok,v,0,real,pristine,ok.png", row])
        with pytest.raises(ManifestError, match=match) as err:
            load_manifest(path)
        assert ":3:" in str(err.value)  # header is row 1

    def test_bad_header(self, tmp_path):
        path = tmp_path / "m.csv"
        path.write_text("id,video\nx,y\n")
        with pytest.raises(ManifestError, match="header"):
            load_manifest(path)

    def test_parse_serialize_parse_fixed_point(self, tmp_path):
        path = write_text_manifest(
            tmp_path,
            [
                "a,v1,3,real,pristine,frames/a.png",
                "b,v1,1,fake,neuraltextures,frames/b.png",
            ],
        )
        entries = load_manifest(path)
        out = tmp_path / "copy.csv"
        write_manifest(entries, out)
        assert load_manifest(out) == entries
        write_manifest(load_manifest(out), tmp_path / "copy2.csv")
        assert (tmp_path / "copy2.csv").read_text() == out.read_text()


class TestSelectFrames:
    def test_first_ten_of_hundred(self):
        entries = [make_entry(frame_id=f"f{i}", frame_index=i) for i in range(100)]
        kept = select_frames(entries, 10)
        assert [e.frame_index for e in kept] == list(range(10))

    def test_saturates_when_fewer(self):
        entries = [make_entry(frame_id=f"f{i}", frame_index=i) for i in range(3)]
        assert select_frames(entries, 10) == entries

    def test_two_videos_one_each(self):
        entries = []
        for v in range(2):
            for i in range(3):
                entries.append(
                    make_entry(frame_id=f"v{v}f{i}", video_id=f"v{v}", frame_index=i)
                )
        kept = select_frames(entries, 1)
        assert [(e.video_id, e.frame_index) for e in kept] == [("v0", 0), ("v1", 0)]

    def test_picks_smallest_indices_not_first_rows(self):
        entries = [
            make_entry(frame_id="late", frame_index=9),
            make_entry(frame_id="early", frame_index=2),
        ]
        kept = select_frames(entries, 1)
        assert [e.frame_id for e in kept] == ["early"]

    def test_empty_manifest(self):
        assert select_frames([], 5) == []

    def test_rejects_nonpositive_n(self):
        with pytest.raises(ValueError):
            select_frames([], 0)

    @given(
        st.lists(
            st.tuples(st.integers(0, 3), st.integers(0, 20)),
            max_size=30,
        ),
        st.integers(1, 5),
    )
    def test_idempotent(self, pairs, n):
        entries = [
            make_entry(frame_id=f"id{i}", video_id=f"v{v}", frame_index=idx)
            for i, (v, idx) in enumerate(pairs)
        ]
        once = select_frames(entries, n)
        assert select_frames(once, n) == once


class TestLoadFrame:
    def test_normalization(self, tmp_path):
        img = np.zeros((4, 4, 3), dtype=np.uint8)
        img[0, 0] = [0, 128, 255]
        from PIL import Image

        Image.fromarray(img).save(tmp_path / "f.png")
        entry = make_entry(path="f.png")
        arr = load_frame(entry, tmp_path)
        assert arr[0, 0, 0] == 0.0
        assert arr[0, 0, 2] == 1.0
        assert arr[0, 0, 1] == pytest.approx(128 / 255)


class TestValidateCorpus:
    def _valid_corpus(self, tmp_path, n=3):
        entries = []
        for i in range(n):
            rel = f"f{i}.png"
            write_png(np.full((8, 8, 3), 0.5, dtype=np.float32), tmp_path / rel)
            entries.append(
                make_entry(frame_id=f"f{i}", frame_index=i, path=rel)
            )
        return entries

    def test_valid_corpus_no_issues(self, tmp_path):
        entries = self._valid_corpus(tmp_path)
        report = validate_corpus(entries, tmp_path)
        assert report.ok and report.usable
        assert report.n_entries == 3

    def test_missing_file_single_issue(self, tmp_path):
        entries = self._valid_corpus(tmp_path)
        entries.append(make_entry(frame_id="gone", path="gone.png"))
        report = validate_corpus(entries, tmp_path)
        kinds = [i.kind for i in report.issues]
        assert kinds == ["missing_file"]
        assert not report.usable

    def test_label_family_mismatch(self, tmp_path):
        entries = self._valid_corpus(tmp_path)
        rel = "bad.png"
        write_png(np.zeros((8, 8, 3), dtype=np.float32), tmp_path / rel)
        entries.append(
            make_entry(frame_id="bad", label="real", family="deepfake", path=rel)
        )
        report = validate_corpus(entries, tmp_path)
        assert [i.kind for i in report.issues] == ["label_family_mismatch"]

    def test_undecodable(self, tmp_path):
        entries = self._valid_corpus(tmp_path)
        (tmp_path / "junk.png").write_bytes(b"nope")
        entries.append(make_entry(frame_id="junk", path="junk.png"))
        report = validate_corpus(entries, tmp_path)
        assert [i.kind for i in report.issues] == ["undecodable"]

    def test_dimension_outlier_flagged_only_with_modal_size(self, tmp_path):
        entries = self._valid_corpus(tmp_path, n=8)
        rel = "odd.png"
        write_png(np.zeros((16, 16, 3), dtype=np.float32), tmp_path / rel)
        entries.append(make_entry(frame_id="odd", frame_index=9, path=rel))
        report = validate_corpus(entries, tmp_path)
        assert [i.kind for i in report.issues] == ["dimension_outlier"]
        assert report.usable  # outliers are advisory

    def test_heterogeneous_sizes_accepted(self, tmp_path):
        entries = []
        for i in range(4):
            rel = f"f{i}.png"
            write_png(np.zeros((8 + 4 * i, 8, 3), dtype=np.float32), tmp_path / rel)
            entries.append(make_entry(frame_id=f"f{i}", frame_index=i, path=rel))
        report = validate_corpus(entries, tmp_path)
        assert report.ok
