import numpy as np
import pytest

from sunlet.alignment import (
    Alignment,
    DuplicateLabelError,
    EmptyAlignmentError,
    RaggedAlignmentError,
    UnknownCharacterError,
    format_fasta,
    project_to_binary,
    read_fasta,
    write_fasta,
)


def test_from_strings_detects_alphabet():
    assert Alignment.from_strings(["a", "b"], ["0101", "1100"]).alphabet == "binary"
    assert Alignment.from_strings(["a", "b"], ["ACGT", "acgt"]).alphabet == "dna"


def test_rows_roundtrip():
    aln = Alignment.from_strings(["x", "y"], ["ACGTTA", "GGCATC"])
    assert aln.rows == ["ACGTTA", "GGCATC"]
    assert aln.n == 2 and aln.length == 6


def test_codes_are_read_only():
    aln = Alignment.from_strings(["x"], ["ACGT"])
    with pytest.raises(ValueError):
        aln.codes[0, 0] = 1


@pytest.mark.parametrize(
    "dna,binary",
    [("AGAG", "0000"), ("ACGT", "0101"), ("TTCC", "1111"), ("GATTACA", "0011010")],
)
def test_projection(dna, binary):
    assert project_to_binary(dna) == binary


def test_projection_of_alignment():
    aln = Alignment.from_strings(["a", "b"], ["ACGT", "TGCA"])
    proj = project_to_binary(aln)
    assert proj.alphabet == "binary" and proj.rows == ["0101", "1010"]
    assert project_to_binary(proj) is proj


def test_unknown_character_names_position():
    with pytest.raises(UnknownCharacterError, match="position 3"):
        project_to_binary("ACNT")
    with pytest.raises(UnknownCharacterError, match="'s2'"):
        Alignment.from_strings(["s1", "s2"], ["ACGT", "AC-T"])


def test_ragged_and_duplicates():
    with pytest.raises(RaggedAlignmentError, match="unequal sequence lengths"):
        Alignment.from_strings(["a", "b"], ["ACG", "ACGT"])
    with pytest.raises(DuplicateLabelError):
        Alignment.from_strings(["a", "a"], ["ACG", "ACG"])
    with pytest.raises(EmptyAlignmentError):
        Alignment.from_strings([], [])


def test_fasta_roundtrip(tmp_path):
    rng = np.random.default_rng(0)
    codes = rng.integers(0, 4, size=(5, 203), dtype=np.uint8)
    aln = Alignment(tuple(f"t{i}" for i in range(5)), codes, "dna")
    path = tmp_path / "a.fasta"
    write_fasta(aln, path)
    text = path.read_text()
    assert max(len(line) for line in text.splitlines()) == 80
    back = read_fasta(path)
    assert back == aln
    write_fasta(back, tmp_path / "b.fasta")
    assert (tmp_path / "b.fasta").read_bytes() == path.read_bytes()


def test_two_record_file(tmp_path):
    path = tmp_path / "toy.fa"
    path.write_text(">one\nACGT\nAC\n>two\nTTGGCA\n")
    aln = read_fasta(path)
    assert aln.labels == ("one", "two") and aln.rows == ["ACGTAC", "TTGGCA"]
    assert format_fasta(aln) == ">one\nACGTAC\n>two\nTTGGCA\n"


def test_fasta_errors(tmp_path):
    cases = {
        "empty.fa": ("", EmptyAlignmentError),
        "ragged.fa": (">a\nACGT\n>b\nACG\n", RaggedAlignmentError),
        "dup.fa": (">a\nACGT\n>a\nACGT\n", DuplicateLabelError),
        "noseq.fa": (">a\n>b\nACGT\n", EmptyAlignmentError),
    }
    for name, (text, err) in cases.items():
        path = tmp_path / name
        path.write_text(text)
        with pytest.raises(err):
            read_fasta(path)
    path = tmp_path / "headless.fa"
    path.write_text("ACGT\n>a\nACGT\n")
    with pytest.raises(ValueError):
        read_fasta(path)
