import pytest

from respk import certificate as certs
from respk.amalgam import parse_surface_word, surface_amalgam, surface_separation_pipeline
from respk.separation import double_coset_witness, separate_conjugacy_free
from respk.words import Alphabet, Word, commutator, surface_alphabet

A2 = Alphabet.standard(2)
X, Y = Word.gen(0), Word.gen(1)


def _free_text(g, h, p=2):
    return certs.emit(certs.from_free_witness(separate_conjugacy_free(g, h, p, A2), p))


def _surface_text():
    A = surface_amalgam(2)
    g, h = parse_surface_word(A, "x1*x'1"), parse_surface_word(A, "y1*y'1")
    return certs.emit(certs.from_surface_witness(surface_separation_pipeline(A, g, h, 2), 2, 2))


@pytest.mark.parametrize(
    "make",
    [
        lambda: _free_text(X, Y),
        lambda: _free_text(X * Y, X.inv() * Y),
        lambda: _free_text(commutator(X, Y), commutator(Y, X)),
        lambda: _free_text(X * X * Y, Y * Y * X, 3),
        lambda: certs.emit(certs.from_double_coset(double_coset_witness(X, Y, 1, 2, surface_alphabet(1)), 2, 1)),
        _surface_text,
    ],
    ids=["cyclic", "homology", "wreath", "p3", "double-coset", "surface"],
)
def test_round_trip_and_pass(make):
    text = make()
    cert = certs.parse(text)
    assert certs.emit(cert) == text
    rep = certs.verify(cert)
    assert rep.passed, rep.messages


def test_output_is_deterministic():
    g, h = commutator(X, Y), commutator(Y, X)
    assert _free_text(g, h) == _free_text(g, h)
    assert _surface_text() == _surface_text()


def test_truncated_file_reports_line():
    lines = _free_text(X, Y).splitlines()
    with pytest.raises(certs.CertificateSyntaxError) as info:
        certs.parse("\n".join(lines[:9]))
    assert info.value.line == 10
    assert "line 10" in str(info.value)


def test_bad_header_and_garbage():
    with pytest.raises(certs.CertificateSyntaxError) as info:
        certs.parse("not a certificate\n")
    assert info.value.line == 1
    with pytest.raises(certs.CertificateSyntaxError) as info:
        certs.parse(_free_text(X, Y).replace("  step: powers\n", ""))
    assert info.value.line == 11


def test_malformed_element_literal_fails_verification():
    text = _free_text(X, Y).replace("image x: 1", "image x: 1;;")
    rep = certs.verify(certs.parse(text))
    assert rep.status == "fail"
    assert any("image of x" in m for m in rep.messages)


def test_corrupted_image_is_pinpointed():
    text = _free_text(X, Y).replace("image y: 0", "image y: 1")
    rep = certs.verify(certs.parse(text))
    assert rep.status == "fail"
    assert any("image of h" in m for m in rep.messages)


def test_claimed_conjugate_images_fail_with_conjugator():
    text = _free_text(X, Y).replace("image y: 0", "image y: 1").replace("image-h: 0", "image-h: 1")
    rep = certs.verify(certs.parse(text))
    assert rep.status == "fail"
    assert any("conjugate via" in m for m in rep.messages)


def test_corrupted_nested_node():
    text = _free_text(commutator(X, Y), commutator(Y, X))
    lines = text.splitlines()
    nested = next(i for i, l in enumerate(lines) if l.startswith("    image y~0:"))
    lines[nested] = "    image y~0: ((1,0),(0,0);1)"
    rep = certs.verify(certs.parse("\n".join(lines) + "\n"))
    assert rep.status == "fail"


def test_cap_is_reported():
    text = _free_text(commutator(X, Y), commutator(Y, X))
    rep = certs.verify(certs.parse(text), cap=1)
    assert rep.status == "cap-exceeded"
