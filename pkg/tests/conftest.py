import pytest

from depchange.conllu import Sentence, Token


def make_sentence(rows, source_id=None):
    """rows: (lemma, upos, head, deprel) tuples, indices assigned from 1."""
    return Sentence(
        tuple(Token(i, lem, lem, pos, head, rel) for i, (lem, pos, head, rel) in enumerate(rows, start=1)),
        source_id,
    )


def conllu_block(rows, sent_id=None):
    lines = [f"# sent_id = {sent_id}"] if sent_id else []
    for i, (lem, pos, head, rel) in enumerate(rows, start=1):
        lines.append("\t".join([str(i), lem, lem, pos, "_", "_", str(head), rel, "_", "_"]))
    return "\n".join(lines) + "\n\n"


VERTICAL_PLANE = [("the", "DET", 3, "det"), ("vertical", "ADJ", 3, "amod"), ("plane", "NOUN", 0, "root")]
CUT_THE_GRAFT = [("cut", "VERB", 0, "root"), ("the", "DET", 3, "det"), ("graft", "NOUN", 1, "obj")]


@pytest.fixture
def vertical_plane():
    return make_sentence(VERTICAL_PLANE, "s1")


@pytest.fixture
def cut_the_graft():
    return make_sentence(CUT_THE_GRAFT, "s2")


# -- acceptance summary -------------------------------------------------------

ACCEPTANCE = []


def record(criterion, ok, detail=""):
    """Log one acceptance line, then fail the calling test if ``ok`` is false."""
    ACCEPTANCE.append((criterion, bool(ok), detail))
    assert ok, f"{criterion}: {detail}"


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, ok, detail in ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {criterion}  {detail}")
