import pytest

from scholarkg.document import (
    DocumentModel,
    Excerpt,
    Paragraph,
    Section,
    Sentence,
    collect_paragraphs,
    short_hash,
    validate_model,
    word_count,
)


def make_paragraph(pid: str, *texts: str) -> Paragraph:
    return Paragraph.from_sentences(pid, tuple(Sentence(t) for t in texts))


def test_short_hash_is_stable_and_sized():
    assert short_hash("abc") == short_hash("abc")
    assert len(short_hash("abc")) == 14
    assert len(short_hash("abc", 16)) == 32
    assert short_hash("abc") != short_hash("abd")


def test_word_count_splits_on_whitespace():
    assert word_count("one two  three\nfour") == 4
    assert word_count("") == 0


def test_paragraph_text_and_word_count():
    p = make_paragraph("p1", "First sentence.", "Second one here.")
    assert p.text == "First sentence. Second one here."
    assert p.word_count == 5


def test_excerpt_rejects_bad_word_range():
    with pytest.raises(ValueError):
        Excerpt("e", "l", "s", "m", word_index_from=5, word_index_to=3)
    with pytest.raises(ValueError):
        Excerpt("e", "l", "s", "m", word_index_from=-1, word_index_to=3)
    # equal endpoints are a single-word span and are fine
    Excerpt("e", "l", "s", "m", word_index_from=4, word_index_to=4)


def valid_model() -> DocumentModel:
    return DocumentModel(
        doc_id="d1",
        title="A Title",
        sections=(
            Section("1", "Introduction", (Sentence("Hello there."),)),
            Section("2", "Methods", (
                Section("2.1", "Setup", (make_paragraph("p21", "Configured."),)),
                Section("2.2", "Runs", (Sentence("Ran twice.", references=(3,)),)),
            )),
        ),
    )


def test_validate_model_accepts_valid():
    assert validate_model(valid_model()) == []


@pytest.mark.parametrize("section_id", ["", "1.a", "1..2", "01x"])
def test_validate_model_rejects_malformed_ids(section_id):
    model = DocumentModel("d", None, (Section(section_id, "H", ()),))
    issues = validate_model(model)
    assert issues and "id" in issues[0].message


def test_validate_model_rejects_duplicate_ids():
    model = DocumentModel("d", None, (
        Section("1", "A", ()),
        Section("1", "B", ()),
    ))
    assert any("duplicate" in i.message for i in validate_model(model))


def test_validate_model_requires_child_to_extend_parent():
    model = DocumentModel("d", None, (
        Section("1", "A", (Section("2.1", "B", ()),)),
    ))
    assert validate_model(model)


def test_validate_model_rejects_nested_top_level_id():
    model = DocumentModel("d", None, (Section("1.1", "A", ()),))
    assert validate_model(model)


def test_validate_model_flags_empty_texts_and_bad_references():
    model = DocumentModel("d", None, (
        Section("1", "", (Sentence(""), Sentence("ok", references=(0,)))),
    ))
    messages = [i.message for i in validate_model(model)]
    assert len(messages) == 3  # empty heading, empty sentence, reference < 1


def test_validate_model_checks_paragraph_word_count():
    bad = Paragraph("p", (Sentence("two words"),), word_count=7)
    model = DocumentModel("d", None, (Section("1", "H", (bad,)),))
    assert any("word" in i.message for i in validate_model(model))


def test_collect_paragraphs_keeps_explicit_paragraphs():
    model = valid_model()
    paragraphs = collect_paragraphs(model)
    assert [p.text for p in paragraphs] == ["Hello there.", "Configured.", "Ran twice."]


def test_collect_paragraphs_groups_consecutive_sentences():
    model = DocumentModel("doc", None, (
        Section("1", "H", (
            Sentence("One."),
            Sentence("Two."),
            Section("1.1", "Sub", (Sentence("Three."),)),
            Sentence("Four."),
        )),
    ))
    paragraphs = collect_paragraphs(model)
    assert [p.text for p in paragraphs] == ["One. Two.", "Three.", "Four."]
    # implicit ids derive from the document and the paragraph text
    expected = f"Paper-doc-Paragraph-{short_hash('One. Two.', 16)}"
    assert paragraphs[0].paragraph_id == expected


def test_iter_sections_is_depth_first_in_document_order():
    model = valid_model()
    assert [s.section_id for s in model.iter_sections()] == ["1", "2", "2.1", "2.2"]


def test_iter_sentences_covers_every_sentence():
    assert [s.text for s in valid_model().iter_sentences()] == [
        "Hello there.", "Configured.", "Ran twice."]
