from __future__ import annotations

from crown.corpus import CitationWindow, Corpus, build_corpus, parse_journals, parse_papers
from crown.synth import SynthConfig, generate_corpus

# The three cardiology-adjacent journals whose category assignments motivate
# the indexer diagnostic: two, three, and one subject categories.
CARDIOLOGY_JOURNALS_CSV = (
    "id,title,categories\n"
    "jvr,Journal of Vascular Research,peripheral vascular disease|physiology\n"
    "circ,Circulation,cardiac and cardiovascular systems|hematology|peripheral vascular diseases\n"
    "ajc,American Journal of Cardiology,cardiac and cardiovascular systems\n"
)


def corpus_from_text(
    papers_jsonl: str,
    journals_csv: str,
    window: CitationWindow = CitationWindow.all(),
) -> Corpus:
    papers = parse_papers(papers_jsonl.splitlines())
    journals = parse_journals(journals_csv.splitlines())
    return build_corpus(papers, journals, window)


def corpus_from_synth(
    config: SynthConfig, window: CitationWindow = CitationWindow.all()
) -> Corpus:
    papers_bytes, journals_bytes = generate_corpus(config)
    return corpus_from_text(
        papers_bytes.decode("utf-8"), journals_bytes.decode("utf-8"), window
    )
