import pytest

from topicconf.corpus.model import Corpus, Document
from topicconf.harness.synthetic import style_topic_corpus


def make_corpus(cells: dict[tuple[str, str], int], text="Some words here.") -> Corpus:
    """One document per count in each (author, topic) cell."""
    docs = []
    for (author, topic), n in cells.items():
        for i in range(n):
            docs.append(Document(f"{author}-{topic}-{i}", author, topic, f"{text} {author} {i}."))
    return Corpus(tuple(docs))


@pytest.fixture(scope="session")
def synthetic_corpus() -> Corpus:
    return style_topic_corpus(seed=0)


@pytest.fixture(scope="session")
def small_synthetic() -> Corpus:
    return style_topic_corpus(docs_per_cell=4, doc_length=120, seed=3)


# Per-author article counts of the 13-author, 4-topic news corpus; the shortfall
# of the five smaller authors all falls on the "society" topic.
GUARDIAN_AUTHOR_TOTALS = [35, 37, 38, 39, 39] + [40] * 8
GUARDIAN_TOPICS = ("politics", "society", "uk", "world")


def guardian_like_corpus() -> Corpus:
    cells = {}
    for i, total in enumerate(GUARDIAN_AUTHOR_TOTALS):
        for topic in GUARDIAN_TOPICS:
            cells[f"author{i:02d}", topic] = 10 - (40 - total) if topic == "society" else 10
    return make_corpus(cells)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
