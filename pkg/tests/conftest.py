import datetime as dt
import random

import numpy as np
import pytest

from corpusatlas.model import Document


TOPIC_VOCAB = {
    "cancer": "tumor chemotherapy immunotherapy oncology lung carcinoma metastasis therapy patient trial".split(),
    "gene": "gene genome mutation crispr editing dna sequencing variant expression allele".split(),
    "virus": "virus vaccine infection antibody pandemic viral immunity outbreak transmission pathogen".split(),
}


def make_corpus(n_docs: int, span_days: int, seed: int = 0,
                start: dt.date = dt.date(2023, 1, 1)) -> list[Document]:
    """Synthetic corpus with three vocab groups so hash embeddings cluster."""
    rng = random.Random(seed)
    names = list(TOPIC_VOCAB)
    docs = []
    for i in range(n_docs):
        group = names[i % len(names)]
        words = TOPIC_VOCAB[group]
        body = ". ".join(
            " ".join(rng.choices(words, k=8)).capitalize() for _ in range(rng.randint(3, 6))
        ) + "."
        docs.append(Document(
            doc_id=f"d{i:05d}",
            title=f"{group} study {i}",
            body=body,
            pub_date=start + dt.timedelta(days=rng.randrange(span_days)),
            journal=rng.choice(["J Med", "J Bio", "J Gen"]),
            authors=[f"Author {rng.randrange(20)}"],
        ))
    return docs


def sphere_blobs(centers: int, per_blob: int, dim: int, sigma: float, seed: int):
    """Gaussian blobs projected to the unit sphere, with ground-truth labels.

    Centers are drawn orthogonal-ish (random unit vectors, resampled until
    pairwise cosine < 0.5) so blob separation far exceeds sigma.
    """
    rng = np.random.default_rng(seed)
    cs = []
    while len(cs) < centers:
        c = rng.normal(size=dim)
        c /= np.linalg.norm(c)
        if all(abs(float(c @ o)) < 0.5 for o in cs):
            cs.append(c)
    points, labels = [], []
    for li, c in enumerate(cs):
        for _ in range(per_blob):
            p = c + rng.normal(scale=sigma, size=dim)
            p /= np.linalg.norm(p)
            points.append(p)
            labels.append(li)
    return np.array(points), np.array(labels), np.array(cs)


@pytest.fixture(scope="session")
def small_corpus():
    return make_corpus(120, 40, seed=7)
