"""latinlex: a workbench for a morphologically expanded Latin lexicon.

Subpackages: lexicon (four-level entry store), morphology (paradigm-driven
expansion), corpus (ingestion, tokenization and token/lexicon sync),
lemmatize (lexicon-backed lemmatization and evaluation), embeddings
(stratified CBOW/skip-gram training), graphview (seed-centered nearest
neighbor graphs) and service (HTTP facade).
"""

__version__ = "0.1.0"
