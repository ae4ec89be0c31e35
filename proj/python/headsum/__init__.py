"""Headline-guided extractive summarization toolkit."""

try:
    from headsum import _core
except ImportError:  # running against a build tree, module next to the package
    import _core  # type: ignore[no-redef]

normalize_text = _core.normalize_text
split_sentences = _core.split_sentences
tokenize = _core.tokenize
rouge_n = _core.rouge_n
rouge_l = _core.rouge_l
bleu = _core.bleu
prf = _core.prf
oracle_indices = _core.oracle_indices
cosine = _core.cosine
aggregate = _core.aggregate
select = _core.select
run_pipeline = _core.run_pipeline
alpha_sweep = _core.alpha_sweep
analyze = _core.analyze

__all__ = [
    "normalize_text",
    "split_sentences",
    "tokenize",
    "rouge_n",
    "rouge_l",
    "bleu",
    "prf",
    "oracle_indices",
    "cosine",
    "aggregate",
    "select",
    "run_pipeline",
    "alpha_sweep",
    "analyze",
]
