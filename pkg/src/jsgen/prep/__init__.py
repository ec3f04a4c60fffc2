"""Dataset preprocessing: canonicalization, literal placeholders, member
simplification, tokenization. ``jsgen.prep.vocab`` holds the vocabulary."""
from .corpus import CATEGORIES, CorpusError, Example, load_corpus, preprocess, save_corpus
from .literals import replace_string_literals, restore_string_literals, simplify_member_access
from .text import join_subtokens, split_string_content, subtokenize, tokenize_description

__all__ = [
    "CATEGORIES", "CorpusError", "Example", "join_subtokens", "load_corpus", "preprocess",
    "replace_string_literals", "restore_string_literals", "save_corpus", "simplify_member_access",
    "split_string_content", "subtokenize", "tokenize_description",
]
