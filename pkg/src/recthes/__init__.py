"""recthes: multilingual document indexing over a rectangular thesaurus.

The package builds a language-independent thesaurus whose nodes are
gain-optimal rectangles of a term/document relation, fills it from
dictionary-normalized text, and answers set-inclusion queries in any
configured language.
"""

__version__ = "0.1.0"
