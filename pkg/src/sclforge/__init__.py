from .words import Generator, Word, parse_word, comm, conj

__version__ = "0.1.0"
